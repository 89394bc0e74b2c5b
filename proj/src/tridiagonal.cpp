#include "magspec/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "magspec/errors.hpp"

namespace magspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double scale_of(const SymTridiagonal& t) {
    double s = 0.0;
    for (double d : t.diag) s = std::max(s, std::abs(d));
    for (double e : t.off) s = std::max(s, std::abs(e));
    return s;
}

// Solve (T - shift) x = rhs with partial pivoting; the factorization keeps two
// super-diagonals (as in LAPACK's gttrf). rhs is overwritten with the solution.
void shifted_solve(const SymTridiagonal& t, double shift, double pivot_floor,
                   std::vector<double>& rhs) {
    const std::size_t n = t.size();
    if (n == 1) {
        const double d0 = t.diag[0] - shift;
        rhs[0] /= (std::abs(d0) < pivot_floor ? pivot_floor : d0);
        return;
    }
    std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
    std::vector<double> sub(t.off);
    for (std::size_t i = 0; i + 1 < n; ++i) du[i] = t.off[i];

    std::vector<int> swapped(n, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(sub[i])) {
            if (std::abs(d[i]) < pivot_floor) d[i] = pivot_floor;
            const double f = sub[i] / d[i];
            dl[i] = f;
            d[i + 1] -= f * du[i];
            du2[i] = 0.0;
        } else {
            // swap rows i and i+1
            swapped[i] = 1;
            const double f = d[i] / sub[i];
            d[i] = sub[i];
            dl[i] = f;
            const double tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - f * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du[i + 1];
            }
        }
    }
    if (std::abs(d[n - 1]) < pivot_floor) d[n - 1] = pivot_floor;

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (swapped[i]) std::swap(rhs[i], rhs[i + 1]);
        rhs[i + 1] -= dl[i] * rhs[i];
    }
    rhs[n - 1] /= d[n - 1];
    rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    for (std::size_t k = n - 2; k-- > 0;) {
        rhs[k] = (rhs[k] - du[k] * rhs[k + 1] - du2[k] * rhs[k + 2]) / d[k];
    }
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

void SymTridiagonal::validate() const {
    if (diag.empty()) throw ConfigError("tridiagonal matrix is empty");
    if (off.size() + 1 != diag.size())
        throw ConfigError("tridiagonal off-diagonal must have n-1 entries");
}

std::size_t SymTridiagonal::count_below(double x) const {
    const std::size_t n = diag.size();
    const double tiny = std::numeric_limits<double>::min() / kEps;
    std::size_t count = 0;
    double q = diag[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(q) < tiny) q = -tiny;
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

double SymTridiagonal::gershgorin_lower() const {
    const std::size_t n = diag.size();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < n) r += std::abs(off[i]);
        lo = std::min(lo, diag[i] - r);
    }
    return lo;
}

double SymTridiagonal::gershgorin_upper() const {
    const std::size_t n = diag.size();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < n) r += std::abs(off[i]);
        hi = std::max(hi, diag[i] + r);
    }
    return hi;
}

double tridiagonal_eigenvalue(const SymTridiagonal& t, std::size_t k) {
    t.validate();
    if (k >= t.size())
        throw ConfigError("eigenvalue index " + std::to_string(k) + " out of range for size " +
                          std::to_string(t.size()));
    const double scale = std::max(scale_of(t), std::numeric_limits<double>::min());
    double lo = t.gershgorin_lower() - kEps * scale;
    double hi = t.gershgorin_upper() + kEps * scale;
    // count_below(lo) == 0 <= k < count_below(hi) holds throughout
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + 1e-300) break;
        if (mid <= lo || mid >= hi) break;
        if (t.count_below(mid) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> tridiagonal_lowest(const SymTridiagonal& t, std::size_t count) {
    t.validate();
    count = std::min(count, t.size());
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = tridiagonal_eigenvalue(t, k);
    return out;
}

std::vector<double> tridiagonal_below(const SymTridiagonal& t, double threshold) {
    t.validate();
    return tridiagonal_lowest(t, t.count_below(threshold));
}

std::vector<TridiagonalEigenpair> tridiagonal_lowest_pairs(const SymTridiagonal& t,
                                                           std::size_t count) {
    const auto values = tridiagonal_lowest(t, count);
    const std::size_t n = t.size();
    const double scale = std::max(scale_of(t), 1e-300);
    const double pivot_floor = kEps * scale;

    std::vector<TridiagonalEigenpair> out;
    out.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        std::vector<double> x(n);
        // deterministic, non-degenerate start vector
        for (std::size_t i = 0; i < n; ++i)
            x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3 * static_cast<double>(k));
        double nrm = norm2(x);
        for (double& v : x) v /= nrm;

        bool converged = false;
        for (int it = 0; it < 8; ++it) {
            shifted_solve(t, values[k], pivot_floor, x);
            for (const auto& prev : out) {
                const double p = std::inner_product(prev.vector.begin(), prev.vector.end(),
                                                    x.begin(), 0.0);
                for (std::size_t i = 0; i < n; ++i) x[i] -= p * prev.vector[i];
            }
            nrm = norm2(x);
            if (!std::isfinite(nrm) || nrm == 0.0)
                throw NumericalError("inverse iteration broke down for eigenvalue " +
                                     std::to_string(k));
            for (double& v : x) v /= nrm;
            // growth factor 1/nrm ~ residual norm |(T - lambda) x|
            if (it >= 1 && 1.0 / nrm < 1e3 * kEps * scale * std::sqrt(static_cast<double>(n))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            // check the residual explicitly before giving up
            double r2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double r = (t.diag[i] - values[k]) * x[i];
                if (i > 0) r += t.off[i - 1] * x[i - 1];
                if (i + 1 < n) r += t.off[i] * x[i + 1];
                r2 += r * r;
            }
            if (std::sqrt(r2) > 1e-8 * scale)
                throw NumericalError("inverse iteration did not converge for eigenvalue " +
                                     std::to_string(k) + ", residual " +
                                     std::to_string(std::sqrt(r2)));
        }
        out.push_back({values[k], std::move(x)});
    }
    return out;
}

}  // namespace magspec

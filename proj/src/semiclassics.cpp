#include "magspec/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "magspec/errors.hpp"
#include "magspec/parallel.hpp"
#include "magspec/quadrature.hpp"

namespace magspec {

namespace {

constexpr std::size_t kCurveOrder = 8;

// Envelope for 1 - mu_1(xi) on xi >= x (the true decay is ~ xi exp(-xi^2)):
// int_x^inf exp(-xi^2/2) dxi.
double tail_envelope(double x) {
    return std::sqrt(std::numbers::pi / 2.0) * std::erfc(x / std::numbers::sqrt2);
}

double bisect(const Mu1Table& t, double c, double lo, double hi, bool decreasing) {
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const bool below = t(mid) < c;
        if (below == decreasing)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

struct Roots {
    double minus = 0.0;
    double plus = 0.0;
    bool hit_end = false;  // right branch stays below c up to xi_max
};

// Roots of mu_1 = c on both monotone branches, theta0 < c.
Roots branch_roots(double c, const Mu1Table& t, double xi_star) {
    const auto& v = t.values();
    const std::size_t n = v.size();
    Roots r;
    // left: last node left of xi_star with value > c
    long i = static_cast<long>(std::floor((xi_star - t.xi_min()) / t.step()));
    i = std::clamp(i, 0L, static_cast<long>(n) - 1);
    while (i >= 0 && !(v[static_cast<std::size_t>(i)] > c)) --i;
    if (i < 0) throw NumericalError("sublevel set of mu_1 reaches the left end of the table");
    const double left_lo = t.xi_at(static_cast<std::size_t>(i));
    const double left_hi = std::min(t.xi_at(static_cast<std::size_t>(i) + 1), xi_star);
    r.minus = bisect(t, c, left_lo, left_hi, true);

    std::size_t j = static_cast<std::size_t>(std::ceil((xi_star - t.xi_min()) / t.step()));
    j = std::min(j, n - 1);
    while (j < n && !(v[j] >= c)) ++j;
    if (j == n) {
        r.plus = t.xi_max();
        r.hit_end = true;
        return r;
    }
    const double right_hi = t.xi_at(j);
    const double right_lo = j == 0 ? t.xi_min() : std::max(t.xi_at(j - 1), xi_star);
    r.plus = bisect(t, c, right_lo, right_hi, false);
    return r;
}

std::vector<double> breakpoints(const Mu1Table& t, double a, double b) {
    std::vector<double> bp{a};
    for (std::size_t i = 0; i < t.values().size(); ++i) {
        const double x = t.xi_at(i);
        if (x > a && x < b) bp.push_back(x);
    }
    bp.push_back(b);
    return bp;
}

}  // namespace

FieldProfile FieldProfile::constant(double b, double theta0) {
    if (!(b > 0.0)) throw ConfigError("field strength must be positive");
    FieldProfile f;
    f.B = [b](Point2) { return b; };
    f.b = b;
    f.b_prime = b;
    f.hyp_ok = b > theta0 * b && theta0 * b > 0.0;
    return f;
}

FieldProfile FieldProfile::from_function(const BoundaryCurve& curve, std::function<double(Point2)> B,
                                         double b, double theta0) {
    if (!B) throw ConfigError("field function is empty");
    double bmin = std::numeric_limits<double>::infinity();
    for (const CurveSample& s : curve.samples()) bmin = std::min(bmin, B(s.position));
    for (const CurveNode& n : curve.quadrature(kCurveOrder)) bmin = std::min(bmin, B(n.position));
    if (!(bmin > 0.0)) throw ConfigError("field must be positive on the boundary");
    if (!(b > 0.0)) throw ConfigError("field infimum b must be positive");
    if (b > bmin * (1.0 + 1e-12))
        throw ConfigError("b = " + std::to_string(b) + " exceeds the boundary minimum " +
                          std::to_string(bmin) + " of the field");
    FieldProfile f;
    f.B = std::move(B);
    f.b = b;
    f.b_prime = bmin;
    f.hyp_ok = b > theta0 * bmin && theta0 * bmin > 0.0;
    return f;
}

std::vector<double> FieldProfile::boundary_values(const BoundaryCurve& curve) const {
    std::vector<double> out;
    out.reserve(curve.samples().size());
    for (const CurveSample& s : curve.samples()) out.push_back(B(s.position));
    return out;
}

bool table_is_unimodal(const Mu1Table& table, double noise) {
    const auto& v = table.values();
    const std::size_t k = table.argmin_index();
    for (std::size_t i = 1; i <= k; ++i)
        if (v[i] - v[i - 1] > noise) return false;
    for (std::size_t i = k + 1; i < v.size(); ++i)
        if (v[i] - v[i - 1] < -noise) return false;
    return true;
}

namespace {

// Fallback: midpoint counting on a fine grid over the whole table.
void fine_grid(double c, const Mu1Table& t, double& measure, double& moment, double& lo, double& hi) {
    const auto cells = static_cast<std::size_t>(std::ceil((t.xi_max() - t.xi_min()) / kFallbackStep));
    const double dx = (t.xi_max() - t.xi_min()) / static_cast<double>(cells);
    measure = moment = 0.0;
    lo = t.xi_max();
    hi = t.xi_min();
    for (std::size_t i = 0; i < cells; ++i) {
        const double x = t.xi_min() + (static_cast<double>(i) + 0.5) * dx;
        const double m = t(x);
        if (m < c) {
            measure += dx;
            moment += (c - m) * dx;
            lo = std::min(lo, x - 0.5 * dx);
            hi = std::max(hi, x + 0.5 * dx);
        }
    }
}

}  // namespace

LevelSet level_set_below(double c, const Mu1Table& table) {
    if (!(c < 1.0))
        throw DomainError("level set {mu_1 < c} is unbounded for c >= 1 (got c = " +
                          std::to_string(c) + ")");
    LevelSet s;
    const auto [xi_star, theta0] = table.minimum();
    if (!(c > theta0)) {
        s.xi_minus = s.xi_plus = xi_star;
        return s;
    }
    if (!table_is_unimodal(table)) {
        double moment = 0.0;
        s.unimodal = false;
        fine_grid(c, table, s.measure, moment, s.xi_minus, s.xi_plus);
        return s;
    }
    const Roots r = branch_roots(c, table, xi_star);
    if (r.hit_end)
        throw NumericalError("level set {mu_1 < " + std::to_string(c) +
                             "} extends beyond the table end xi = " + std::to_string(table.xi_max()));
    s.xi_minus = r.minus;
    s.xi_plus = r.plus;
    s.measure = r.plus - r.minus;
    return s;
}

MomentResult edge_moment_detailed(double c, const Mu1Table& table) {
    if (!(c > 0.0) || c > 1.0)
        throw DomainError("edge moment needs 0 < c <= 1 (got c = " + std::to_string(c) + ")");
    MomentResult m;
    const auto [xi_star, theta0] = table.minimum();
    if (!(c > theta0)) {
        m.xi_minus = m.xi_plus = xi_star;
        return m;
    }
    if (!table_is_unimodal(table)) {
        double measure = 0.0;
        m.unimodal = false;
        fine_grid(c, table, measure, m.value, m.xi_minus, m.xi_plus);
        m.tail_bound = tail_envelope(table.xi_max());
        return m;
    }
    const Roots r = branch_roots(c, table, xi_star);
    m.xi_minus = r.minus;
    m.xi_plus = r.plus;
    // the spline is cubic between nodes, so 3 Gauss points per piece are exact
    const QuadratureRule q = composite_gauss_legendre(breakpoints(table, r.minus, r.plus), 3);
    m.value = q.integrate([&](double xi) { return std::max(0.0, c - table(xi)); });
    if (r.hit_end || c == 1.0) m.tail_bound = tail_envelope(r.plus);
    return m;
}

double edge_moment(double c, const Mu1Table& table) { return edge_moment_detailed(c, table).value; }

double boundary_energy_coefficient(const BoundaryCurve& curve, const FieldProfile& field,
                                   const Mu1Table& table, unsigned threads) {
    if (!field.hyp_ok)
        throw PreconditionError("field hypothesis b > theta0 * b' > 0 violated (b = " +
                                std::to_string(field.b) + ", b' = " + std::to_string(field.b_prime) +
                                ")");
    if (!curve.closed()) throw ConfigError("boundary coefficients need a closed curve");
    const auto nodes = curve.quadrature(kCurveOrder);
    const auto terms = parallel_map(nodes.size(), threads, [&](std::size_t i) {
        const double B = field.B(nodes[i].position);
        return nodes[i].weight * std::pow(B, 1.5) * edge_moment(std::min(1.0, field.b / B), table);
    });
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum / (2.0 * std::numbers::pi);
}

double counting_coefficient(const BoundaryCurve& curve, const FieldProfile& field, double lambda,
                            const Mu1Table& table, unsigned threads) {
    if (!(lambda > 0.0) || !(lambda < field.b))
        throw DomainError("counting coefficient needs 0 < lambda < b (lambda = " +
                          std::to_string(lambda) + ", b = " + std::to_string(field.b) + ")");
    if (!curve.closed()) throw ConfigError("boundary coefficients need a closed curve");
    const auto nodes = curve.quadrature(kCurveOrder);
    const auto terms = parallel_map(nodes.size(), threads, [&](std::size_t i) {
        const double B = field.B(nodes[i].position);
        return nodes[i].weight * std::sqrt(B) * level_set_below(lambda / B, table).measure;
    });
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum / (2.0 * std::numbers::pi);
}

BulkBoundarySplit bulk_boundary_split(const BoundaryCurve& curve, double b, double a,
                                      const Mu1Table& table) {
    if (!curve.closed()) throw ConfigError("bulk term needs a bounded domain (closed curve)");
    if (!(b > 0.0)) throw ConfigError("field strength must be positive");
    BulkBoundarySplit s;
    s.boundary_term = curve.length() * std::pow(b, 1.5) * edge_moment(1.0, table) / (2.0 * std::numbers::pi);
    s.bulk_term = curve.enclosed_area() * b * std::max(a, 0.0) / (2.0 * std::numbers::pi);
    return s;
}

AsymptoticCoefficients asymptotic_coefficients(const BoundaryCurve& curve,
                                               const FieldProfile& field, double lambda,
                                               const Mu1Table& table, unsigned threads) {
    AsymptoticCoefficients c;
    c.boundary_energy = boundary_energy_coefficient(curve, field, table, threads);
    c.counting = counting_coefficient(curve, field, lambda, table, threads);
    c.bulk = curve.enclosed_area() * field.b / (2.0 * std::numbers::pi);
    return c;
}

}  // namespace magspec

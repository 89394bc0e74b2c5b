#include "magspec/models2d.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "magspec/degennes.hpp"
#include "magspec/errors.hpp"
#include "magspec/parallel.hpp"
#include "magspec/tridiagonal.hpp"

namespace magspec {

namespace {

constexpr double kCylinderXiMargin = 2.0;
constexpr double kThresholdFlag = 1e-10;      // in units of hb
constexpr double kExteriorMinMargin = 10.0;   // R_out - R in magnetic lengths
constexpr double kExteriorDefaultMargin = 12.0;
constexpr double kExteriorSensitivityShift = 2.0;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

void CylinderSpec::validate() const {
    if (!(S > 0.0) || !(T > 0.0) || !(b > 0.0) || !(lambda > 0.0) || !(h > 0.0))
        throw ConfigError("cylinder parameters S, T, b, lambda, h must be positive");
    if (!(lambda < 1.0)) throw ConfigError("cylinder energy needs lambda < 1");
}

double cylinder_energy_bound(const CylinderSpec& s) {
    s.validate();
    return (1.0 + s.lambda) * s.h * s.b * (s.S * s.T / (2.0 * std::numbers::pi * std::sqrt(s.h)) + 1.0);
}

CylinderEnergy cylinder_energy_exact(const CylinderSpec& spec, std::size_t n_points, unsigned threads) {
    spec.validate();
    // t = sqrt(h/b) tau maps (0, h^{1/2} T) onto (0, T sqrt(b))
    const double height = spec.T * std::sqrt(spec.b);
    const double dxi = 2.0 * std::numbers::pi * std::sqrt(spec.h) / (std::sqrt(spec.b) * spec.S);
    const double level = 1.0 + spec.lambda;
    // lowest Dirichlet-Neumann eigenvalue of -d^2 on [0, height] plus the potential minimum
    const double kinetic = std::pow(std::numbers::pi / (2.0 * height), 2);
    const auto lower_bound = [&](double xi) {
        const double gap = xi < 0.0 ? -xi : (xi > height ? xi - height : 0.0);
        return gap * gap + kinetic;
    };
    const auto include = [&](long n) {
        const double xi = dxi * static_cast<double>(n);
        return lower_bound(xi) < level || std::abs(xi) <= 2.0 * height + kCylinderXiMargin;
    };
    long n_min = 0, n_max = 0;
    while (include(n_min - 1)) --n_min;
    while (include(n_max + 1)) ++n_max;

    const auto count = static_cast<std::size_t>(n_max - n_min + 1);
    const auto bands = parallel_map(count, threads, [&](std::size_t i) {
        const double xi = dxi * static_cast<double>(n_min + static_cast<long>(i));
        if (!(lower_bound(xi) < level)) return std::vector<double>{};
        return de_gennes_eigenvalues_below(DeGennesConfig::dirichlet(xi, height, n_points), level);
    });
    CylinderEnergy r;
    r.n_min = n_min;
    r.n_max = n_max;
    double sum = 0.0;
    for (const auto& mus : bands) {
        r.max_band_count = std::max(r.max_band_count, mus.size());
        for (double mu : mus) sum += level - mu;
    }
    r.energy = spec.h * spec.b * sum;

    const double excluded = std::min(lower_bound(dxi * static_cast<double>(n_min - 1)),
                                     lower_bound(dxi * static_cast<double>(n_max + 1)));
    r.certificates.push_back(
        {"n-cutoff",
         "modes n in [" + std::to_string(n_min) + ", " + std::to_string(n_max) +
             "]; excluded modes have mu_1 >= " + fmt(excluded) + " >= 1 + lambda = " + fmt(level),
         excluded, excluded >= level});
    r.certificates.push_back(
        {"j-cutoff",
         "bands counted by Sturm sequence below 1 + lambda; at most " +
             std::to_string(r.max_band_count) + " band(s) per mode" +
             (r.max_band_count <= 1 ? " (single-band reduction holds)" : ""),
         static_cast<double>(r.max_band_count), true});
    return r;
}

void DiskSpec::validate() const {
    if (!(R > 0.0) || !(b > 0.0) || !(h > 0.0)) throw ConfigError("disk R, b, h must be positive");
    if (m_margin < 0) throw ConfigError("m_margin must be non-negative");
    if (n_radial != 0 && n_radial < 200)
        throw ConfigError("n_radial must be at least 200 (got " + std::to_string(n_radial) + ")");
    if (exterior && R_out != 0.0 && R_out < R + kExteriorMinMargin * magnetic_length())
        throw ConfigError("R_out = " + fmt(R_out) + " is closer than 10 magnetic lengths to R");
}

double DiskSpec::magnetic_length() const { return std::sqrt(h / b); }

std::size_t DiskSpec::radial_points() const {
    if (n_radial != 0) return n_radial;
    const double width = outer_radius() - (exterior ? R : 0.0);
    return std::max<std::size_t>(400, static_cast<std::size_t>(std::ceil(80.0 * width / magnetic_length())));
}

double DiskSpec::outer_radius() const {
    if (!exterior) return R;
    return R_out != 0.0 ? R_out : R + kExteriorDefaultMargin * magnetic_length();
}

namespace {

double potential(const DiskSpec& s, int m, double r) {
    const double v = static_cast<double>(m) * s.h / r - 0.5 * s.b * r;
    return v * v;
}

// Minimum of (m h / r - b r / 2)^2 over [ra, rb].
double potential_min(const DiskSpec& s, int m, double ra, double rb) {
    if (m > 0) {
        const double r0 = std::sqrt(2.0 * m * s.h / s.b);
        if (r0 >= ra && r0 <= rb) return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    if (ra > 0.0 || m == 0) best = std::min(best, potential(s, m, std::max(ra, 1e-300)));
    best = std::min(best, potential(s, m, rb));
    if (m < 0) {
        const double rc = std::sqrt(-2.0 * m * s.h / s.b);
        if (rc >= ra && rc <= rb) best = std::min(best, potential(s, m, rc));
    }
    if (m == 0 && ra == 0.0) best = 0.0;
    return best;
}

SymTridiagonal sector_matrix(const DiskSpec& s, int m, std::size_t n, double r_out) {
    const double r0 = s.exterior ? s.R : 0.0;
    const double dr = (r_out - r0) / static_cast<double>(n);
    const double h2 = s.h * s.h;
    const double c = h2 / (dr * dr);
    SymTridiagonal t;
    t.diag.resize(n);
    t.off.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double ri = r0 + (static_cast<double>(i) + 0.5) * dr;
        const double face_in = r0 + static_cast<double>(i) * dr;
        const double face_out = face_in + dr;
        double flux = 0.0;
        if (i > 0) flux += face_in;  // the inner boundary face carries no flux (natural condition)
        if (i + 1 < n)
            flux += face_out;
        else if (s.exterior)
            flux += 2.0 * face_out;  // Dirichlet at R_out: ghost value -u at half a cell
        t.diag[i] = c * flux / ri + potential(s, m, ri);
        if (i + 1 < n) {
            const double rj = ri + dr;
            t.off[i] = -c * face_out / std::sqrt(ri * rj);
        }
    }
    return t;
}

struct SectorRange {
    int lo = 0;
    int hi = 0;
    double excluded_min = 0.0;  // smallest potential minimum among the first excluded sectors
};

SectorRange sector_range(const DiskSpec& s, double threshold) {
    const double ra = s.exterior ? s.R : 0.0;
    const double rb = s.outer_radius();
    const int start = s.exterior ? static_cast<int>(std::lround(s.b * s.R * s.R / (2.0 * s.h))) : 0;
    SectorRange r{start, start, 0.0};
    if (!(potential_min(s, start, ra, rb) < threshold)) {
        r.hi = start - 1;  // empty
    } else {
        while (potential_min(s, r.lo - 1, ra, rb) < threshold) --r.lo;
        while (potential_min(s, r.hi + 1, ra, rb) < threshold) ++r.hi;
    }
    r.excluded_min = std::min(potential_min(s, r.lo - 1, ra, rb), potential_min(s, r.hi + 1, ra, rb));
    return r;
}

}  // namespace

double disk_sector_lowest(const DiskSpec& spec, int m, std::size_t n_radial) {
    spec.validate();
    return tridiagonal_eigenvalue(sector_matrix(spec, m, n_radial, spec.outer_radius()), 0);
}

SpectrumResult disk_spectrum(const DiskSpec& spec, double threshold, const DiskSolveOptions& options) {
    spec.validate();
    const double bh = spec.b * spec.h;
    if (!(threshold > 0.0)) throw ConfigError("threshold must be positive");
    if (spec.exterior) {
        if (threshold > bh * (1.0 + 1e-12))
            throw ConfigError("exterior threshold " + fmt(threshold) +
                              " exceeds hb, the bottom of the bulk spectrum");
    } else if (threshold > bh * (1.0 + kMaxThresholdExcess)) {
        throw ConfigError("threshold " + fmt(threshold) + " exceeds hb(1 + " +
                          fmt(kMaxThresholdExcess) + ")");
    }
    const std::size_t n = spec.radial_points();
    const SectorRange range = sector_range(spec, threshold);

    SpectrumResult res;
    res.threshold = threshold;
    res.h = spec.h;
    res.b = spec.b;
    res.m_min = range.lo - spec.m_margin;
    res.m_max = range.hi + spec.m_margin;

    const auto solve_all = [&](double r_out) {
        const auto count = static_cast<std::size_t>(res.m_max - res.m_min + 1);
        return parallel_map(count, options.threads, [&](std::size_t i) {
            const int m = res.m_min + static_cast<int>(i);
            return tridiagonal_below(sector_matrix(spec, m, n, r_out), threshold);
        });
    };
    const auto sectors = solve_all(spec.outer_radius());

    std::vector<std::pair<double, int>> all;
    std::size_t margin_hits = 0;
    for (std::size_t i = 0; i < sectors.size(); ++i) {
        const int m = res.m_min + static_cast<int>(i);
        if ((m < range.lo || m > range.hi) && !sectors[i].empty()) margin_hits += sectors[i].size();
        for (double e : sectors[i]) {
            if (threshold - e < kThresholdFlag * bh)
                res.flagged.push_back(e);
            else
                all.emplace_back(e, m);
        }
    }
    std::sort(all.begin(), all.end());
    for (const auto& [e, m] : all) {
        res.eigenvalues.push_back(e);
        res.sector_labels.push_back(m);
    }
    std::sort(res.flagged.begin(), res.flagged.end());

    res.certificates.push_back(
        {"m-cutoff",
         "sectors m in [" + std::to_string(range.lo) + ", " + std::to_string(range.hi) +
             "] plus margin " + std::to_string(spec.m_margin) +
             "; first excluded sectors have potential >= " + fmt(range.excluded_min) +
             " >= threshold " + fmt(threshold),
         range.excluded_min, range.excluded_min >= threshold});
    res.certificates.push_back({"m-margin",
                                std::to_string(margin_hits) + " eigenvalue(s) found in margin sectors",
                                static_cast<double>(margin_hits), margin_hits == 0});

    if (options.check_resolution && !res.eigenvalues.empty()) {
        const int m1 = res.sector_labels.front();
        const double coarse = res.eigenvalues.front();
        const double fine = tridiagonal_eigenvalue(sector_matrix(spec, m1, 2 * n, spec.outer_radius()), 0);
        const double change = std::abs(fine - coarse) / bh;
        if (change > options.resolution_tolerance)
            throw NumericalError("radial grid under-resolved: e_1/(hb) changes by " + fmt(change) +
                                 " when n_radial doubles from " + std::to_string(n));
        res.certificates.push_back({"resolution",
                                    "e_1/(hb) changes by " + fmt(change) + " when n_radial doubles from " +
                                        std::to_string(n),
                                    change, true});
    }
    if (spec.exterior) {
        const double shifted = spec.outer_radius() + kExteriorSensitivityShift * spec.magnetic_length();
        const auto again = solve_all(shifted);
        double worst = 0.0;
        for (std::size_t i = 0; i < sectors.size(); ++i)
            for (std::size_t k = 0; k < std::min(sectors[i].size(), again[i].size()); ++k)
                worst = std::max(worst, std::abs(sectors[i][k] - again[i][k]) / bh);
        res.certificates.push_back({"R_out-sensitivity",
                                    "max |delta e|/(hb) = " + fmt(worst) + " when R_out grows by " +
                                        fmt(kExteriorSensitivityShift) + " magnetic lengths",
                                    worst, true});
    }
    return res;
}

double riesz_mean(const SpectrumResult& spectrum, double shift) {
    if (shift > spectrum.threshold)
        throw PreconditionError("Riesz mean at " + fmt(shift) + " needs the spectrum below it; computed only below " +
                                fmt(spectrum.threshold));
    double sum = 0.0;
    for (double e : spectrum.eigenvalues) {
        if (e >= shift) break;
        sum += shift - e;
    }
    return sum;
}

std::size_t counting_function(const SpectrumResult& spectrum, double level) {
    if (level > spectrum.threshold)
        throw PreconditionError("counting at " + fmt(level) + " needs the spectrum below it; computed only below " +
                                fmt(spectrum.threshold));
    return static_cast<std::size_t>(
        std::lower_bound(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), level) -
        spectrum.eigenvalues.begin());
}

std::vector<double> disk_spectrum_peierls(const PeierlsDiskSpec& s, std::size_t count) {
    if (!(s.R > 0.0) || !(s.b > 0.0) || !(s.h > 0.0)) throw ConfigError("disk R, b, h must be positive");
    if (s.n_r < 2 || s.n_theta < 3) throw ConfigError("Peierls grid too small");
    const std::size_t nr = s.n_r, nt = s.n_theta, N = nr * nt;
    if (count == 0 || count > N) throw ConfigError("invalid eigenvalue count");
    const double dr = s.R / static_cast<double>(nr);
    const double dth = 2.0 * std::numbers::pi / static_cast<double>(nt);
    const auto idx = [nt](std::size_t i, std::size_t j) { return i * nt + j; };
    const auto radius = [dr](std::size_t i) { return (static_cast<double>(i) + 0.5) * dr; };
    const auto point = [&](std::size_t i, std::size_t j) {
        const double th = (static_cast<double>(j) + 0.5) * dth;
        return Point2{s.center.x1 + radius(i) * std::cos(th), s.center.x2 + radius(i) * std::sin(th)};
    };
    // A is linear, so the midpoint rule gives the exact line integral along a chord
    const auto phase = [&](Point2 x, Point2 y) {
        const Point2 mid = 0.5 * (x + y);
        const Point2 a{-0.5 * s.b * (mid.x2 - s.gauge_origin.x2), 0.5 * s.b * (mid.x1 - s.gauge_origin.x1)};
        return dot(a, y - x) / s.h;
    };
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    const auto link = [&](std::size_t p, std::size_t q, double w, double theta) {
        const auto P = static_cast<Eigen::Index>(p), Q = static_cast<Eigen::Index>(q);
        K(P, P) += w;
        K(Q, Q) += w;
        K(P, Q) -= w * std::polar(1.0, -theta);
        K(Q, P) -= w * std::polar(1.0, theta);
    };
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const Point2 x = point(i, j);
            if (i + 1 < nr) link(idx(i, j), idx(i + 1, j), (static_cast<double>(i) + 1.0) * dr * dth / dr,
                                 phase(x, point(i + 1, j)));
            const std::size_t jn = (j + 1) % nt;
            link(idx(i, j), idx(i, jn), dr / (radius(i) * dth), phase(x, point(i, jn)));
        }
    Eigen::VectorXd inv_sqrt_mass(static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j)
            inv_sqrt_mass[static_cast<Eigen::Index>(idx(i, j))] = 1.0 / std::sqrt(radius(i) * dr * dth);
    const Eigen::MatrixXcd H =
        (s.h * s.h) * (inv_sqrt_mass.asDiagonal() * K * inv_sqrt_mass.asDiagonal());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("dense Hermitian eigensolver failed");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = es.eigenvalues()[static_cast<Eigen::Index>(k)];
    return out;
}

}  // namespace magspec

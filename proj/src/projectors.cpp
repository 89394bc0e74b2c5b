#include "magspec/projectors.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "magspec/errors.hpp"
#include "magspec/quadrature.hpp"

namespace magspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BoxQuadrature {
    QuadratureRule x1;
    QuadratureRule x2;
    std::vector<cdouble> values;  // row-major: values[a * x2.size() + c]

    cdouble at(std::size_t a, std::size_t c) const { return values[a * x2.size() + c]; }
};

BoxQuadrature sample_on_box(const TestFunction& f, std::size_t refinement) {
    BoxQuadrature q;
    q.x1 = composite_gauss_legendre(f.x1_min, f.x1_max, f.panels1 * refinement, f.order);
    q.x2 = composite_gauss_legendre(0.0, f.x2_max, f.panels2 * refinement, f.order);
    q.values.resize(q.x1.size() * q.x2.size());
    for (std::size_t a = 0; a < q.x1.size(); ++a)
        for (std::size_t c = 0; c < q.x2.size(); ++c)
            q.values[a * q.x2.size() + c] = f.eval({q.x1.nodes[a], q.x2.nodes[c]});
    return q;
}

double box_norm(const BoxQuadrature& q) {
    double s = 0.0;
    for (std::size_t a = 0; a < q.x1.size(); ++a)
        for (std::size_t c = 0; c < q.x2.size(); ++c)
            s += q.x1.weights[a] * q.x2.weights[c] * std::norm(q.at(a, c));
    return std::sqrt(s);
}

void validate_test_function(const TestFunction& f) {
    if (!f.eval) throw ConfigError("test function has no evaluation rule");
    if (!(f.x1_max > f.x1_min) || !(f.x2_max > 0.0))
        throw ConfigError("test function quadrature box is empty");
    if (f.panels1 == 0 || f.panels2 == 0 || f.order == 0)
        throw ConfigError("test function quadrature needs nodes");
}

struct ResolutionPass {
    double defect = 0.0;
    double f_norm = 0.0;
};

ResolutionPass resolution_pass(double h, double b, const TestFunction& f, double xi_cut, int j_max,
                               const ResolutionIdentityOptions& options, std::size_t refinement) {
    const double k = std::sqrt(b / h);
    const BoxQuadrature q = sample_on_box(f, refinement);
    const std::size_t n1 = q.x1.size();
    const std::size_t n2 = q.x2.size();
    const QuadratureRule xi_rule =
        composite_gauss_legendre(-xi_cut, xi_cut, options.xi_panels * refinement, options.xi_order);

    HalfPlaneModeSource source(options.n_points, static_cast<std::size_t>(j_max),
                               k * f.x2_max + 1.0);
    std::vector<cdouble> recon(n1 * n2, cdouble{});
    std::vector<double> u(static_cast<std::size_t>(j_max) * n2);
    std::vector<cdouble> g(n2);
    std::vector<cdouble> coeff(static_cast<std::size_t>(j_max));
    std::vector<cdouble> profile(n2);

    for (std::size_t m = 0; m < xi_rule.size(); ++m) {
        const double xi = xi_rule.nodes[m];
        for (int j = 1; j <= j_max; ++j) {
            const ModeInterpolant& mode = source.mode(j, xi);
            for (std::size_t c = 0; c < n2; ++c)
                u[static_cast<std::size_t>(j - 1) * n2 + c] = mode(k * q.x2.nodes[c]);
        }
        // partial Fourier transform in x1
        std::fill(g.begin(), g.end(), cdouble{});
        for (std::size_t a = 0; a < n1; ++a) {
            const cdouble phase = std::polar(q.x1.weights[a], k * xi * q.x1.nodes[a]);
            for (std::size_t c = 0; c < n2; ++c) g[c] += phase * q.at(a, c);
        }
        for (int j = 0; j < j_max; ++j) {
            cdouble s{};
            for (std::size_t c = 0; c < n2; ++c)
                s += q.x2.weights[c] * u[static_cast<std::size_t>(j) * n2 + c] * g[c];
            coeff[static_cast<std::size_t>(j)] = s;
        }
        for (std::size_t c = 0; c < n2; ++c) {
            cdouble s{};
            for (int j = 0; j < j_max; ++j)
                s += u[static_cast<std::size_t>(j) * n2 + c] * coeff[static_cast<std::size_t>(j)];
            profile[c] = s * (xi_rule.weights[m] * (b / h) / kTwoPi);
        }
        for (std::size_t a = 0; a < n1; ++a) {
            const cdouble phase = std::polar(1.0, -k * xi * q.x1.nodes[a]);
            for (std::size_t c = 0; c < n2; ++c) recon[a * n2 + c] += phase * profile[c];
        }
    }

    ResolutionPass out;
    double num = 0.0;
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t c = 0; c < n2; ++c)
            num += q.x1.weights[a] * q.x2.weights[c] * std::norm(recon[a * n2 + c] - q.at(a, c));
    out.defect = std::sqrt(num);
    out.f_norm = box_norm(q);
    return out;
}

}  // namespace

ProjectorKernel ProjectorKernel::landau(int level, double h, double b) {
    ProjectorKernel p{KernelKind::Landau, level, h, b, 0.0};
    p.validate();
    return p;
}

ProjectorKernel ProjectorKernel::half_plane(int level, double h, double b, double xi) {
    ProjectorKernel p{KernelKind::HalfPlane, level, h, b, xi};
    p.validate();
    return p;
}

void ProjectorKernel::validate() const {
    if (!(h > 0.0)) throw ConfigError("projector kernel needs h > 0");
    if (!(b > 0.0)) throw ConfigError("projector kernel needs b > 0");
    if (level < 1) throw ConfigError("projector level must be >= 1");
    if (!std::isfinite(xi)) throw ConfigError("projector xi must be finite");
}

double ProjectorKernel::dilation() const { return std::sqrt(b / h); }

double laguerre(int n, double x) {
    if (n < 0) throw ConfigError("Laguerre degree must be non-negative");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

cdouble landau_kernel_eval(const ProjectorKernel& p, Point2 x, Point2 y) {
    p.validate();
    if (p.kind != KernelKind::Landau) throw ConfigError("landau_kernel_eval needs a Landau kernel");
    const double s = p.b / p.h;
    const Point2 d = x - y;
    const double r2 = dot(d, d);
    const double phase = 0.5 * s * (y.x1 * y.x2 - x.x1 * x.x2) + 0.5 * s * (x.x1 * y.x2 - x.x2 * y.x1);
    const double amplitude = s / kTwoPi * std::exp(-0.25 * s * r2) * laguerre(p.level - 1, 0.5 * s * r2);
    return std::polar(1.0, phase) * amplitude;
}

struct ModeInterpolant::Spline {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

ModeInterpolant::ModeInterpolant(const Mode1D& mode)
    : index_(mode.index), xi_(mode.xi), eigenvalue_(mode.eigenvalue), t_max_(mode.t_max()) {
    if (mode.samples.size() < 4) throw ConfigError("mode has too few samples to interpolate");
    spline_ = std::make_shared<const Spline>(
        Spline{boost::math::interpolators::cardinal_cubic_b_spline<double>(
            mode.samples.data(), mode.samples.size(), 0.0, mode.grid_step, 0.0)});
}

double ModeInterpolant::operator()(double t) const {
    if (t < 0.0 || t > t_max_)
        throw ExtrapolationError("t=" + std::to_string(t) + " outside the mode grid [0, " +
                                 std::to_string(t_max_) + "]");
    return spline_->spline(t);
}

double ModeInterpolant::second_derivative(double t) const {
    if (t < 0.0 || t > t_max_)
        throw ExtrapolationError("t=" + std::to_string(t) + " outside the mode grid");
    return spline_->spline.double_prime(t);
}

cdouble halfplane_kernel_eval(const ProjectorKernel& p, Point2 x, Point2 y,
                              const ModeInterpolant& mode) {
    p.validate();
    if (p.kind != KernelKind::HalfPlane)
        throw ConfigError("halfplane_kernel_eval needs a half-plane kernel");
    if (mode.index() != p.level || std::abs(mode.xi() - p.xi) > 1e-12)
        throw ConfigError("mode (j, xi) does not match the kernel parameters");
    if (x.x2 < 0.0 || y.x2 < 0.0) throw DomainError("points must lie in the closed half-plane");
    const double k = p.dilation();
    const double ux = mode(k * x.x2);
    const double uy = mode(k * y.x2);
    return std::polar(p.b / p.h * ux * uy, -k * p.xi * (x.x1 - y.x1));
}

HalfPlaneModeSource::HalfPlaneModeSource(std::size_t n_points, std::size_t modes_per_xi,
                                         double min_t_max)
    : n_points_(n_points), modes_per_xi_(modes_per_xi), min_t_max_(min_t_max) {
    if (modes_per_xi == 0) throw ConfigError("mode source needs at least one mode per xi");
}

const ModeInterpolant& HalfPlaneModeSource::mode(int j, double xi) {
    if (j < 1 || static_cast<std::size_t>(j) > modes_per_xi_)
        throw ConfigError("mode index " + std::to_string(j) + " outside 1.." +
                          std::to_string(modes_per_xi_));
    auto it = cache_.find(xi);
    if (it == cache_.end()) {
        const double t_max = std::max(min_t_max_, DeGennesConfig::default_t_max(xi));
        const auto modes = solve_de_gennes(DeGennesConfig::infinite(xi, n_points_, t_max), modes_per_xi_);
        std::vector<ModeInterpolant> interps;
        interps.reserve(modes.size());
        for (const auto& m : modes) interps.emplace_back(m);
        it = cache_.emplace(xi, std::move(interps)).first;
    }
    return it->second[static_cast<std::size_t>(j - 1)];
}

TestFunction TestFunction::gaussian(Point2 center, double sigma, double k1, double decay_radii) {
    if (!(sigma > 0.0)) throw ConfigError("Gaussian probe needs sigma > 0");
    TestFunction f;
    f.eval = [center, sigma, k1](Point2 x) {
        const Point2 d = x - center;
        return std::polar(std::exp(-dot(d, d) / (2.0 * sigma * sigma)), k1 * x.x1);
    };
    f.x1_min = center.x1 - decay_radii * sigma;
    f.x1_max = center.x1 + decay_radii * sigma;
    f.x2_max = std::max(center.x2 + decay_radii * sigma, sigma);
    return f;
}

TestFunction TestFunction::zero() {
    TestFunction f;
    f.eval = [](Point2) { return cdouble{}; };
    return f;
}

ResolutionIdentityResult verify_resolution_identity(double h, double b, const TestFunction& f,
                                                    double xi_cut, int j_max,
                                                    const ResolutionIdentityOptions& options) {
    if (!(h > 0.0) || !(b > 0.0)) throw ConfigError("resolution identity needs h, b > 0");
    if (!(xi_cut > 0.0)) throw ConfigError("xi_cut must be positive");
    if (j_max < 1) throw ConfigError("j_max must be >= 1");
    validate_test_function(f);

    const ResolutionPass base = resolution_pass(h, b, f, xi_cut, j_max, options, 1);
    ResolutionIdentityResult r;
    r.defect_norm = base.defect;
    r.f_norm = base.f_norm;
    r.residual = base.f_norm > 0.0 ? base.defect / base.f_norm : 0.0;
    if (options.check_refinement && base.f_norm > 0.0) {
        const ResolutionPass fine = resolution_pass(h, b, f, xi_cut, j_max, options, 2);
        const double fine_residual = fine.defect / fine.f_norm;
        r.refinement_change = std::abs(fine_residual - r.residual);
        if (r.refinement_change > options.refinement_tolerance)
            throw NumericalError("resolution-identity quadrature under-resolved: residual " +
                                 std::to_string(r.residual) + " vs " +
                                 std::to_string(fine_residual) + " after doubling");
        r.residual = fine_residual;
        r.defect_norm = fine.defect;
        r.f_norm = fine.f_norm;
    }
    return r;
}

IntertwiningResult verify_intertwining(const ProjectorKernel& p, const TestFunction& f,
                                       const IntertwiningOptions& options) {
    p.validate();
    if (p.kind != KernelKind::HalfPlane)
        throw ConfigError("verify_intertwining needs a half-plane kernel");
    validate_test_function(f);
    const double k = p.dilation();
    const double hb = p.h * p.b;
    const double t_max = std::max(DeGennesConfig::default_t_max(p.xi), k * f.x2_max + 1.0);
    const auto modes = solve_de_gennes(DeGennesConfig::infinite(p.xi, options.n_points, t_max),
                                       static_cast<std::size_t>(p.level));
    const ModeInterpolant u(modes.back());

    // C = <v_j, f> with v_j(y) = exp(-i k xi y1) u_j(k y2)
    const BoxQuadrature q = sample_on_box(f, 1);
    cdouble coeff{};
    for (std::size_t a = 0; a < q.x1.size(); ++a) {
        const cdouble phase = std::polar(q.x1.weights[a], k * p.xi * q.x1.nodes[a]);
        for (std::size_t c = 0; c < q.x2.size(); ++c)
            coeff += phase * q.x2.weights[c] * u(k * q.x2.nodes[c]) * q.at(a, c);
    }
    const double f_norm = box_norm(q);

    IntertwiningResult r;
    r.mu = u.eigenvalue();
    const double fiber_norm = std::sqrt((f.x1_max - f.x1_min) / k);
    r.relative_applied_norm = f_norm > 0.0 ? std::abs(coeff) / (f_norm * fiber_norm) : 0.0;

    const auto pi_f = [&](double x1, double x2) {
        return coeff * std::polar(p.b / p.h * u(k * x2), -k * p.xi * x1);
    };

    const double delta = options.fd_step / k;
    const double ell = 1.0 / k;
    const double j = static_cast<double>(p.level);
    const double t_hi =
        std::min(u.t_max() - 1.0, std::max(p.xi, 0.0) + 4.0 + 2.0 * std::sqrt(2.0 * j + 1.0));
    const double x2_lo = 2.0 * delta;
    const double x2_hi = t_hi * ell;
    const std::size_t n1 = options.eval_points1;
    const std::size_t n2 = options.eval_points2;

    double applied2 = 0.0, res2 = 0.0, target2 = 0.0, rayleigh = 0.0;
    for (std::size_t a = 0; a < n1; ++a) {
        const double x1 = -2.0 * ell + 4.0 * ell * static_cast<double>(a) / static_cast<double>(n1 - 1);
        for (std::size_t c = 0; c < n2; ++c) {
            const double x2 = x2_lo + (x2_hi - x2_lo) * static_cast<double>(c) / static_cast<double>(n2 - 1);
            const cdouble v = pi_f(x1, x2);
            const cdouble v_e = pi_f(x1 + delta, x2), v_w = pi_f(x1 - delta, x2);
            const cdouble v_n = pi_f(x1, x2 + delta), v_s = pi_f(x1, x2 - delta);
            const cdouble d11 = (v_e - 2.0 * v + v_w) / (delta * delta);
            const cdouble d22 = (v_n - 2.0 * v + v_s) / (delta * delta);
            const cdouble d1 = (v_e - v_w) / (2.0 * delta);
            const cdouble applied = -p.h * p.h * (d11 + d22) -
                                    cdouble(0.0, 2.0 * hb * x2) * d1 +
                                    p.b * p.b * x2 * x2 * v;
            const cdouble target = hb * r.mu * v;
            applied2 += std::norm(v);
            res2 += std::norm(applied - target);
            target2 += std::norm(target);
            rayleigh += std::real(std::conj(v) * applied);
        }
    }
    const double cell = (4.0 * ell / static_cast<double>(n1 - 1)) * ((x2_hi - x2_lo) / static_cast<double>(n2 - 1));
    r.applied_norm = std::sqrt(applied2 * cell);
    r.annihilated = r.relative_applied_norm < options.annihilation_tolerance;
    if (r.annihilated) {
        r.residual = std::numeric_limits<double>::quiet_NaN();
        r.eigenvalue_estimate = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.residual = std::sqrt(res2 / target2);
        r.eigenvalue_estimate = rayleigh / (hb * applied2);
    }
    return r;
}

}  // namespace magspec

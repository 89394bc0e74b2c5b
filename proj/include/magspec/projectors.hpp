#pragma once

// Integral kernels of the Landau-level projectors in the plane and of the generalized
// eigenprojectors of the Neumann magnetic Laplacian on the half-plane
// R x R_+, both for the potential A0(x) = (-x2, 0) scaled by b, plus quadrature
// checks of their operator identities.

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "magspec/degennes.hpp"
#include "magspec/point.hpp"

namespace magspec {

using cdouble = std::complex<double>;

enum class KernelKind { Landau, HalfPlane };

struct ProjectorKernel {
    KernelKind kind = KernelKind::Landau;
    int level = 1;   // j >= 1
    double h = 1.0;  // semiclassical parameter
    double b = 1.0;  // field strength
    double xi = 0.0; // fiber momentum, half-plane only

    static ProjectorKernel landau(int level, double h, double b);
    static ProjectorKernel half_plane(int level, double h, double b, double xi);

    void validate() const;
    // sqrt(b/h), the dilation factor between the (h, b) and (1, 1) problems.
    double dilation() const;
};

// Laguerre polynomial L_n, normalized so that L_n(0) = 1 (three-term recurrence).
double laguerre(int n, double x);

// Kernel of the projector onto the j-th Landau level of -(h grad - i b A0)^2 in R^2.
cdouble landau_kernel_eval(const ProjectorKernel& p, Point2 x, Point2 y);

// Cubic spline of a sampled de Gennes eigenfunction u_j(.; xi) on [0, t_max], with the
// Neumann slope u'(0) = 0 imposed. Never extrapolates.
class ModeInterpolant {
public:
    explicit ModeInterpolant(const Mode1D& mode);

    double operator()(double t) const;
    double second_derivative(double t) const;

    int index() const { return index_; }
    double xi() const { return xi_; }
    double eigenvalue() const { return eigenvalue_; }
    double t_max() const { return t_max_; }

private:
    struct Spline;
    std::shared_ptr<const Spline> spline_;
    int index_ = 1;
    double xi_ = 0.0;
    double eigenvalue_ = 0.0;
    double t_max_ = 0.0;
};

// Kernel of Pi_j(h, b; xi):
//   (b/h) exp(-i k xi (x1 - y1)) u_j(k x2; xi) u_j(k y2; xi),  k = sqrt(b/h).
// Throws ExtrapolationError when k x2 or k y2 exceeds the grid of `mode`.
cdouble halfplane_kernel_eval(const ProjectorKernel& p, Point2 x, Point2 y,
                              const ModeInterpolant& mode);

// Half-plane eigenfunctions for several xi, computed on demand and cached.
class HalfPlaneModeSource {
public:
    // t_max of each 1D solve is at least `min_t_max` (and at least xi + 8).
    HalfPlaneModeSource(std::size_t n_points, std::size_t modes_per_xi, double min_t_max = 12.0);

    // Interpolant of u_j(.; xi), 1 <= j <= modes_per_xi.
    const ModeInterpolant& mode(int j, double xi);
    std::size_t modes_per_xi() const { return modes_per_xi_; }

private:
    std::size_t n_points_;
    std::size_t modes_per_xi_;
    double min_t_max_;
    std::map<double, std::vector<ModeInterpolant>> cache_;
};

// Smooth, rapidly decaying probe function on the half-plane with the quadrature box
// that covers its effective support.
struct TestFunction {
    std::function<cdouble(Point2)> eval;
    double x1_min = -4.0;
    double x1_max = 4.0;
    double x2_max = 6.0;  // box is [x1_min, x1_max] x [0, x2_max]
    std::size_t panels1 = 16;
    std::size_t panels2 = 16;
    std::size_t order = 8;

    // exp(-|x - center|^2 / (2 sigma^2)) * exp(i k1 x1); box = center +- decay_radii * sigma,
    // clipped to x2 >= 0.
    static TestFunction gaussian(Point2 center, double sigma, double k1 = 0.0,
                                 double decay_radii = 8.0);
    static TestFunction zero();
};

struct ResolutionIdentityOptions {
    std::size_t xi_panels = 32;
    std::size_t xi_order = 8;
    std::size_t n_points = 4000;
    // Disagreement allowed between the base and doubled quadrature (absolute, on the
    // relative residual) before the result is declared under-resolved.
    double refinement_tolerance = 1e-5;
    bool check_refinement = true;
};

struct ResolutionIdentityResult {
    double residual = 0.0;         // ||(1/2pi) sum_j int Pi_j f - f|| / ||f||  (0 when f = 0)
    double defect_norm = 0.0;      // numerator
    double f_norm = 0.0;
    double refinement_change = 0.0;  // |residual(base) - residual(doubled)|
};

// Truncated resolution of the identity:
//   (1/2pi) sum_{j <= j_max} int_{|xi| <= xi_cut} Pi_j(h, b; xi) f dxi  versus f,
// by nested Gauss-Legendre quadrature.
ResolutionIdentityResult verify_resolution_identity(double h, double b, const TestFunction& f,
                                                    double xi_cut, int j_max,
                                                    const ResolutionIdentityOptions& options = {});

struct IntertwiningOptions {
    std::size_t n_points = 8000;
    double fd_step = 1e-3;          // finite-difference step, units of the magnetic length
    std::size_t eval_points1 = 24;  // evaluation grid for the residual
    std::size_t eval_points2 = 96;
    // ||Pi f|| / ||f|| below this counts as annihilation (orthogonal probe).
    double annihilation_tolerance = 1e-10;
};

struct IntertwiningResult {
    double residual = 0.0;             // ||P Pi f - hb mu_j Pi f|| / ||hb mu_j Pi f||
    double applied_norm = 0.0;         // ||Pi f|| on the evaluation grid
    double relative_applied_norm = 0.0;  // ||Pi f|| / ||f|| (quadrature box norms)
    double eigenvalue_estimate = 0.0;  // <Pi f, P Pi f> / (hb <Pi f, Pi f>)
    double mu = 0.0;                   // mu_j(xi) from the 1D solve
    bool annihilated = false;          // Pi f ~ 0: residual is not meaningful
};

// Applies -(h grad - i b A0)^2 by central differences to Pi_j(h, b; xi) f and compares
// with hb mu_j(xi) Pi_j(h, b; xi) f.
IntertwiningResult verify_intertwining(const ProjectorKernel& p, const TestFunction& f,
                                       const IntertwiningOptions& options = {});

}  // namespace magspec

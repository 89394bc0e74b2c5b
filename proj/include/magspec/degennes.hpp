#pragma once

// Half-line harmonic oscillator family  -d^2/dt^2 + (t - xi)^2  on t > 0 with u'(0) = 0.
//
// The operator is discretized on a uniform vertex grid t_i = i * step, i = 0..n-1, with a
// mirror ghost node enforcing the Neumann condition at t = 0 and a Dirichlet node at the
// right end. After the diagonal similarity diag(1/sqrt(2), 1, ..., 1) the matrix is
// symmetric tridiagonal, so the spectrum is computed with Sturm bisection and inverse
// iteration. Eigenvalues converge at second order in the step.

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace magspec {

// Right end used as a numerical stand-in for +infinity.
struct InfiniteEnd {
    double t_max = 12.0;
};

// Genuine model truncation: Dirichlet condition at t = T.
struct DirichletEnd {
    double T = 1.0;
};

struct DeGennesConfig {
    static constexpr std::size_t kMinPoints = 16;
    static constexpr double kLocalizationMargin = 8.0;

    double xi = 0.0;
    std::variant<InfiniteEnd, DirichletEnd> right_end = InfiniteEnd{};
    std::size_t n_points = 4000;

    // t_max = max(12, xi + 8) unless given explicitly.
    static DeGennesConfig infinite(double xi, std::size_t n_points,
                                   std::optional<double> t_max = std::nullopt);
    static DeGennesConfig dirichlet(double xi, double T, std::size_t n_points);

    static double default_t_max(double xi);

    double length() const;
    bool is_dirichlet() const { return std::holds_alternative<DirichletEnd>(right_end); }
    double step() const { return length() / static_cast<double>(n_points); }

    // Throws ConfigError when n_points < 16, the length is not positive, or an
    // InfiniteEnd violates t_max >= xi + 8.
    void validate() const;
};

// One eigenpair (mu_j(xi), u_j(.; xi)). samples[i] = u_j(i * grid_step) for
// i = 0..n_points, the last sample being the Dirichlet zero at the right end.
struct Mode1D {
    int index = 1;
    double eigenvalue = 0.0;
    double xi = 0.0;
    std::vector<double> samples;
    double grid_step = 0.0;

    double t_max() const { return grid_step * static_cast<double>(samples.size() - 1); }
    // Trapezoid-rule inner products on the grid (the quadrature the discretization is
    // symmetric in).
    double dot(const Mode1D& other) const;
    double norm() const;
};

// The `num_modes` lowest eigenpairs, ordered by index. Eigenfunctions are normalized
// in the trapezoid L2 norm and signed so that u_j(0) > 0.
std::vector<Mode1D> solve_de_gennes(const DeGennesConfig& config, std::size_t num_modes);

// The `count` lowest eigenvalues only (no eigenvectors).
std::vector<double> de_gennes_eigenvalues(const DeGennesConfig& config, std::size_t count);

// All eigenvalues strictly below `threshold` (Sturm count, so none is missed).
std::vector<double> de_gennes_eigenvalues_below(const DeGennesConfig& config, double threshold);

// mu_1(xi) on the half-line, with t_max = max(12, xi + 8).
double mu1(double xi, std::size_t n_points = 4000);
double mu2(double xi, std::size_t n_points = 4000);

// Richardson combination (4 mu_1(2n) - mu_1(n)) / 3 of the step-h and step-h/2 grids;
// cancels the leading O(step^2) error.
double mu1_richardson(double xi, std::size_t n_points = 4000);

// mu_1(xi; T): Neumann at 0, Dirichlet at t = T.
double mu1_truncated(double xi, double T, std::size_t n_points = 4000);

struct Theta0Result {
    double theta0 = 0.0;
    double xi_star = 0.0;
    std::size_t n_points = 0;       // finest resolution used
    double refinement_change = 0.0;  // |theta0(n) - theta0(n/2)| at the accepted level
    std::vector<double> scan_xi;
    std::vector<double> scan_mu1;
};

struct Theta0Options {
    std::size_t n_points = 2000;  // starting resolution
    std::size_t max_points = 64000;
    double scan_lo = 0.0;
    double scan_hi = 3.0;
    double scan_step = 0.05;
    double xi_tolerance = 1e-8;
    bool richardson = true;
};

// Minimum of mu_1 at a fixed resolution: coarse scan (validated unimodal) followed by
// golden-section search on the bracketing interval.
Theta0Result theta0_at_resolution(const Theta0Options& options);

// Theta0 refined by doubling the grid until two consecutive levels agree to `tolerance`.
Theta0Result theta0(double tolerance, Theta0Options options = {});

struct Mu2GapResult {
    double min_mu2 = 0.0;
    double argmin = 0.0;
};

Mu2GapResult mu2_gap(const std::vector<double>& xi_grid, std::size_t n_points = 4000,
                     unsigned threads = 1);

// Tabulated mu_1 on a uniform xi grid with cubic B-spline interpolation.
class Mu1Table {
public:
    static Mu1Table build(double xi_min = -6.0, double xi_max = 6.0, double step = 0.01,
                          std::size_t n_points = 4000, unsigned threads = 1,
                          bool richardson = true);

    // Throws ExtrapolationError outside [xi_min, xi_max].
    double operator()(double xi) const;
    double derivative(double xi) const;

    double xi_min() const { return xi_min_; }
    double xi_max() const { return xi_max_; }
    double step() const { return step_; }
    std::size_t n_points() const { return n_points_; }
    const std::vector<double>& values() const { return values_; }
    double xi_at(std::size_t i) const { return xi_min_ + step_ * static_cast<double>(i); }

    // Smallest tabulated value and its grid index.
    std::size_t argmin_index() const;
    // Minimum of the interpolant (golden section around the tabulated argmin):
    // (xi_star, Theta0).
    std::pair<double, double> minimum() const;

private:
    struct Spline;
    double xi_min_ = 0.0;
    double xi_max_ = 0.0;
    double step_ = 0.0;
    std::size_t n_points_ = 0;
    std::vector<double> values_;
    std::shared_ptr<const Spline> spline_;
};

}  // namespace magspec

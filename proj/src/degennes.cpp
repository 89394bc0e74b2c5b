#include "magspec/degennes.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "magspec/errors.hpp"
#include "magspec/parallel.hpp"
#include "magspec/tridiagonal.hpp"

namespace magspec {

namespace {

SymTridiagonal assemble(const DeGennesConfig& config) {
    const std::size_t n = config.n_points;
    const double d = config.step();
    const double inv_d2 = 1.0 / (d * d);
    SymTridiagonal t;
    t.diag.resize(n);
    t.off.assign(n - 1, -inv_d2);
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = d * static_cast<double>(i);
        t.diag[i] = 2.0 * inv_d2 + (ti - config.xi) * (ti - config.xi);
    }
    // ghost node u_{-1} = u_1 gives row 0: (2u_0 - 2u_1)/d^2; symmetrized with weight 1/2
    t.off[0] = -std::sqrt(2.0) * inv_d2;
    return t;
}

std::string describe(const DeGennesConfig& c) {
    std::ostringstream os;
    os << "xi=" << c.xi << " n_points=" << c.n_points << " length=" << c.length()
       << (c.is_dirichlet() ? " (dirichlet)" : " (infinite)");
    return os.str();
}

}  // namespace

double DeGennesConfig::default_t_max(double xi) {
    return std::max(12.0, xi + kLocalizationMargin);
}

DeGennesConfig DeGennesConfig::infinite(double xi, std::size_t n_points,
                                        std::optional<double> t_max) {
    DeGennesConfig c;
    c.xi = xi;
    c.right_end = InfiniteEnd{t_max.value_or(default_t_max(xi))};
    c.n_points = n_points;
    return c;
}

DeGennesConfig DeGennesConfig::dirichlet(double xi, double T, std::size_t n_points) {
    DeGennesConfig c;
    c.xi = xi;
    c.right_end = DirichletEnd{T};
    c.n_points = n_points;
    return c;
}

double DeGennesConfig::length() const {
    return std::visit(
        [](const auto& end) {
            if constexpr (std::is_same_v<std::decay_t<decltype(end)>, InfiniteEnd>)
                return end.t_max;
            else
                return end.T;
        },
        right_end);
}

void DeGennesConfig::validate() const {
    if (!std::isfinite(xi)) throw ConfigError("xi must be finite");
    if (n_points < kMinPoints)
        throw ConfigError("grid too coarse: n_points=" + std::to_string(n_points) +
                          " (minimum " + std::to_string(kMinPoints) + ")");
    const double len = length();
    if (!(len > 0.0) || !std::isfinite(len))
        throw ConfigError("right end of the half-line grid must be positive and finite");
    if (!is_dirichlet() && len < xi + kLocalizationMargin)
        throw ConfigError("t_max=" + std::to_string(len) + " is below xi + 8 = " +
                          std::to_string(xi + kLocalizationMargin));
}

double Mode1D::dot(const Mode1D& other) const {
    if (other.samples.size() != samples.size() || other.grid_step != grid_step)
        throw ConfigError("modes live on different grids");
    const std::size_t n = samples.size();
    double s = 0.5 * (samples[0] * other.samples[0] + samples[n - 1] * other.samples[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += samples[i] * other.samples[i];
    return s * grid_step;
}

double Mode1D::norm() const { return std::sqrt(dot(*this)); }

std::vector<double> de_gennes_eigenvalues(const DeGennesConfig& config, std::size_t count) {
    config.validate();
    if (count == 0 || count > config.n_points / 4)
        throw ConfigError("requested " + std::to_string(count) +
                          " modes; at most n_points/4 are resolved");
    return tridiagonal_lowest(assemble(config), count);
}

std::vector<double> de_gennes_eigenvalues_below(const DeGennesConfig& config, double threshold) {
    config.validate();
    return tridiagonal_below(assemble(config), threshold);
}

std::vector<Mode1D> solve_de_gennes(const DeGennesConfig& config, std::size_t num_modes) {
    config.validate();
    if (num_modes == 0 || num_modes > config.n_points / 4)
        throw ConfigError("requested " + std::to_string(num_modes) +
                          " modes; at most n_points/4 are resolved");
    const SymTridiagonal t = assemble(config);
    std::vector<TridiagonalEigenpair> pairs;
    try {
        pairs = tridiagonal_lowest_pairs(t, num_modes);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " [" + describe(config) + "]");
    }

    const std::size_t n = config.n_points;
    const double d = config.step();
    std::vector<Mode1D> modes;
    modes.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (k > 0 && !(pairs[k].value > pairs[k - 1].value))
            throw NumericalError("eigenvalues not strictly increasing [" + describe(config) + "]");
        Mode1D m;
        m.index = static_cast<int>(k + 1);
        m.eigenvalue = pairs[k].value;
        m.xi = config.xi;
        m.grid_step = d;
        m.samples.resize(n + 1, 0.0);
        const double sign = pairs[k].vector[0] >= 0.0 ? 1.0 : -1.0;
        const double inv_sqrt_d = 1.0 / std::sqrt(d);
        m.samples[0] = sign * pairs[k].vector[0] * std::sqrt(2.0) * inv_sqrt_d;
        for (std::size_t i = 1; i < n; ++i) m.samples[i] = sign * pairs[k].vector[i] * inv_sqrt_d;
        m.samples[n] = 0.0;
        modes.push_back(std::move(m));
    }
    return modes;
}

double mu1(double xi, std::size_t n_points) {
    return de_gennes_eigenvalues(DeGennesConfig::infinite(xi, n_points), 1)[0];
}

double mu2(double xi, std::size_t n_points) {
    return de_gennes_eigenvalues(DeGennesConfig::infinite(xi, n_points), 2)[1];
}

double mu1_richardson(double xi, std::size_t n_points) {
    return (4.0 * mu1(xi, 2 * n_points) - mu1(xi, n_points)) / 3.0;
}

double mu1_truncated(double xi, double T, std::size_t n_points) {
    if (!(T > 0.0)) throw ConfigError("truncation length T must be positive");
    return de_gennes_eigenvalues(DeGennesConfig::dirichlet(xi, T, n_points), 1)[0];
}

Theta0Result theta0_at_resolution(const Theta0Options& options) {
    if (!(options.scan_step > 0.0) || !(options.scan_hi > options.scan_lo))
        throw ConfigError("invalid scan interval for the Theta0 search");
    const auto count = static_cast<std::size_t>(
        std::llround((options.scan_hi - options.scan_lo) / options.scan_step));
    const auto eval = [&](double xi) {
        return options.richardson ? mu1_richardson(xi, options.n_points) : mu1(xi, options.n_points);
    };
    Theta0Result r;
    r.n_points = options.n_points;
    for (std::size_t i = 0; i <= count; ++i) {
        const double xi = options.scan_lo + options.scan_step * static_cast<double>(i);
        r.scan_xi.push_back(xi);
        r.scan_mu1.push_back(eval(xi));
    }
    const auto it = std::min_element(r.scan_mu1.begin(), r.scan_mu1.end());
    const std::size_t k = static_cast<std::size_t>(it - r.scan_mu1.begin());
    if (k == 0 || k + 1 == r.scan_mu1.size())
        throw NumericalError("could not bracket the minimum of mu_1 on [" +
                             std::to_string(options.scan_lo) + ", " +
                             std::to_string(options.scan_hi) + "]");
    for (std::size_t i = 1; i <= k; ++i)
        if (!(r.scan_mu1[i] < r.scan_mu1[i - 1]))
            throw NumericalError("mu_1 is not unimodal on the scan (rises at xi=" +
                                 std::to_string(r.scan_xi[i]) + ")");
    for (std::size_t i = k + 1; i < r.scan_mu1.size(); ++i)
        if (!(r.scan_mu1[i] > r.scan_mu1[i - 1]))
            throw NumericalError("mu_1 is not unimodal on the scan (falls at xi=" +
                                 std::to_string(r.scan_xi[i]) + ")");

    // golden section on [xi_{k-1}, xi_{k+1}]
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = r.scan_xi[k - 1];
    double b = r.scan_xi[k + 1];
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > options.xi_tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = eval(d);
        }
    }
    r.xi_star = 0.5 * (a + b);
    r.theta0 = std::min({fc, fd, eval(r.xi_star)});
    return r;
}

Theta0Result theta0(double tolerance, Theta0Options options) {
    if (!(tolerance > 0.0)) throw ConfigError("Theta0 tolerance must be positive");
    Theta0Result coarse = theta0_at_resolution(options);
    while (true) {
        if (options.n_points * 2 > options.max_points)
            throw NumericalError("Theta0 not stable to " + std::to_string(tolerance) +
                                 " below n_points=" + std::to_string(options.max_points));
        options.n_points *= 2;
        Theta0Result fine = theta0_at_resolution(options);
        fine.refinement_change = std::abs(fine.theta0 - coarse.theta0);
        if (fine.refinement_change <= tolerance) return fine;
        coarse = std::move(fine);
    }
}

Mu2GapResult mu2_gap(const std::vector<double>& xi_grid, std::size_t n_points, unsigned threads) {
    if (xi_grid.empty()) throw ConfigError("mu2_gap needs a non-empty xi grid");
    const auto values =
        parallel_map(xi_grid.size(), threads, [&](std::size_t i) { return mu2(xi_grid[i], n_points); });
    const auto it = std::min_element(values.begin(), values.end());
    return {*it, xi_grid[static_cast<std::size_t>(it - values.begin())]};
}

struct Mu1Table::Spline {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

Mu1Table Mu1Table::build(double xi_min, double xi_max, double step, std::size_t n_points,
                         unsigned threads, bool richardson) {
    if (!(step > 0.0) || !(xi_max > xi_min)) throw ConfigError("invalid mu_1 table range");
    const auto intervals = static_cast<std::size_t>(std::llround((xi_max - xi_min) / step));
    if (intervals < 4) throw ConfigError("mu_1 table needs at least 5 samples");
    Mu1Table t;
    t.xi_min_ = xi_min;
    t.step_ = (xi_max - xi_min) / static_cast<double>(intervals);
    t.xi_max_ = xi_max;
    t.n_points_ = n_points;
    t.values_ = parallel_map(intervals + 1, threads,
                             [&](std::size_t i) {
                                 return richardson ? mu1_richardson(t.xi_at(i), n_points)
                                                   : mu1(t.xi_at(i), n_points);
                             });
    t.spline_ = std::make_shared<const Spline>(
        Spline{boost::math::interpolators::cardinal_cubic_b_spline<double>(t.values_.data(), t.values_.size(), xi_min,
                                                   t.step_)});
    return t;
}

double Mu1Table::operator()(double xi) const {
    if (xi < xi_min_ - 1e-12 || xi > xi_max_ + 1e-12)
        throw ExtrapolationError("xi=" + std::to_string(xi) + " outside the mu_1 table [" +
                                 std::to_string(xi_min_) + ", " + std::to_string(xi_max_) + "]");
    return spline_->spline(std::clamp(xi, xi_min_, xi_max_));
}

double Mu1Table::derivative(double xi) const {
    if (xi < xi_min_ - 1e-12 || xi > xi_max_ + 1e-12)
        throw ExtrapolationError("xi=" + std::to_string(xi) + " outside the mu_1 table");
    return spline_->spline.prime(std::clamp(xi, xi_min_, xi_max_));
}

std::size_t Mu1Table::argmin_index() const {
    return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) -
                                    values_.begin());
}

std::pair<double, double> Mu1Table::minimum() const {
    const std::size_t k = argmin_index();
    double a = xi_at(k == 0 ? 0 : k - 1);
    double b = xi_at(std::min(k + 1, values_.size() - 1));
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = (*this)(c);
    double fd = (*this)(d);
    while (b - a > 1e-10) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = (*this)(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = (*this)(d);
        }
    }
    const double xi = 0.5 * (a + b);
    return {xi, std::min(values_[k], (*this)(xi))};
}

}  // namespace magspec

#include "magspec/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "magspec/errors.hpp"

namespace magspec {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw ConfigError("Gauss-Legendre rule needs at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (b + a);
    const double half = 0.5 * (b - a);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double jj = static_cast<double>(j);
                p1 = ((2.0 * jj - 1.0) * z * p2 - (jj - 1.0) * p3) / jj;
            }
            dp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order) {
    if (panels == 0) throw ConfigError("composite rule needs at least one panel");
    std::vector<double> breaks(panels + 1);
    for (std::size_t p = 0; p <= panels; ++p)
        breaks[p] = a + (b - a) * static_cast<double>(p) / static_cast<double>(panels);
    return composite_gauss_legendre(breaks, order);
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& breakpoints, std::size_t order) {
    if (breakpoints.size() < 2) throw ConfigError("composite rule needs at least two breakpoints");
    const QuadratureRule ref = gauss_legendre(order);
    QuadratureRule rule;
    rule.nodes.reserve((breakpoints.size() - 1) * order);
    rule.weights.reserve((breakpoints.size() - 1) * order);
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        const double lo = breakpoints[p];
        const double hi = breakpoints[p + 1];
        if (!(hi >= lo)) throw ConfigError("composite rule breakpoints must be ascending");
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < order; ++i) {
            rule.nodes.push_back(mid + half * ref.nodes[i]);
            rule.weights.push_back(half * ref.weights[i]);
        }
    }
    return rule;
}

}  // namespace magspec

#pragma once

#include <cstddef>
#include <vector>

namespace magspec {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// n-point Gauss-Legendre rule on [a, b] (Newton iteration on the Legendre recurrence).
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

// Composite rule: `panels` equal sub-intervals of [a, b], `order` Gauss points each.
QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order);

// Composite rule on the sub-intervals delimited by `breakpoints` (ascending).
QuadratureRule composite_gauss_legendre(const std::vector<double>& breakpoints, std::size_t order);

}  // namespace magspec

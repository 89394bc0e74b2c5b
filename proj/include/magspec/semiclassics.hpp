#pragma once

// Semiclassical boundary coefficients built from the tabulated ground-state band mu_1:
// the edge moment m(c) = int [c - mu_1(xi)]_+ dxi, the sublevel-set measure
// |{xi : mu_1(xi) < c}|, and their integrals along a boundary curve.

#include <functional>
#include <utility>

#include "magspec/degennes.hpp"
#include "magspec/geometry.hpp"

namespace magspec {

struct FieldProfile {
    std::function<double(Point2)> B;
    double b = 1.0;        // inf of B over the closed domain (supplied by the caller)
    double b_prime = 1.0;  // inf of B over the boundary (sampled)
    bool hyp_ok = false;   // b > theta0 * b_prime > 0

    // Constant field B = b.
    static FieldProfile constant(double b, double theta0);
    // b_prime is the minimum of B over the curve samples and boundary quadrature nodes;
    // `b` must not exceed it. Throws ConfigError when B is not positive on the boundary.
    static FieldProfile from_function(const BoundaryCurve& curve, std::function<double(Point2)> B,
                                      double b, double theta0);

    std::vector<double> boundary_values(const BoundaryCurve& curve) const;
};

struct LevelSet {
    double xi_minus = 0.0;
    double xi_plus = 0.0;
    double measure = 0.0;  // 0 for an empty set
    bool unimodal = true;  // false: measured by fine-grid counting
};

struct MomentResult {
    double value = 0.0;
    double tail_bound = 0.0;  // bound on the part of the integral beyond the table
    double xi_minus = 0.0;
    double xi_plus = 0.0;     // upper integration limit actually used
    bool unimodal = true;
};

// Fine-grid step of the counting fallback used when mu_1 is not unimodal on the table.
inline constexpr double kFallbackStep = 1e-3;

// True when the table decreases up to its argmin and increases afterwards, ignoring
// wiggles below `noise`.
bool table_is_unimodal(const Mu1Table& table, double noise = 1e-9);

// {xi : mu_1(xi) < c} for c < 1. Throws DomainError for c >= 1 (the set is unbounded)
// and NumericalError if the set reaches the end of the table.
LevelSet level_set_below(double c, const Mu1Table& table);

// m(c) for 0 < c <= 1. Throws DomainError for c > 1 or c <= 0.
MomentResult edge_moment_detailed(double c, const Mu1Table& table);
double edge_moment(double c, const Mu1Table& table);

// (1/2pi) int_boundary B^{3/2} m(b/B) ds. Throws PreconditionError unless field.hyp_ok.
double boundary_energy_coefficient(const BoundaryCurve& curve, const FieldProfile& field,
                                   const Mu1Table& table, unsigned threads = 1);

// (1/2pi) int_boundary B^{1/2} |{mu_1 < lambda/B}| ds for 0 < lambda < b.
double counting_coefficient(const BoundaryCurve& curve, const FieldProfile& field, double lambda,
                            const Mu1Table& table, unsigned threads = 1);

struct BulkBoundarySplit {
    double boundary_term = 0.0;  // |boundary| b^{3/2} m(1) / 2pi
    double bulk_term = 0.0;      // |domain| b [a]_+ / 2pi
};

// Constant field b on the interior of a closed curve.
BulkBoundarySplit bulk_boundary_split(const BoundaryCurve& curve, double b, double a,
                                      const Mu1Table& table);

struct AsymptoticCoefficients {
    double boundary_energy = 0.0;
    double counting = 0.0;
    double bulk = 0.0;  // coefficient of [a]_+, |domain| b / 2pi
};

AsymptoticCoefficients asymptotic_coefficients(const BoundaryCurve& curve,
                                               const FieldProfile& field, double lambda,
                                               const Mu1Table& table, unsigned threads = 1);

}  // namespace magspec

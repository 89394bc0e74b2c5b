#include "doctest.h"

#include <cmath>
#include <numbers>

#include "magspec/errors.hpp"
#include "magspec/quadrature.hpp"
#include "magspec/semiclassics.hpp"
#include "oracles.hpp"
#include "shared_table.hpp"

using namespace magspec;

namespace {
constexpr double kPi = std::numbers::pi;

const BoundaryCurve& unit_circle() {
    static const BoundaryCurve c = curve_from_parametrization(circle_points(1.0, 256));
    return c;
}
}  // namespace

TEST_CASE("band table is unimodal") {
    CHECK(table_is_unimodal(shared_table()));
}

TEST_CASE("edge moment at full filling") {
    const auto& table = shared_table();
    const auto r = edge_moment_detailed(1.0, table);
    CHECK(r.value == doctest::Approx(oracle::kEdgeMomentOne).epsilon(1e-8));
    CHECK(r.tail_bound < 1e-6);
    // a coarser band table changes the value by less than 1e-6
    const auto coarse = Mu1Table::build(-6.0, 6.0, 0.02, 1000, 1, true);
    CHECK(std::abs(edge_moment(1.0, coarse) - r.value) < 1e-6);
}

TEST_CASE("edge moment vanishes at the band minimum") {
    const auto& table = shared_table();
    const double th = table.minimum().second;
    CHECK(edge_moment(th, table) == 0.0);
    CHECK(edge_moment(0.3, table) == 0.0);
    CHECK(edge_moment(th + 1e-4, table) < 1e-5);
}

TEST_CASE("level set below 0.8") {
    const auto ls = level_set_below(0.8, shared_table());
    CHECK(ls.unimodal);
    CHECK(ls.xi_minus == doctest::Approx(oracle::kLevel08Minus).epsilon(1e-7));
    CHECK(ls.xi_plus == doctest::Approx(oracle::kLevel08Plus).epsilon(1e-7));
    CHECK(ls.measure == doctest::Approx(oracle::kLevel08Plus - oracle::kLevel08Minus).epsilon(1e-7));
    CHECK(level_set_below(0.5, shared_table()).measure == 0.0);
    CHECK_THROWS_AS(level_set_below(1.0, shared_table()), DomainError);
}

TEST_CASE("edge moment is non-decreasing and convex") {
    const auto& table = shared_table();
    const double th = table.minimum().second;
    std::vector<double> m;
    const int n = 40;
    const double step = (1.0 - th) / n;
    for (int i = 1; i <= n; ++i) m.push_back(edge_moment(th + i * step, table));
    for (std::size_t i = 1; i < m.size(); ++i) CHECK(m[i] >= m[i - 1] - 1e-8);
    for (std::size_t i = 1; i + 1 < m.size(); ++i) CHECK(m[i + 1] - 2.0 * m[i] + m[i - 1] >= -1e-8);
}

TEST_CASE("derivative of the edge moment is the level-set measure") {
    const auto& table = shared_table();
    for (double c : {0.65, 0.75, 0.85, 0.95}) {
        CAPTURE(c);
        const double d = 1e-4;
        const double fd = (edge_moment(c + d, table) - edge_moment(c - d, table)) / (2.0 * d);
        CHECK(std::abs(fd - level_set_below(c, table).measure) < 1e-4);
    }
}

TEST_CASE("constant-field circle coefficients") {
    const auto& table = shared_table();
    const double th = table.minimum().second;
    for (double R : {0.5, 2.0}) {
        const auto c = curve_from_parametrization(circle_points(R, 256));
        for (double b : {1.0, 2.5}) {
            const auto field = FieldProfile::constant(b, th);
            CHECK(boundary_energy_coefficient(c, field, table) ==
                  doctest::Approx(R * std::pow(b, 1.5) * oracle::kEdgeMomentOne).epsilon(1e-7));
            CHECK(counting_coefficient(c, field, 0.8 * b, table) ==
                  doctest::Approx(R * std::sqrt(b) * (oracle::kLevel08Plus - oracle::kLevel08Minus)).epsilon(1e-7));
            CHECK(counting_coefficient(c, field, 0.5 * b, table) == 0.0);
            CHECK_THROWS_AS(counting_coefficient(c, field, b, table), DomainError);
        }
    }
}

TEST_CASE("boundary coefficient with a variable field") {
    const auto& table = shared_table();
    const double th = table.minimum().second;
    const auto B = [](Point2 x) { return 1.0 + 0.1 * x.x1 * x.x1; };
    const auto coarse = curve_from_parametrization(ellipse_points(2.0, 1.0, 256));
    const auto fine = curve_from_parametrization(ellipse_points(2.0, 1.0, 512));
    const double a = boundary_energy_coefficient(coarse, FieldProfile::from_function(coarse, B, 1.0, th), table);
    const double b = boundary_energy_coefficient(fine, FieldProfile::from_function(fine, B, 1.0, th), table);
    CHECK(std::abs(a - b) < 1e-6);
    // independent check: Gauss-Legendre in the ellipse angle
    const auto rule = composite_gauss_legendre(0.0, 2.0 * kPi, 64, 8);
    double ref = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const Point2 x{2.0 * std::cos(t), std::sin(t)};
        const double speed = std::hypot(2.0 * std::sin(t), std::cos(t));
        const double Bx = B(x);
        ref += rule.weights[i] * speed * std::pow(Bx, 1.5) * edge_moment(1.0 / Bx, table);
    }
    CHECK(std::abs(a - ref / (2.0 * kPi)) < 1e-6);
}

TEST_CASE("boundary coefficient vanishes as the field ratio approaches the band minimum") {
    const auto& table = shared_table();
    const double th = table.minimum().second;
    const auto& c = unit_circle();
    double prev = 1.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto field = FieldProfile::from_function(c, [](Point2) { return 1.0; }, th * (1.0 + eps), th);
        const double v = boundary_energy_coefficient(c, field, table);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("field hypothesis") {
    const auto& table = shared_table();
    const double th = table.minimum().second;
    const auto& c = unit_circle();
    const auto weak = FieldProfile::from_function(c, [](Point2) { return 2.0; }, 0.5 * 2.0 * th, th);
    CHECK_FALSE(weak.hyp_ok);
    CHECK_THROWS_AS(boundary_energy_coefficient(c, weak, table), PreconditionError);
    CHECK_THROWS_AS(FieldProfile::from_function(c, [](Point2) { return 1.0; }, 1.5, th), ConfigError);
    CHECK_THROWS_AS(FieldProfile::from_function(c, [](Point2 x) { return x.x1; }, 0.1, th), ConfigError);
    CHECK_THROWS_AS(edge_moment(1.2, table), DomainError);
    CHECK_THROWS_AS(edge_moment(0.0, table), DomainError);
}

TEST_CASE("bulk and boundary split on the unit disk") {
    const auto& table = shared_table();
    const auto& c = unit_circle();
    const auto plus = bulk_boundary_split(c, 1.0, 1.0, table);
    CHECK(plus.bulk_term == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(plus.boundary_term == doctest::Approx(oracle::kEdgeMomentOne).epsilon(1e-7));
    const auto minus = bulk_boundary_split(c, 1.0, -1.0, table);
    CHECK(minus.bulk_term == 0.0);
    CHECK(minus.boundary_term == plus.boundary_term);
    const auto all = asymptotic_coefficients(c, FieldProfile::constant(1.0, table.minimum().second), 0.8, table);
    CHECK(all.boundary_energy == doctest::Approx(plus.boundary_term).epsilon(1e-12));
    CHECK(all.bulk == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(all.counting > 0.0);
}

TEST_CASE("coefficients are independent of the thread count") {
    const auto& table = shared_table();
    const auto& c = unit_circle();
    const auto field = FieldProfile::from_function(c, [](Point2 x) { return 1.0 + 0.2 * x.x2 * x.x2; }, 1.0,
                                                   table.minimum().second);
    CHECK(boundary_energy_coefficient(c, field, table, 1) == boundary_energy_coefficient(c, field, table, 3));
    CHECK(counting_coefficient(c, field, 0.7, table, 1) == counting_coefficient(c, field, 0.7, table, 3));
}

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "magspec/errors.hpp"
#include "magspec/geometry.hpp"
#include "magspec/quadrature.hpp"
#include "oracles.hpp"

using namespace magspec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("circle") {
    for (double R : {0.5, 1.0, 3.0}) {
        CAPTURE(R);
        const auto c = curve_from_parametrization(circle_points(R, 256, {0.3, -1.0}));
        CHECK(std::abs(c.length() - 2.0 * kPi * R) < 1e-6);
        CHECK(std::abs(c.enclosed_area() - kPi * R * R) < 1e-6);
        for (const auto& s : c.samples()) CHECK(std::abs(s.curvature - 1.0 / R) < 1e-4);
        for (double s = 0.0; s < c.length(); s += 0.173) CHECK(std::abs(c.curvature(s) - 1.0 / R) < 1e-4);
        CHECK(std::abs(c.total_curvature() - 2.0 * kPi) < 1e-6);
        CHECK_FALSE(c.reversed());
    }
}

TEST_CASE("ellipse") {
    const auto e = curve_from_parametrization(ellipse_points(2.0, 1.0, 256));
    CHECK(std::abs(e.curvature(0.0) - 2.0) < 1e-3);
    CHECK(std::abs(e.length() - oracle::kEllipseLength) < 1e-6);
    CHECK(std::abs(e.enclosed_area() - 2.0 * kPi) < 1e-6);
    CHECK(std::abs(e.total_curvature() - 2.0 * kPi) < 1e-6);
    // the curvature at the co-vertex is b / a^2
    CHECK(std::abs(e.curvature(e.length() / 4.0) - 0.25) < 1e-3);
}

TEST_CASE("arclength is increasing and wraps") {
    const auto e = curve_from_parametrization(ellipse_points(2.0, 1.0, 128));
    for (std::size_t i = 1; i < e.samples().size(); ++i) CHECK(e.samples()[i].s > e.samples()[i - 1].s);
    const Point2 a = e.position(0.4), b = e.position(0.4 + e.length());
    CHECK(norm(a - b) < 1e-12);
    const Point2 t = e.unit_tangent(1.1), n = e.inward_normal(1.1);
    CHECK(std::abs(norm(t) - 1.0) < 1e-12);
    CHECK(std::abs(dot(t, n)) < 1e-12);
    CHECK(cross(t, n) > 0.0);
}

TEST_CASE("point-density doubling leaves length, area, and integrals unchanged") {
    const auto coarse = curve_from_parametrization(ellipse_points(2.0, 1.0, 256));
    const auto fine = curve_from_parametrization(ellipse_points(2.0, 1.0, 512));
    CHECK(std::abs(coarse.length() - fine.length()) < 1e-6);
    CHECK(std::abs(coarse.enclosed_area() - fine.enclosed_area()) < 1e-6);
    const auto g = [](Point2 x, double, double k) { return (1.0 + 0.1 * x.x1 * x.x1) * k; };
    CHECK(std::abs(coarse.integrate(g) - fine.integrate(g)) < 1e-6);
}

TEST_CASE("orientation and exterior curvature sign") {
    auto pts = circle_points(1.0, 64);
    std::reverse(pts.begin(), pts.end());
    const auto c = curve_from_parametrization(pts);
    CHECK(c.reversed());
    CHECK(c.enclosed_area() > 0.0);
    CHECK(c.curvature(0.5) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(c.curvature(0.5, DomainSide::Exterior) == doctest::Approx(-1.0).epsilon(1e-4));
}

TEST_CASE("change of variables in a tubular neighbourhood") {
    // |u|^2 concentrated in the collar 0 < t < 0.4 inside the unit circle
    const auto u2 = [](Point2 x) {
        const double r = norm(x);
        const double g = std::exp(-(r - 0.8) * (r - 0.8) / (2.0 * 0.06 * 0.06));
        return g * g * (1.0 + 0.3 * x.x1 + 0.2 * x.x2 * x.x2);
    };
    // area integral in polar coordinates
    const auto rr = composite_gauss_legendre(0.0, 1.0, 40, 8);
    const auto th = composite_gauss_legendre(0.0, 2.0 * kPi, 32, 8);
    double area = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i)
        for (std::size_t j = 0; j < th.size(); ++j) {
            const double r = rr.nodes[i];
            area += rr.weights[i] * th.weights[j] * r * u2({r * std::cos(th.nodes[j]), r * std::sin(th.nodes[j])});
        }
    // (s, t) integral weighted by 1 - t k(s)
    const auto c = curve_from_parametrization(circle_points(1.0, 256));
    const auto tt = composite_gauss_legendre(0.0, 0.6, 40, 8);
    double tube = 0.0;
    for (const auto& node : c.quadrature(8)) {
        const Point2 n = c.inward_normal(node.s);
        for (std::size_t i = 0; i < tt.size(); ++i) {
            const double t = tt.nodes[i];
            tube += node.weight * tt.weights[i] * (1.0 - t * node.curvature) * u2(node.position + t * n);
        }
    }
    CHECK(std::abs(area - tube) < 1e-6 * area);
}

TEST_CASE("curve input parsing") {
    std::istringstream in("# unit square corners\n0 0\n\n1 0\n  1 1\n0 1\n");
    const auto pts = read_curve_points(in);
    REQUIRE(pts.size() == 4);
    CHECK(pts[2] == Point2{1.0, 1.0});
    std::istringstream bad("0 0\n1 x\n");
    CHECK_THROWS_AS(read_curve_points(bad), ConfigError);
    CHECK_THROWS(read_curve_file("/nonexistent/curve.txt"));
}

TEST_CASE("invalid curves") {
    CHECK_THROWS_AS(curve_from_parametrization(circle_points(1.0, 8)), ConfigError);
    auto dup = circle_points(1.0, 32);
    dup.insert(dup.begin() + 5, dup[5]);
    CHECK_THROWS_AS(curve_from_parametrization(dup), ConfigError);
    // figure eight
    std::vector<Point2> eight;
    for (int i = 0; i < 64; ++i) {
        const double t = 2.0 * kPi * i / 64;
        eight.push_back({std::sin(t), std::sin(t) * std::cos(t)});
    }
    CHECK_THROWS_AS(curve_from_parametrization(eight), GeometryError);
    // a duplicated closing point is accepted
    auto closed = circle_points(1.0, 64);
    closed.push_back(closed.front());
    CHECK(curve_from_parametrization(closed).samples().size() == 64);
}

TEST_CASE("open curves") {
    std::vector<Point2> arc;
    for (int i = 0; i < 129; ++i) {
        const double t = kPi * i / 128;
        arc.push_back({std::cos(t), std::sin(t)});
    }
    const auto c = curve_from_parametrization(arc, false);
    CHECK_FALSE(c.closed());
    CHECK(std::abs(c.length() - kPi) < 1e-5);
}

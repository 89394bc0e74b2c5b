#include "doctest.h"

#include <cmath>
#include <numbers>

#include "magspec/degennes.hpp"
#include "magspec/errors.hpp"
#include "oracles.hpp"
#include "shared_table.hpp"

using namespace magspec;

TEST_CASE("ground band at zero momentum") {
    CHECK(std::abs(mu1(0.0, 4000) - 1.0) < 1e-5);
    CHECK(std::abs(mu1_richardson(0.0, 2000) - 1.0) < 1e-9);
}

TEST_CASE("band values match the shooting oracle") {
    for (double xi : {-1.0, 0.0, 0.5, 2.0, 3.5}) {
        CAPTURE(xi);
        CHECK(mu1_richardson(xi, 2000) == doctest::Approx(oracle::shooting_mu1(xi)).epsilon(1e-9));
    }
    CHECK(oracle::shooting_mu1(2.0) == doctest::Approx(oracle::kMu1AtTwo).epsilon(1e-10));
}

TEST_CASE("negative momentum lifts the band above the potential floor") {
    CHECK(mu1(-2.0, 4000) >= 4.0);
}

TEST_CASE("ground band near the minimizer") {
    const double a = mu1(0.7682, 2000);
    const double b = mu1(0.7682, 4000);
    CHECK(std::abs(b - 0.5901) < 1e-4);
    CHECK(std::abs(mu1_richardson(0.7682, 2000) - 4.0 * b / 3.0 + a / 3.0) < 1e-9);
    CHECK(std::abs(mu1_richardson(0.7682, 2000) - mu1_richardson(0.7682, 4000)) < 1e-8);
}

TEST_CASE("modes are orthonormal, ordered, and signed") {
    const auto modes = solve_de_gennes(DeGennesConfig::infinite(0.5, 3000), 5);
    REQUIRE(modes.size() == 5);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        CHECK(modes[i].index == static_cast<int>(i) + 1);
        CHECK(modes[i].samples.front() > 0.0);
        CHECK(std::abs(modes[i].norm() - 1.0) < 1e-10);
        if (i > 0) CHECK(modes[i].eigenvalue > modes[i - 1].eigenvalue);
        for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(modes[i].dot(modes[j])) < 1e-8);
    }
}

TEST_CASE("second-order grid convergence") {
    const double a = mu1(1.3, 1000), b = mu1(1.3, 2000), c = mu1(1.3, 4000);
    const double ratio = (a - b) / (b - c);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("sign structure of the ground band") {
    for (int i = 1; i <= 60; ++i) CHECK(mu1(0.1 * i, 2000) < 1.0 + 1e-5);
    for (int i = 1; i <= 30; ++i) CHECK(mu1(-0.1 * i, 2000) > 1.0 - 1e-5);
}

TEST_CASE("ground band approaches one at large momentum") {
    for (double xi = 3.0; xi <= 6.0; xi += 0.5) {
        CAPTURE(xi);
        CHECK(std::abs(mu1_richardson(xi, 2000) - 1.0) <= std::exp(-xi * xi / 2.0));
    }
}

TEST_CASE("Dirichlet truncation") {
    CHECK(std::abs(mu1_truncated(1.0, 8.0, 4000) - mu1(1.0, 4000)) < 1e-6);
    CHECK(mu1_truncated(5.0, 2.0, 4000) >= 4.0);
    CHECK(mu1_truncated(0.0, 0.5, 4000) >= std::numbers::pi * std::numbers::pi - 1e-6);
    // monotone in the height and never below the half-line value; all solves share the
    // grid step, so each Dirichlet problem embeds in the longer ones
    const double step = 0.002;
    for (double xi : {-0.5, 0.3, 1.0, 2.0}) {
        const double inf = de_gennes_eigenvalues(
            DeGennesConfig::infinite(xi, static_cast<std::size_t>(std::lround(12.0 / step)), 12.0), 1)[0];
        double prev = mu1_truncated(xi, 1.0, static_cast<std::size_t>(std::lround(1.0 / step)));
        for (double T : {1.5, 2.0, 3.0, 5.0, 8.0}) {
            const double cur = mu1_truncated(xi, T, static_cast<std::size_t>(std::lround(T / step)));
            CHECK(cur <= prev + 1e-8);
            CHECK(cur >= inf - 1e-8);
            prev = cur;
        }
    }
}

TEST_CASE("minimum of the ground band") {
    Theta0Options opt;
    opt.n_points = 2000;
    const auto r2000 = theta0_at_resolution(opt);
    opt.n_points = 4000;
    const auto r4000 = theta0_at_resolution(opt);
    CHECK(std::abs(r2000.theta0 - r4000.theta0) < 1e-6);
    CHECK(r4000.theta0 > 0.0);
    CHECK(r4000.theta0 < 1.0);
    CHECK(r4000.theta0 == doctest::Approx(oracle::kTheta0).epsilon(1e-9));
    CHECK(r4000.xi_star == doctest::Approx(oracle::kXiStar).epsilon(1e-5));
    for (double m : r4000.scan_mu1) CHECK(r4000.theta0 <= m + 1e-12);
}

TEST_CASE("second band stays above one") {
    std::vector<double> grid;
    for (int i = -60; i <= 60; ++i) grid.push_back(0.05 * i);
    const auto coarse = mu2_gap(grid, 2000);
    const auto fine = mu2_gap(grid, 4000);
    CHECK(fine.min_mu2 > 1.0);
    CHECK(std::abs(coarse.min_mu2 - fine.min_mu2) < 1e-4);
    CHECK(mu2_gap({0.0}, 4000).min_mu2 > mu1(0.0, 4000));
}

TEST_CASE("tabulated band") {
    const auto& table = shared_table();
    CHECK(table(2.0) == doctest::Approx(oracle::kMu1AtTwo).epsilon(1e-9));
    const auto [xs, th] = table.minimum();
    CHECK(th == doctest::Approx(oracle::kTheta0).epsilon(1e-9));
    CHECK(xs == doctest::Approx(oracle::kXiStar).epsilon(1e-5));
    CHECK(std::abs(table.derivative(xs)) < 1e-6);
    CHECK_THROWS_AS(table(6.5), ExtrapolationError);
}

TEST_CASE("invalid configurations") {
    CHECK_THROWS_AS(mu1(0.0, 8), ConfigError);
    CHECK_THROWS_AS(DeGennesConfig::infinite(10.0, 4000, 12.0).validate(), ConfigError);
    CHECK_THROWS_AS(mu1_truncated(0.0, -1.0, 4000), ConfigError);
}

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "magspec/errors.hpp"
#include "magspec/projectors.hpp"
#include "magspec/quadrature.hpp"

using namespace magspec;

TEST_CASE("Laguerre polynomials") {
    CHECK(laguerre(0, 3.7) == 1.0);
    CHECK(laguerre(1, 0.5) == doctest::Approx(0.5));
    CHECK(laguerre(2, 1.0) == doctest::Approx(-0.5));
    CHECK(laguerre(3, 2.0) == doctest::Approx((6.0 - 36.0 + 36.0 - 8.0) / 6.0));
    for (int n = 0; n <= 20; ++n) CHECK(laguerre(n, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("Landau kernel diagonal is constant") {
    const auto p = ProjectorKernel::landau(1, 0.1, 2.0);
    CHECK(std::real(landau_kernel_eval(p, {0.3, -0.7}, {0.3, -0.7})) == doctest::Approx(3.18310).epsilon(1e-6));
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int j = 1; j <= 6; ++j) {
        const auto q = ProjectorKernel::landau(j, 0.37, 1.3);
        for (int i = 0; i < 50; ++i) {
            const Point2 x{u(gen), u(gen)};
            const cdouble k = landau_kernel_eval(q, x, x);
            CHECK(std::abs(k - 1.3 / (2.0 * std::numbers::pi * 0.37)) < 1e-14);
        }
    }
}

TEST_CASE("Landau kernel off the diagonal") {
    const auto p = ProjectorKernel::landau(2, 1.0, 1.0);
    const double expected = std::exp(-0.25) * 0.5 / (2.0 * std::numbers::pi);
    CHECK(std::abs(landau_kernel_eval(p, {0, 0}, {1, 0})) == doctest::Approx(expected).epsilon(1e-13));
    const auto q = ProjectorKernel::landau(3, 0.2, 1.7);
    const Point2 x{0.4, -1.1}, y{-0.3, 0.25};
    CHECK(std::abs(landau_kernel_eval(q, x, y) - std::conj(landau_kernel_eval(q, y, x))) < 1e-14);
}

TEST_CASE("half-plane kernel") {
    HalfPlaneModeSource source(4000, 2);
    const auto& u1 = source.mode(1, 0.0);
    SUBCASE("diagonal at the origin") {
        const Mode1D coarse = solve_de_gennes(DeGennesConfig::infinite(0.0, 2000), 1)[0];
        const Mode1D fine = solve_de_gennes(DeGennesConfig::infinite(0.0, 4000), 1)[0];
        CHECK(std::abs(coarse.samples[0] - fine.samples[0]) < 1e-5);
        const auto p = ProjectorKernel::half_plane(1, 0.5, 2.0, 0.0);
        const cdouble k = halfplane_kernel_eval(p, {0, 0}, {0, 0}, u1);
        CHECK(std::real(k) == doctest::Approx(4.0 * fine.samples[0] * fine.samples[0]).epsilon(1e-12));
    }
    SUBCASE("unit parameters give the fiber kernel") {
        const auto& u = source.mode(2, 0.6);
        const auto p = ProjectorKernel::half_plane(2, 1.0, 1.0, 0.6);
        const Point2 x{0.3, 1.2}, y{-0.8, 0.4};
        const cdouble expected = std::polar(u(1.2) * u(0.4), -0.6 * (0.3 + 0.8));
        CHECK(std::abs(halfplane_kernel_eval(p, x, y, u) - expected) < 1e-14);
    }
    SUBCASE("dilation covariance and symmetry") {
        const auto& u = source.mode(1, 0.6);
        const auto p = ProjectorKernel::half_plane(1, 0.25, 4.0, 0.6);
        const auto unit = ProjectorKernel::half_plane(1, 1.0, 1.0, 0.6);
        const Point2 x{0.3, 0.5}, y{-0.2, 0.9};
        const double k = p.dilation();
        const cdouble a = halfplane_kernel_eval(p, x, y, u);
        const cdouble b = 16.0 * halfplane_kernel_eval(unit, k * x, k * y, u);
        CHECK(std::abs(a - b) < 1e-13 * std::abs(a));
        CHECK(std::abs(a - std::conj(halfplane_kernel_eval(p, y, x, u))) < 1e-14);
    }
    SUBCASE("rank-one structure on the fiber") {
        // int_0^inf K(x, (z1, t)) K((z1, t), y) dt = sqrt(b/h) K(x, y) for any z1
        const auto& u = source.mode(1, 0.8);
        const auto p = ProjectorKernel::half_plane(1, 0.5, 2.0, 0.8);
        const double k = p.dilation();
        const auto rule = composite_gauss_legendre(0.0, (u.t_max() - 0.5) / k, 200, 8);
        const Point2 x{0.1, 0.35}, y{-0.4, 0.6};
        for (double z1 : {-1.0, 0.0, 2.5}) {
            cdouble acc{};
            for (std::size_t i = 0; i < rule.size(); ++i) {
                const Point2 z{z1, rule.nodes[i]};
                acc += rule.weights[i] * halfplane_kernel_eval(p, x, z, u) * halfplane_kernel_eval(p, z, y, u);
            }
            const cdouble expected = k * halfplane_kernel_eval(p, x, y, u);
            CHECK(std::abs(acc - expected) < 1e-6 * std::abs(expected));
        }
    }
    SUBCASE("no extrapolation beyond the mode grid") {
        const auto p = ProjectorKernel::half_plane(1, 1.0, 1.0, 0.0);
        CHECK_THROWS_AS(halfplane_kernel_eval(p, {0, 0}, {0, 50.0}, u1), ExtrapolationError);
    }
}

TEST_CASE("resolution of the identity") {
    ResolutionIdentityOptions opt;
    opt.n_points = 1500;
    opt.check_refinement = false;
    const auto f = TestFunction::gaussian({0.2, 1.5}, 0.5);
    SUBCASE("zero probe") {
        const auto r = verify_resolution_identity(1.0, 1.0, TestFunction::zero(), 8.0, 4, opt);
        CHECK(r.defect_norm == 0.0);
        CHECK(r.residual == 0.0);
    }
    SUBCASE("more modes and a wider cut reduce the defect") {
        const double r4 = verify_resolution_identity(1.0, 1.0, f, 6.0, 4, opt).residual;
        const double r8 = verify_resolution_identity(1.0, 1.0, f, 6.0, 8, opt).residual;
        CHECK(r8 < r4);
        ResolutionIdentityOptions wide = opt;
        wide.xi_panels = 40;
        const double c8 = verify_resolution_identity(1.0, 1.0, f, 8.0, 8, opt).residual;
        const double c10 = verify_resolution_identity(1.0, 1.0, f, 10.0, 8, wide).residual;
        CHECK(c10 <= c8 + 1e-6);
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(verify_resolution_identity(1.0, 1.0, f, -1.0, 4, opt), ConfigError);
        CHECK_THROWS_AS(verify_resolution_identity(1.0, 1.0, f, 8.0, 0, opt), ConfigError);
    }
}

TEST_CASE("intertwining with the operator") {
    IntertwiningOptions opt;
    opt.n_points = 4000;
    SUBCASE("unit parameters at zero momentum") {
        const auto r = verify_intertwining(ProjectorKernel::half_plane(1, 1.0, 1.0, 0.0),
                                           TestFunction::gaussian({0.0, 1.0}, 0.6), opt);
        CHECK(r.mu == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(r.eigenvalue_estimate == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(r.residual < 1e-3);
    }
    SUBCASE("higher level") {
        const auto r = verify_intertwining(ProjectorKernel::half_plane(2, 0.5, 2.0, -0.4),
                                           TestFunction::gaussian({0.1, 0.7}, 0.4), opt);
        CHECK(r.residual < 1e-3);
        CHECK(r.eigenvalue_estimate == doctest::Approx(r.mu).epsilon(1e-4));
    }
    SUBCASE("orthogonal probe is annihilated") {
        const auto r = verify_intertwining(ProjectorKernel::half_plane(1, 1.0, 1.0, 0.0),
                                           TestFunction::gaussian({0.0, 1.5}, 0.35, 20.0), opt);
        CHECK(r.annihilated);
        CHECK(std::isnan(r.residual));
        CHECK(r.relative_applied_norm < 1e-10);
    }
}

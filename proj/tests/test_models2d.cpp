#include "doctest.h"

#include <cmath>
#include <numbers>

#include "magspec/errors.hpp"
#include "magspec/geometry.hpp"
#include "magspec/models2d.hpp"
#include "magspec/semiclassics.hpp"
#include "oracles.hpp"
#include "shared_table.hpp"

using namespace magspec;

TEST_CASE("cylinder energy against the two-dimensional Galerkin oracle") {
    struct Case {
        CylinderSpec spec;
        int K;
    };
    for (const Case& c : {Case{{1.0, 5.0, 1.0, 0.05, 0.01}, 36}, Case{{1.0, 3.0, 2.0, 0.05, 0.01}, 36},
                          Case{{2.0, 3.0, 1.0, 0.1, 0.0025}, 36}}) {
        CAPTURE(c.spec.S);
        CAPTURE(c.spec.b);
        const double exact = cylinder_energy_exact(c.spec).energy;
        const auto ref = oracle::cylinder_galerkin(c.spec.S, c.spec.T, c.spec.b, c.spec.lambda, c.spec.h, c.K);
        CHECK(ref.off_block_max < 1e-10);
        CHECK(exact > 0.0);
        CHECK(std::abs(exact - ref.energy) < 1e-4 * ref.energy);
    }
}

TEST_CASE("cylinder energy bound and empty case") {
    const CylinderSpec spec{1.0, 5.0, 1.0, 0.05, 0.01};
    const auto r = cylinder_energy_exact(spec);
    CHECK(cylinder_energy_bound(spec) == doctest::Approx(0.09406).epsilon(1e-4));
    CHECK(r.energy <= cylinder_energy_bound(spec));
    REQUIRE(r.certificates.size() >= 2);
    for (const auto& c : r.certificates) CHECK(c.ok);
    CHECK(r.n_min <= 0);
    CHECK(r.n_max >= 0);
    CHECK(r.max_band_count >= 1);
    const CylinderSpec low{1.0, 1.0, 1.0, 0.05, 0.01};
    CHECK(cylinder_energy_exact(low).energy == 0.0);
    CHECK_THROWS_AS(cylinder_energy_exact({1.0, 5.0, 1.0, 1.0, 0.01}), ConfigError);
    CHECK_THROWS_AS(cylinder_energy_exact({-1.0, 5.0, 1.0, 0.1, 0.01}), ConfigError);
}

TEST_CASE("cylinder energy is thread independent") {
    const CylinderSpec spec{2.0, 10.0, 1.0, 0.1, 0.0025};
    CHECK(cylinder_energy_exact(spec, 2000, 1).energy == cylinder_energy_exact(spec, 2000, 3).energy);
}

TEST_CASE("Riesz mean and counting function arithmetic") {
    SpectrumResult s;
    s.threshold = 1.0;
    s.h = 1.0;
    s.b = 1.0;
    CHECK(riesz_mean(s, 0.5) == 0.0);
    CHECK(counting_function(s, 0.5) == 0);
    s.eigenvalues = {0.5, 0.9};
    s.sector_labels = {0, 1};
    CHECK(riesz_mean(s, 1.0) == doctest::Approx(0.6));
    CHECK(counting_function(s, 0.8) == 1);
    CHECK_THROWS_AS(riesz_mean(s, 1.2), PreconditionError);
    CHECK_THROWS_AS(counting_function(s, 1.2), PreconditionError);
}

TEST_CASE("disk ground state and counting at h = 0.005") {
    const DiskSpec spec{1.0, 1.0, 0.005};
    const auto r = disk_spectrum(spec, spec.b * spec.h);
    REQUIRE_FALSE(r.eigenvalues.empty());
    const double ratio = r.eigenvalues.front() / (spec.b * spec.h);
    CHECK(ratio > 0.55);
    CHECK(ratio < 0.65);
    for (std::size_t i = 1; i < r.eigenvalues.size(); ++i) CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1]);
    for (double e : r.eigenvalues) CHECK(e < r.threshold);
    for (const auto& c : r.certificates) CHECK(c.ok);

    const auto circle = curve_from_parametrization(circle_points(1.0, 256));
    const auto& table = shared_table();
    const double coef = counting_coefficient(circle, FieldProfile::constant(1.0, table.minimum().second), 0.8, table);
    const double lhs = std::sqrt(spec.h) * static_cast<double>(counting_function(r, 0.8 * spec.b * spec.h));
    CHECK(std::abs(lhs / coef - 1.0) < 0.15);

    SUBCASE("Riesz mean is the integral of the counting function") {
        const double E = spec.b * spec.h;
        double integral = 0.0;
        for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
            const double next = i + 1 < r.eigenvalues.size() ? r.eigenvalues[i + 1] : E;
            integral += static_cast<double>(i + 1) * (std::min(next, E) - r.eigenvalues[i]);
        }
        CHECK(riesz_mean(r, E) == doctest::Approx(integral).epsilon(1e-12));
    }
}

TEST_CASE("dilation scaling of the disk spectrum") {
    DiskSolveOptions opt;
    opt.check_resolution = false;
    const auto a = disk_spectrum({1.0, 1.0, 0.01}, 0.01, opt);
    const auto b = disk_spectrum({1.0, 4.0, 0.04}, 0.16, opt);
    REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
    REQUIRE_FALSE(a.eigenvalues.empty());
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
        CHECK(std::abs(b.eigenvalues[i] - 16.0 * a.eigenvalues[i]) < 1e-6 * b.eigenvalues[i]);
}

TEST_CASE("radial grid convergence is second order") {
    const DiskSpec spec{1.0, 1.0, 0.01};
    const double a = disk_sector_lowest(spec, 50, 400);
    const double b = disk_sector_lowest(spec, 50, 800);
    const double c = disk_sector_lowest(spec, 50, 1600);
    CHECK((a - b) / (b - c) == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("gauge invariance on a translated disk") {
    PeierlsDiskSpec centred;
    const auto ref = disk_spectrum_peierls(centred, 6);
    PeierlsDiskSpec moved = centred;
    moved.center = {0.7, -0.4};
    moved.gauge_origin = {0.7, -0.4};
    const auto shifted = disk_spectrum_peierls(moved, 6);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(shifted[i] - ref[i]) < 1e-8 * ref[i]);
    // loose agreement with the angular-sector solver
    DiskSolveOptions opt;
    opt.check_resolution = false;
    const auto sectors = disk_spectrum({1.0, 1.0, 0.1}, 0.15, opt);
    REQUIRE(sectors.eigenvalues.size() >= 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(ref[i] / sectors.eigenvalues[i] - 1.0) < 0.03);
}

TEST_CASE("exterior eigenvalues do not increase as the outer radius grows") {
    DiskSolveOptions opt;
    opt.check_resolution = false;
    std::vector<double> prev;
    // same radial step for every outer radius, so the smaller grids embed in the larger
    for (int cells : {800, 1120, 1440}) {
        DiskSpec spec{1.0, 1.0, 0.01};
        spec.exterior = true;
        spec.n_radial = static_cast<std::size_t>(cells);
        spec.R_out = 1.0 + cells * 0.1 / 80.0;
        const auto r = disk_spectrum(spec, 0.01, opt);
        REQUIRE_FALSE(r.eigenvalues.empty());
        for (std::size_t j = 0; j < std::min(prev.size(), r.eigenvalues.size()); ++j)
            CHECK(r.eigenvalues[j] <= prev[j] + 1e-8 * 0.01);
        CHECK(r.eigenvalues.size() >= prev.size());
        prev = r.eigenvalues;
        bool has_sensitivity = false;
        for (const auto& c : r.certificates) has_sensitivity |= c.kind == "R_out-sensitivity";
        CHECK(has_sensitivity);
    }
}

TEST_CASE("threshold flagging") {
    DiskSolveOptions opt;
    opt.check_resolution = false;
    const DiskSpec spec{1.0, 1.0, 0.02};
    const auto full = disk_spectrum(spec, 0.02, opt);
    REQUIRE(full.eigenvalues.size() >= 2);
    const auto cut = disk_spectrum(spec, full.eigenvalues[1] + 0.5e-10 * 0.02, opt);
    REQUIRE(cut.flagged.size() == 1);
    CHECK(cut.flagged[0] == full.eigenvalues[1]);
    CHECK(cut.eigenvalues.size() == 1);
    for (double e : cut.eigenvalues) CHECK(e < full.eigenvalues[1]);
}

TEST_CASE("invalid disk configurations") {
    CHECK_THROWS_AS(disk_spectrum({1.0, 1.0, 0.01}, 0.02), ConfigError);
    DiskSpec coarse{1.0, 1.0, 0.01};
    coarse.n_radial = 100;
    CHECK_THROWS_AS(disk_spectrum(coarse, 0.01), ConfigError);
    DiskSpec ext{1.0, 1.0, 0.01};
    ext.exterior = true;
    CHECK_THROWS_AS(disk_spectrum(ext, 0.011), ConfigError);
    ext.R_out = 1.5;
    CHECK_THROWS_AS(disk_spectrum(ext, 0.01), ConfigError);
    DiskSpec under{1.0, 1.0, 0.0025};
    under.n_radial = 200;
    CHECK_THROWS_AS(disk_spectrum(under, 0.0025), NumericalError);
}

// magspec: command-line front end for the magnetic spectral toolkit.
//
// Exit status: 0 success, 1 a verification missed its tolerance (or a numerical
// procedure failed), 2 usage or configuration error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "magspec/degennes.hpp"
#include "magspec/errors.hpp"
#include "magspec/geometry.hpp"
#include "magspec/harness.hpp"
#include "magspec/models2d.hpp"
#include "magspec/parallel.hpp"
#include "magspec/projectors.hpp"
#include "magspec/semiclassics.hpp"

using namespace magspec;

namespace {

struct Common {
    unsigned threads = default_threads();
    std::string output;
    std::size_t table_points = 2000;
};

// Thrown for exit status 1.
struct VerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Mu1Table band_table(const Common& c) {
    return Mu1Table::build(-6.0, 6.0, 0.01, c.table_points, c.threads, true);
}

struct CurveArgs {
    std::string file;
    double circle = 0.0;
    std::vector<double> ellipse;
    std::size_t points = 256;

    void add(CLI::App* app) {
        auto* f = app->add_option("--curve", file, "boundary points file: one 'x y' pair per line, '#' comments");
        auto* c = app->add_option("--circle", circle, "circle of this radius")->check(CLI::PositiveNumber);
        auto* e = app->add_option("--ellipse", ellipse, "ellipse semi-axes a b")->expected(2);
        f->excludes(c)->excludes(e);
        c->excludes(e);
        app->add_option("--points", points, "sample count for --circle/--ellipse")->capture_default_str();
    }

    BoundaryCurve build() const {
        if (!file.empty()) return curve_from_parametrization(read_curve_file(file));
        if (!ellipse.empty()) {
            if (!(ellipse[0] > 0.0) || !(ellipse[1] > 0.0)) throw ConfigError("ellipse semi-axes must be positive");
            return curve_from_parametrization(ellipse_points(ellipse[0], ellipse[1], points));
        }
        if (circle > 0.0) return curve_from_parametrization(circle_points(circle, points));
        throw ConfigError("one of --curve, --circle, --ellipse is required");
    }
};

// B(x) = b0 + c1 x1^2 + c2 x2^2; b defaults to b0.
struct FieldArgs {
    double b0 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double b = 0.0;

    void add(CLI::App* app) {
        app->add_option("--b0", b0, "field B(x) = b0 + c1 x1^2 + c2 x2^2")->capture_default_str();
        app->add_option("--c1", c1, "x1^2 coefficient of the field")->capture_default_str();
        app->add_option("--c2", c2, "x2^2 coefficient of the field")->capture_default_str();
        app->add_option("--b", b, "infimum of B over the closed domain (default b0)");
    }

    FieldProfile build(const BoundaryCurve& curve, double theta0) const {
        const double inf = b > 0.0 ? b : b0;
        if (c1 == 0.0 && c2 == 0.0 && inf == b0) return FieldProfile::constant(b0, theta0);
        const double a0 = b0, a1 = c1, a2 = c2;
        return FieldProfile::from_function(
            curve, [a0, a1, a2](Point2 x) { return a0 + a1 * x.x1 * x.x1 + a2 * x.x2 * x.x2; }, inf, theta0);
    }
};

struct DiskArgs {
    DiskSpec spec;

    void add(CLI::App* app, bool with_h) {
        app->add_option("--R", spec.R, "disk radius")->capture_default_str();
        app->add_option("--b", spec.b, "field strength")->capture_default_str();
        if (with_h) app->add_option("--h", spec.h, "semiclassical parameter")->capture_default_str();
        app->add_option("--m-margin", spec.m_margin, "extra angular sectors on each side")->capture_default_str();
        app->add_option("--n-radial", spec.n_radial, "radial cells (0: automatic)")->capture_default_str();
        app->add_flag("--exterior", spec.exterior, "exterior of the disk, Dirichlet at R_out");
        app->add_option("--R-out", spec.R_out, "outer truncation radius (0: R + 12 sqrt(h/b))")->capture_default_str();
    }
};

void write_output(const Common& c, const ConvergenceTable& t) {
    if (c.output.empty()) return;
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + c.output);
    write_csv(t, out);
}

void print_certificates(const std::vector<Certificate>& certs) {
    for (const auto& c : certs) std::printf("  certificate %-18s %s%s\n", c.kind.c_str(), c.detail.c_str(), c.ok ? "" : " [NOT OK]");
}

std::vector<double> parse_h_list(const std::vector<double>& given) {
    return given.empty() ? default_h_list() : given;
}

void check_limit(const ConvergenceTable& t, double tolerance) {
    const auto x = extrapolate(t);
    const double rhs = t.rows.back().rhs;
    const double err = rhs != 0.0 ? std::abs(x.limit_estimate / rhs - 1.0) : std::abs(x.limit_estimate);
    std::printf("limit %.12e vs %.12e: %s %.3e (tolerance %.3e)\n", x.limit_estimate, rhs,
                rhs != 0.0 ? "relative error" : "absolute error", err, tolerance);
    if (!(err < tolerance)) throw VerificationFailed("extrapolated limit outside the tolerance");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral computations for magnetic Neumann Laplacians: de Gennes band, boundary coefficients, "
                 "model-domain spectra and their semiclassical comparison."};
    app.set_help_flag("--help", "print this help and exit");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "INI file: global keys first, then one [subcommand] section per subcommand; flags win");
    app.require_subcommand(1);

    Common common;
    app.add_option("--threads", common.threads, "worker threads (default: MAGSPEC_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--output", common.output, "CSV output path for sweep tables");
    app.add_option("--table-points", common.table_points, "grid points per 1D solve in the mu_1 table")
        ->capture_default_str();

    // mu1
    double xi = 0.0;
    std::size_t n_points = 4000;
    bool richardson = false;
    auto* mu1_cmd = app.add_subcommand("mu1", "lowest eigenvalue mu_1(xi) of the half-line de Gennes operator");
    mu1_cmd->add_option("--xi", xi, "momentum xi")->required();
    mu1_cmd->add_option("--n", n_points, "grid points")->capture_default_str();
    mu1_cmd->add_flag("--richardson", richardson, "combine the n and 2n grids");

    // mu2-gap
    double xi_min = -3.0, xi_max = 3.0, xi_step = 0.05;
    auto* gap_cmd = app.add_subcommand("mu2-gap", "minimum of the second band mu_2 over a xi grid");
    gap_cmd->add_option("--xi-min", xi_min)->capture_default_str();
    gap_cmd->add_option("--xi-max", xi_max)->capture_default_str();
    gap_cmd->add_option("--xi-step", xi_step)->capture_default_str()->check(CLI::PositiveNumber);
    gap_cmd->add_option("--n", n_points, "grid points")->capture_default_str();

    // theta0
    double tolerance = 1e-6;
    auto* th_cmd = app.add_subcommand("theta0", "minimum Theta0 of mu_1 and its minimizer");
    th_cmd->add_option("--tolerance", tolerance, "agreement required between grid levels")->capture_default_str();

    // moment
    double c_value = 1.0;
    auto* mom_cmd = app.add_subcommand("moment", "edge moment m(c) = int [c - mu_1(xi)]_+ dxi, 0 < c <= 1");
    mom_cmd->add_option("--c", c_value, "filling level c")->capture_default_str();

    // coef-energy, coef-counting
    CurveArgs curve_args;
    FieldArgs field_args;
    double lambda = 0.8;
    auto* ce_cmd = app.add_subcommand("coef-energy", "boundary energy coefficient (1/2pi) int B^{3/2} m(b/B) ds");
    curve_args.add(ce_cmd);
    field_args.add(ce_cmd);
    auto* cc_cmd = app.add_subcommand("coef-counting", "counting coefficient (1/2pi) int B^{1/2} |{mu_1 < lambda/B}| ds");
    curve_args.add(cc_cmd);
    field_args.add(cc_cmd);
    cc_cmd->add_option("--lambda", lambda, "level lambda, 0 < lambda < b")->capture_default_str();

    // cylinder-energy
    CylinderSpec cyl;
    auto* cyl_cmd = app.add_subcommand("cylinder-energy", "sum of [hb(1 + lambda) - e_j]_+ on the truncated half-cylinder");
    cyl_cmd->add_option("--S", cyl.S, "circumference")->capture_default_str();
    cyl_cmd->add_option("--T", cyl.T, "height in units of h^{1/2}")->capture_default_str();
    cyl_cmd->add_option("--b", cyl.b, "field strength")->capture_default_str();
    cyl_cmd->add_option("--lambda", cyl.lambda, "level above hb, 0 < lambda < 1")->capture_default_str();
    cyl_cmd->add_option("--h", cyl.h, "semiclassical parameter")->capture_default_str();
    cyl_cmd->add_option("--n", n_points, "grid points per 1D solve")->capture_default_str();

    // disk-spectrum
    DiskArgs disk_args;
    double threshold_frac = 1.0;
    bool no_resolution_check = false;
    auto* disk_cmd = app.add_subcommand("disk-spectrum", "eigenvalues of the disk (or its exterior) below a threshold");
    disk_args.add(disk_cmd, true);
    disk_cmd->add_option("--threshold", threshold_frac, "threshold in units of bh")->capture_default_str();
    disk_cmd->add_flag("--no-resolution-check", no_resolution_check, "skip the radial doubling check");

    // sweeps
    std::vector<double> h_list;
    double a = 1.0, lambda_frac = 0.8;
    double sweep_tolerance = 0.05;
    auto add_sweep = [&](CLI::App* cmd) {
        disk_args.add(cmd, false);
        cmd->add_option("--h-list", h_list, "decreasing h values (default 0.02 0.01 0.005 0.0025)")->delimiter(',');
        cmd->add_option("--tolerance", sweep_tolerance, "allowed error of the extrapolated limit")->capture_default_str();
    };
    auto* t1_cmd = app.add_subcommand("verify-thm1", "h^{-1/2} sum [e_j - bh]_- on the disk vs the boundary coefficient");
    add_sweep(t1_cmd);
    auto* t2_cmd = app.add_subcommand("verify-thm2", "bulk term from the shifted Riesz mean, differenced against a = 0");
    add_sweep(t2_cmd);
    t2_cmd->add_option("--a", a, "shift coefficient: threshold bh + a h^{3/2}")->capture_default_str();
    auto* tc_cmd = app.add_subcommand("verify-counting", "h^{1/2} N(lambda h) on the disk vs the counting coefficient");
    add_sweep(tc_cmd);
    tc_cmd->add_option("--lambda-frac", lambda_frac, "lambda / b in (0, 1)")->capture_default_str();

    // verify-projectors
    double ph = 0.5, pb = 2.0, pxi = 0.8, xi_cut = 8.0;
    int j_max = 12, level = 1;
    auto* proj_cmd = app.add_subcommand("verify-projectors", "Landau diagonal, resolution of the identity, intertwining");
    proj_cmd->add_option("--h", ph)->capture_default_str();
    proj_cmd->add_option("--b", pb)->capture_default_str();
    proj_cmd->add_option("--xi", pxi, "fiber momentum of the intertwining check")->capture_default_str();
    proj_cmd->add_option("--level", level, "band index j of the intertwining check")->capture_default_str();
    proj_cmd->add_option("--xi-cut", xi_cut)->capture_default_str();
    proj_cmd->add_option("--j-max", j_max)->capture_default_str();

    // prop-variational
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    auto* var_cmd = app.add_subcommand("prop-variational", "random finite-matrix checks of the trace inequalities");
    var_cmd->add_option("--seed", seed)->capture_default_str();
    var_cmd->add_option("--trials", trials)->capture_default_str();

    // report
    std::string input;
    auto* rep_cmd = app.add_subcommand("report", "read a sweep CSV and print its summary and extrapolation");
    rep_cmd->add_option("--input", input, "CSV written by a verify-* subcommand")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n";
        const CLI::App* sub = nullptr;
        for (const auto* s : app.get_subcommands()) sub = s;
        std::cerr << (sub ? sub->help() : app.help());
        return 2;
    }

    try {
        if (*mu1_cmd) {
            const double m = richardson ? mu1_richardson(xi, n_points) : mu1(xi, n_points);
            std::printf("mu1(xi = %g) = %.6f  (%.12e, n = %zu%s)\n", xi, m, m, n_points, richardson ? ", Richardson" : "");
        } else if (*gap_cmd) {
            std::vector<double> grid;
            for (double x = xi_min; x <= xi_max + 1e-12; x += xi_step) grid.push_back(x);
            if (grid.empty()) throw ConfigError("empty xi grid");
            const auto g = mu2_gap(grid, n_points, common.threads);
            std::printf("min mu2 = %.12e at xi = %.6f over %zu points\n", g.min_mu2, g.argmin, grid.size());
        } else if (*th_cmd) {
            const auto r = theta0(tolerance);
            std::printf("Theta0 = %.12f\nxi*    = %.10f\nrefinement change %.2e at n = %zu (tolerance %.1e)\n", r.theta0,
                        r.xi_star, r.refinement_change, r.n_points, tolerance);
        } else if (*mom_cmd) {
            const auto table = band_table(common);
            const auto r = edge_moment_detailed(c_value, table);
            std::printf("m(%g) = %.12e\ntail bound %.2e\nintegration range [%.10f, %.10f]\n", c_value, r.value, r.tail_bound,
                        r.xi_minus + 0.0, r.xi_plus);
        } else if (*ce_cmd || *cc_cmd) {
            const auto curve = curve_args.build();
            const auto table = band_table(common);
            const auto field = field_args.build(curve, table.minimum().second);
            std::printf("curve: length %.12e, area %.12e%s\n", curve.length(), curve.enclosed_area(),
                        curve.reversed() ? " (input was clockwise, reversed)" : "");
            if (*ce_cmd)
                std::printf("energy coefficient = %.12e\n", boundary_energy_coefficient(curve, field, table, common.threads));
            else
                std::printf("counting coefficient = %.12e\n", counting_coefficient(curve, field, lambda, table, common.threads));
        } else if (*cyl_cmd) {
            const auto r = cylinder_energy_exact(cyl, n_points, common.threads);
            std::printf("energy = %.12e\nbound  = %.12e\nmodes n in [%ld, %ld], at most %zu band(s) per mode\n", r.energy,
                        cylinder_energy_bound(cyl), r.n_min, r.n_max, r.max_band_count);
            print_certificates(r.certificates);
        } else if (*disk_cmd) {
            DiskSolveOptions opt;
            opt.threads = common.threads;
            opt.check_resolution = !no_resolution_check;
            const auto& s = disk_args.spec;
            const auto r = disk_spectrum(s, threshold_frac * s.b * s.h, opt);
            std::printf("%zu eigenvalue(s) below %.12e (sectors m in [%d, %d])\n", r.eigenvalues.size(), r.threshold, r.m_min,
                        r.m_max);
            for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
                std::printf("%6zu  %.12e  e/(bh) = %.10f  m = %d\n", i + 1, r.eigenvalues[i], r.eigenvalues[i] / (s.b * s.h),
                            r.sector_labels[i]);
            for (double e : r.flagged) std::printf("flagged (within 1e-10 bh of the threshold): %.12e\n", e);
            print_certificates(r.certificates);
            if (!common.output.empty()) {
                std::ofstream out(common.output, std::ios::binary);
                if (!out) throw ConfigError("cannot write " + common.output);
                out << "index,eigenvalue,m\n";
                char buf[64];
                for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.11e", r.eigenvalues[i]);
                    out << i + 1 << ',' << buf << ',' << r.sector_labels[i] << '\n';
                }
            }
        } else if (*t1_cmd || *t2_cmd || *tc_cmd) {
            const auto table = band_table(common);
            SweepOptions opt;
            opt.threads = common.threads;
            const auto hs = parse_h_list(h_list);
            ConvergenceTable t;
            if (*t1_cmd) {
                t = verify_theorem1(disk_args.spec, hs, table, opt);
            } else if (*t2_cmd) {
                auto both = verify_theorem2(disk_args.spec, a, hs, table, opt);
                std::cout << format_report(both.undifferenced) << '\n';
                t = std::move(both.differenced);
            } else {
                t = verify_counting(disk_args.spec, lambda_frac, hs, table, opt);
            }
            std::cout << format_report(t);
            write_output(common, t);
            check_limit(t, sweep_tolerance);
        } else if (*proj_cmd) {
            double worst = 0.0;
            for (int j = 1; j <= 8; ++j)
                for (double x1 : {-3.0, 0.0, 1.7})
                    for (double x2 : {-2.0, 0.4, 5.0}) {
                        const cdouble k = landau_kernel_eval(ProjectorKernel::landau(j, ph, pb), {x1, x2}, {x1, x2});
                        worst = std::max(worst, std::abs(k * (2.0 * std::numbers::pi * ph / pb) - 1.0));
                    }
            ResolutionIdentityOptions ro;
            ro.n_points = 2000;
            const auto res = verify_resolution_identity(ph, pb, TestFunction::gaussian({0.15, 1.5}, 0.35), xi_cut, j_max, ro);
            const auto tw = verify_intertwining(ProjectorKernel::half_plane(level, ph, pb, pxi),
                                                TestFunction::gaussian({0.0, 0.6}, 0.4));
            std::printf("Landau diagonal: max relative deviation from b/(2 pi h) %.2e\n", worst);
            std::printf("resolution of the identity: residual %.3e (refinement change %.1e)\n", res.residual,
                        res.refinement_change);
            if (tw.annihilated)
                std::printf("intertwining: probe annihilated, |Pi f|/|f| = %.2e\n", tw.relative_applied_norm);
            else
                std::printf("intertwining: residual %.3e, eigenvalue estimate %.10f, mu_%d(%g) = %.10f\n", tw.residual,
                            tw.eigenvalue_estimate, level, pxi, tw.mu);
            if (!(worst < 1e-14) || !(res.residual < 1e-3) || (!tw.annihilated && !(tw.residual < 1e-3)))
                throw VerificationFailed("projector identity outside tolerance");
        } else if (*var_cmd) {
            const auto r = variational_check(seed, trials);
            std::printf("%zu trials, %zu checks, %zu violations\n", r.trials, r.checks, r.violations);
            if (r.counterexample) std::printf("counterexample: %s\n", r.counterexample->c_str());
            if (!r.pass) throw VerificationFailed("variational property violated");
        } else if (*rep_cmd) {
            std::ifstream in(input);
            if (!in) throw ConfigError("cannot read " + input);
            const auto t = read_csv(in);
            std::cout << format_report(t);
            write_output(common, t);
        }
    } catch (const VerificationFailed& e) {
        std::cerr << "FAIL: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

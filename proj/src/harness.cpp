#include "magspec/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "magspec/errors.hpp"
#include "magspec/geometry.hpp"
#include "magspec/parallel.hpp"
#include "magspec/semiclassics.hpp"

namespace magspec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRateMin = 0.05;
constexpr double kRateMax = 8.0;

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

void check_h_list(const std::vector<double>& h_list) {
    if (h_list.empty()) throw ConfigError("h list is empty");
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (!(h_list[i] > 0.0)) throw ConfigError("h values must be positive");
        if (i > 0 && !(h_list[i] < h_list[i - 1])) throw ConfigError("h list must be strictly decreasing");
    }
}

DiskSpec at_h(const DiskSpec& tmpl, double h) {
    DiskSpec d = tmpl;
    d.h = h;
    return d;
}

Certificate xi_tail_certificate(const MomentResult& m) {
    return {"xi-tail", "edge moment truncated at xi = " + sci(m.xi_plus) + ", tail bound " + sci(m.tail_bound),
            m.tail_bound, true};
}

void describe_disk(ConvergenceTable& t, const DiskSpec& d, const std::vector<double>& h_list) {
    t.metadata["R"] = sci(d.R);
    t.metadata["b"] = sci(d.b);
    t.metadata["m_margin"] = std::to_string(d.m_margin);
    t.metadata["n_radial"] = d.n_radial == 0 ? "auto" : std::to_string(d.n_radial);
    t.metadata["exterior"] = d.exterior ? "true" : "false";
    std::string hs;
    for (double h : h_list) hs += (hs.empty() ? "" : " ") + sci(h);
    t.metadata["h_list"] = hs;
}

}  // namespace

void ConvergenceTable::validate(bool require_certificates) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && !(rows[i].h < rows[i - 1].h))
            throw ConfigError("table rows must have strictly decreasing h");
        if (require_certificates && rows[i].certificates.empty())
            throw ConfigError("row " + std::to_string(i) + " carries no truncation certificates");
    }
}

ConvergenceRow make_row(double h, double lhs, double rhs, std::vector<Certificate> certificates) {
    ConvergenceRow r;
    r.h = h;
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = rhs != 0.0 ? lhs / rhs : kNaN;
    r.abs_err = std::abs(lhs - rhs);
    r.certificates = std::move(certificates);
    return r;
}

void flag_error_trend(ConvergenceTable& table, double noise_floor) {
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].abs_err > table.rows[i - 1].abs_err + noise_floor)
            table.flags.push_back("|lhs - rhs| grows from " + sci(table.rows[i - 1].abs_err) + " to " +
                                  sci(table.rows[i].abs_err) + " at h = " + sci(table.rows[i].h));
}

ExtrapolationResult extrapolate(const ConvergenceTable& table) {
    if (table.rows.size() < 3) throw ConfigError("extrapolation needs at least 3 rows");
    table.validate(false);
    const auto& r = table.rows;
    const std::size_t n = r.size();
    const double h1 = r[n - 3].h, h2 = r[n - 2].h, h3 = r[n - 1].h;
    const double y1 = r[n - 3].lhs, y2 = r[n - 2].lhs, y3 = r[n - 1].lhs;

    ExtrapolationResult out;
    out.limit_estimate = y3;
    out.fitted_rate = kNaN;
    const auto residual_of = [&](double L, double C, double p) {
        double s = 0.0;
        for (const auto& row : r) {
            const double d = row.lhs - (L + C * std::pow(row.h, p));
            s += d * d;
        }
        return std::sqrt(s / static_cast<double>(r.size()));
    };

    const double scale = std::max({std::abs(y1), std::abs(y2), std::abs(y3), 1e-300});
    const double d12 = y1 - y2, d23 = y2 - y3;
    if (std::abs(d23) <= 1e-13 * scale || std::abs(d12) <= 1e-13 * scale || d12 * d23 <= 0.0) {
        double s = 0.0;
        for (const auto& row : r) s += (row.lhs - y3) * (row.lhs - y3);
        out.residual = std::sqrt(s / static_cast<double>(r.size()));
        return out;
    }
    const double rho = d12 / d23;
    const auto g = [&](double p) {
        return (std::pow(h1, p) - std::pow(h2, p)) / (std::pow(h2, p) - std::pow(h3, p)) - rho;
    };
    double lo = kRateMin, hi = kRateMax;
    double glo = g(lo), ghi = g(hi);
    if (!(glo * ghi < 0.0)) {
        double s = 0.0;
        for (const auto& row : r) s += (row.lhs - y3) * (row.lhs - y3);
        out.residual = std::sqrt(s / static_cast<double>(r.size()));
        return out;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    const double p = 0.5 * (lo + hi);
    const double C = d23 / (std::pow(h2, p) - std::pow(h3, p));
    out.fitted_rate = p;
    out.coefficient = C;
    out.limit_estimate = y3 - C * std::pow(h3, p);
    out.rate_available = true;
    out.residual = residual_of(out.limit_estimate, C, p);
    return out;
}

std::vector<double> default_h_list() { return {0.02, 0.01, 0.005, 0.0025}; }

ConvergenceTable verify_theorem1(const DiskSpec& disk, const std::vector<double>& h_list,
                                 const Mu1Table& table, const SweepOptions& options) {
    check_h_list(h_list);
    at_h(disk, h_list.front()).validate();
    const BoundaryCurve circle = curve_from_parametrization(circle_points(disk.R, options.curve_points));
    const double theta0 = table.minimum().second;
    const double rhs =
        boundary_energy_coefficient(circle, FieldProfile::constant(disk.b, theta0), table, options.threads);
    const Certificate tail = xi_tail_certificate(edge_moment_detailed(1.0, table));

    DiskSolveOptions dopt = options.disk;
    dopt.threads = 1;
    ConvergenceTable t;
    t.experiment = "riesz-mean";
    describe_disk(t, disk, h_list);
    t.rows = parallel_map(h_list.size(), options.threads, [&](std::size_t i) {
        const double h = h_list[i];
        const double bh = disk.b * h;
        const SpectrumResult s = disk_spectrum(at_h(disk, h), bh, dopt);
        auto certs = s.certificates;
        certs.push_back(tail);
        return make_row(h, riesz_mean(s, bh) / std::sqrt(h), rhs, std::move(certs));
    });
    flag_error_trend(t, options.noise_floor * std::abs(rhs));
    return t;
}

BulkSweepTables verify_theorem2(const DiskSpec& disk, double a, const std::vector<double>& h_list,
                               const Mu1Table& table, const SweepOptions& options) {
    check_h_list(h_list);
    if (disk.exterior)
        throw PreconditionError("the bulk term needs a bounded domain; exterior disks are not supported");
    at_h(disk, h_list.front()).validate();
    const BoundaryCurve circle = curve_from_parametrization(circle_points(disk.R, options.curve_points));
    const BulkBoundarySplit split = bulk_boundary_split(circle, disk.b, a, table);
    const Certificate tail = xi_tail_certificate(edge_moment_detailed(1.0, table));

    DiskSolveOptions dopt = options.disk;
    dopt.threads = 1;
    struct Pair {
        ConvergenceRow diff, full;
    };
    const auto rows = parallel_map(h_list.size(), options.threads, [&](std::size_t i) {
        const double h = h_list[i];
        const double bh = disk.b * h;
        const double shift = bh + a * std::pow(h, 1.5);
        const SpectrumResult s = disk_spectrum(at_h(disk, h), std::max(bh, shift), dopt);
        auto certs = s.certificates;
        certs.push_back(tail);
        const double shifted = riesz_mean(s, shift) / std::sqrt(h);
        const double base = riesz_mean(s, bh) / std::sqrt(h);
        return Pair{make_row(h, shifted - base, split.bulk_term, certs),
                    make_row(h, shifted, split.boundary_term + split.bulk_term, certs)};
    });
    BulkSweepTables out;
    out.differenced.experiment = "bulk-differenced";
    out.undifferenced.experiment = "bulk-undifferenced";
    for (auto* t : {&out.differenced, &out.undifferenced}) {
        describe_disk(*t, disk, h_list);
        t->metadata["a"] = sci(a);
    }
    for (const Pair& p : rows) {
        out.differenced.rows.push_back(p.diff);
        out.undifferenced.rows.push_back(p.full);
    }
    const double floor_d = options.noise_floor * std::max(std::abs(split.bulk_term), 1.0);
    flag_error_trend(out.differenced, floor_d);
    flag_error_trend(out.undifferenced, options.noise_floor * std::abs(split.boundary_term + split.bulk_term));
    return out;
}

ConvergenceTable verify_counting(const DiskSpec& disk, double lambda_frac, const std::vector<double>& h_list,
                                 const Mu1Table& table, const SweepOptions& options) {
    if (!(lambda_frac > 0.0) || !(lambda_frac < 1.0))
        throw DomainError("counting needs lambda strictly between 0 and b (lambda_frac = " + sci(lambda_frac) + ")");
    check_h_list(h_list);
    at_h(disk, h_list.front()).validate();
    const BoundaryCurve circle = curve_from_parametrization(circle_points(disk.R, options.curve_points));
    const double theta0 = table.minimum().second;
    const double rhs = counting_coefficient(circle, FieldProfile::constant(disk.b, theta0), lambda_frac * disk.b,
                                            table, options.threads);
    DiskSolveOptions dopt = options.disk;
    dopt.threads = 1;
    ConvergenceTable t;
    t.experiment = "counting";
    describe_disk(t, disk, h_list);
    t.metadata["lambda_frac"] = sci(lambda_frac);
    t.rows = parallel_map(h_list.size(), options.threads, [&](std::size_t i) {
        const double h = h_list[i];
        const double level = lambda_frac * disk.b * h;
        // solve slightly above the level so that eigenvalues just below it are not flagged away
        const SpectrumResult s = disk_spectrum(at_h(disk, h), level * (1.0 + 1e-6), dopt);
        auto certs = s.certificates;
        certs.push_back({"level-set", "coefficient from the sublevel set of mu_1 at " + sci(lambda_frac), rhs, true});
        return make_row(h, std::sqrt(h) * static_cast<double>(counting_function(s, level)), rhs, std::move(certs));
    });
    flag_error_trend(t, options.noise_floor * (rhs != 0.0 ? std::abs(rhs) : 1.0));
    return t;
}

void write_csv(const ConvergenceTable& table, std::ostream& out) {
    out << "h,lhs,rhs,ratio,abs_err\n";
    for (const auto& r : table.rows)
        out << sci(r.h) << ',' << sci(r.lhs) << ',' << sci(r.rhs) << ',' << sci(r.ratio) << ','
            << sci(r.abs_err) << '\n';
}

ConvergenceTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "h,lhs,rhs,ratio,abs_err") throw ConfigError("unexpected CSV header: " + line);
    ConvergenceTable t;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cell.size())
                throw ConfigError("CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            v.push_back(x);
        }
        if (v.size() != 5) throw ConfigError("CSV line " + std::to_string(lineno) + ": expected 5 columns");
        ConvergenceRow r;
        r.h = v[0];
        r.lhs = v[1];
        r.rhs = v[2];
        r.ratio = v[3];
        r.abs_err = v[4];
        t.rows.push_back(r);
    }
    t.validate(false);
    return t;
}

std::string format_report(const ConvergenceTable& table) {
    std::ostringstream os;
    os << "experiment: " << (table.experiment.empty() ? "(unnamed)" : table.experiment) << '\n';
    for (const auto& [k, v] : table.metadata) os << "  " << k << " = " << v << '\n';
    os << "  h                  lhs                rhs                ratio              abs_err\n";
    for (const auto& r : table.rows)
        os << "  " << sci(r.h) << "  " << sci(r.lhs) << "  " << sci(r.rhs) << "  " << sci(r.ratio) << "  "
           << sci(r.abs_err) << '\n';
    if (table.rows.size() >= 3) {
        const ExtrapolationResult e = extrapolate(table);
        os << "extrapolated limit: " << sci(e.limit_estimate);
        if (e.rate_available)
            os << " (rate " << sci(e.fitted_rate) << ", residual " << sci(e.residual) << ")\n";
        else
            os << " (rate unavailable, last row used; residual " << sci(e.residual) << ")\n";
        const double rhs = table.rows.back().rhs;
        if (rhs != 0.0) os << "limit / rhs: " << sci(e.limit_estimate / rhs) << '\n';
    }
    for (const auto& f : table.flags) os << "flag: " << f << '\n';
    return os.str();
}

namespace {

using Cmat = Eigen::MatrixXcd;

Cmat random_gaussian(std::mt19937_64& rng, int n, int m) {
    std::normal_distribution<double> g;
    Cmat a(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = {g(rng), g(rng)};
    return a;
}

Cmat random_unitary(std::mt19937_64& rng, int n) {
    Eigen::HouseholderQR<Cmat> qr(random_gaussian(rng, n, n));
    return qr.householderQ() * Cmat::Identity(n, n);
}

nlohmann::json matrix_json(const Cmat& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

}  // namespace

VariationalReport variational_check(std::uint64_t seed, std::size_t trials) {
    if (trials == 0) throw ConfigError("variational check needs at least one trial");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size_dist(2, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    VariationalReport rep;
    rep.trials = trials;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const int n = size_dist(rng);
        const Cmat g = random_gaussian(rng, n, n);
        const Cmat H = 0.5 * (g + g.adjoint());
        Eigen::SelfAdjointEigenSolver<Cmat> es(H);
        const Eigen::VectorXd ev = es.eigenvalues();
        double negative_sum = 0.0, scale = 1.0;
        int n_neg = 0;
        for (int i = 0; i < n; ++i) {
            scale += std::abs(ev[i]);
            if (ev[i] < 0.0) {
                negative_sum += ev[i];
                ++n_neg;
            }
        }
        const double tol = 1e-12 * scale;

        const auto fail = [&](const std::string& check, double value, double bound, const Cmat* gamma) {
            ++rep.violations;
            rep.pass = false;
            if (rep.counterexample) return;
            nlohmann::json j{{"seed", seed}, {"trial", trial}, {"size", n}, {"check", check},
                             {"value", value}, {"bound", bound}, {"H", matrix_json(H)}};
            if (gamma) j["gamma"] = matrix_json(*gamma);
            rep.counterexample = j.dump();
        };

        // random contraction gamma = U diag(d) U*, 0 <= d <= 1
        const Cmat U = random_unitary(rng, n);
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d[i] = unit(rng);
        const Cmat gamma = U * d.cast<std::complex<double>>().asDiagonal() * U.adjoint();
        const double tr_random = (H * gamma).trace().real();
        ++rep.checks;
        if (tr_random < negative_sum - tol) fail("contraction", tr_random, negative_sum, &gamma);

        // negative spectral projector saturates the bound
        const Cmat V = es.eigenvectors();
        const Cmat P = V.leftCols(n_neg) * V.leftCols(n_neg).adjoint();
        const double tr_proj = (H * P).trace().real();
        ++rep.checks;
        if (std::abs(tr_proj - negative_sum) > tol) fail("spectral-projector", tr_proj, negative_sum, &P);

        // gamma = 0
        ++rep.checks;
        if (0.0 < negative_sum - tol) fail("zero", 0.0, negative_sum, nullptr);

        // orthonormal families: sum <v, H v> never beats the sum of negative eigenvalues
        std::uniform_int_distribution<int> k_dist(1, n);
        const int k = k_dist(rng);
        const Cmat family = random_unitary(rng, n).leftCols(k);
        const double family_sum = (family.adjoint() * H * family).trace().real();
        double lowest_k = 0.0;
        for (int i = 0; i < k; ++i) lowest_k += ev[i];
        ++rep.checks;
        if (family_sum < negative_sum - tol) {
            const Cmat fam = family;
            fail("orthonormal-family", family_sum, negative_sum, &fam);
        }
        ++rep.checks;
        if (family_sum < lowest_k - tol) {
            const Cmat fam = family;
            fail("orthonormal-family-ky-fan", family_sum, lowest_k, &fam);
        }
    }
    return rep;
}

}  // namespace magspec

#pragma once

// h-sweeps that compare disk spectra with the boundary/bulk coefficients, power-law
// extrapolation of the sweeps, CSV round-tripping, and the finite-matrix variational
// property checks.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "magspec/degennes.hpp"
#include "magspec/models2d.hpp"

namespace magspec {

struct ConvergenceRow {
    double h = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;    // lhs / rhs, NaN when rhs == 0
    double abs_err = 0.0;  // |lhs - rhs|
    std::vector<Certificate> certificates;
};

struct ConvergenceTable {
    std::string experiment;
    std::vector<ConvergenceRow> rows;  // h strictly decreasing
    std::map<std::string, std::string> metadata;
    std::vector<std::string> flags;    // non-fatal findings (e.g. non-monotone error)

    // Throws ConfigError unless h decreases strictly; with `require_certificates`, also
    // when a row carries none.
    void validate(bool require_certificates = true) const;
};

ConvergenceRow make_row(double h, double lhs, double rhs, std::vector<Certificate> certificates = {});

// Flags rows whose |lhs - rhs| grows by more than `noise_floor` from the previous row.
void flag_error_trend(ConvergenceTable& table, double noise_floor);

struct ExtrapolationResult {
    double limit_estimate = 0.0;
    double fitted_rate = 0.0;  // p in lhs = L + C h^p; NaN when unavailable
    double coefficient = 0.0;  // C
    double residual = 0.0;     // RMS misfit of the fitted model over all rows
    bool rate_available = false;
};

// Fits lhs(h) = L + C h^p through the last three rows. When the fit is ill-conditioned
// (constant or non-monotone data, no rate in (0.05, 8)), returns the last lhs with
// the rate marked unavailable. Needs at least 3 rows.
ExtrapolationResult extrapolate(const ConvergenceTable& table);

std::vector<double> default_h_list();

struct SweepOptions {
    unsigned threads = 1;
    DiskSolveOptions disk;
    std::size_t curve_points = 256;
    double noise_floor = 1e-3;  // relative to |rhs| (absolute when rhs == 0)
};

// lhs = h^{-1/2} sum [e_j - bh]_-, rhs = R b^{3/2} m(1) (boundary coefficient of the circle).
ConvergenceTable verify_theorem1(const DiskSpec& disk, const std::vector<double>& h_list,
                                 const Mu1Table& table, const SweepOptions& options = {});

struct BulkSweepTables {
    ConvergenceTable differenced;    // h^{-1/2}(sum[e - bh - a h^{3/2}]_- - sum[e - bh]_-) vs bulk term
    ConvergenceTable undifferenced;  // h^{-1/2} sum[e - bh - a h^{3/2}]_- vs boundary + bulk
};

BulkSweepTables verify_theorem2(const DiskSpec& disk, double a, const std::vector<double>& h_list,
                               const Mu1Table& table, const SweepOptions& options = {});

// lhs = h^{1/2} N(lambda_frac b h), rhs = counting coefficient of the circle at
// lambda = lambda_frac b. lambda_frac must lie in (0, 1).
ConvergenceTable verify_counting(const DiskSpec& disk, double lambda_frac,
                                 const std::vector<double>& h_list, const Mu1Table& table,
                                 const SweepOptions& options = {});

// CSV with header h,lhs,rhs,ratio,abs_err; 12 significant digits; LF line endings.
void write_csv(const ConvergenceTable& table, std::ostream& out);
ConvergenceTable read_csv(std::istream& in);

// Plain-text summary of a table and its extrapolation.
std::string format_report(const ConvergenceTable& table);

struct VariationalReport {
    bool pass = true;
    std::size_t trials = 0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::optional<std::string> counterexample;  // JSON of the first violation
};

// Random Hermitian H (sizes 2-12) against random contractions 0 <= gamma <= 1, the
// negative spectral projector, gamma = 0, and random orthonormal families.
VariationalReport variational_check(std::uint64_t seed, std::size_t trials);

}  // namespace magspec

#pragma once

// Spectra of the two-dimensional Neumann magnetic Laplacian -(h grad - i A)^2 with a
// constant field b on model domains: a half-cylinder of height h^{1/2} T (separation
// of variables into the truncated 1D family), and the disk and disk exterior
// (angular-momentum sectors with a finite-volume radial form).

#include <cstddef>
#include <string>
#include <vector>

#include "magspec/point.hpp"

namespace magspec {

// A truncation or resolution argument backing a computed quantity.
struct Certificate {
    std::string kind;    // e.g. "n-cutoff", "m-cutoff", "resolution"
    std::string detail;  // human-readable evidence
    double value = 0.0;  // the bound or change it certifies
    bool ok = true;
};

struct CylinderSpec {
    double S = 1.0;       // circumference
    double T = 1.0;       // height in units of h^{1/2}
    double b = 1.0;
    double lambda = 0.05;
    double h = 0.01;

    void validate() const;
};

struct CylinderEnergy {
    double energy = 0.0;
    long n_min = 0;             // included Fourier modes
    long n_max = 0;
    std::size_t max_band_count = 0;  // largest number of bands j below 1 + lambda at one n
    std::vector<Certificate> certificates;
};

// sum_j [hb(1 + lambda) - e_j]_+ over the spectrum of the cylinder
// [0, S] x (0, h^{1/2} T) (periodic in s, Neumann at the bottom, Dirichlet at the top):
//   hb sum_{n, j} [1 + lambda - mu_j(2 pi n h^{1/2} b^{-1/2} / S; T sqrt(b))]_+,
// with the 1D problems solved on `n_points` cells. The height T sqrt(b) is the top
// edge h^{1/2} T in units of the magnetic length sqrt(h/b).
CylinderEnergy cylinder_energy_exact(const CylinderSpec& spec, std::size_t n_points = 4000,
                                     unsigned threads = 1);

// Upper bound (1 + lambda) h b (S T / (2 pi sqrt(h)) + 1).
double cylinder_energy_bound(const CylinderSpec& spec);

struct DiskSpec {
    double R = 1.0;
    double b = 1.0;
    double h = 0.01;
    int m_margin = 5;
    std::size_t n_radial = 0;  // 0: max(400, 80 R / sqrt(h/b))
    bool exterior = false;
    double R_out = 0.0;        // exterior only; 0: R + 12 sqrt(h/b)

    void validate() const;
    double magnetic_length() const;  // sqrt(h/b)
    std::size_t radial_points() const;
    double outer_radius() const;     // R_out for the exterior, R otherwise
};

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending, strictly below threshold
    std::vector<int> sector_labels;   // angular momentum of each eigenvalue
    std::vector<double> flagged;      // within 1e-10 hb of the threshold, excluded
    double threshold = 0.0;
    double h = 0.0;
    double b = 0.0;
    int m_min = 0;                    // solved sectors, margin included
    int m_max = 0;
    std::vector<Certificate> certificates;
};

struct DiskSolveOptions {
    bool check_resolution = true;
    double resolution_tolerance = 1e-4;  // in units of hb
    unsigned threads = 1;
};

// Interior thresholds may exceed hb by at most this fraction.
inline constexpr double kMaxThresholdExcess = 0.5;

// All eigenvalues below `threshold`, symmetric gauge A = (b/2)(-x2, x1).
SpectrumResult disk_spectrum(const DiskSpec& spec, double threshold,
                             const DiskSolveOptions& options = {});

// Lowest eigenvalue of one angular sector on the given radial grid.
double disk_sector_lowest(const DiskSpec& spec, int m, std::size_t n_radial);

// Sum of [e_j - shift]_- = max(shift - e_j, 0), ascending order. Throws
// PreconditionError when shift exceeds the spectrum threshold.
double riesz_mean(const SpectrumResult& spectrum, double shift);

// Number of eigenvalues strictly below `level` (level <= threshold).
std::size_t counting_function(const SpectrumResult& spectrum, double level);

// Direct two-dimensional discretization of the disk of radius R centred at `center`
// on a polar cell grid, with magnetic phases integrated along each link for the
// potential (b/2)(-(x2 - g2), x1 - g1), g = gauge_origin. Dense Hermitian solve; meant
// for small grids. Returns the `count` lowest eigenvalues.
struct PeierlsDiskSpec {
    double R = 1.0;
    double b = 1.0;
    double h = 0.1;
    Point2 center{};
    Point2 gauge_origin{};
    std::size_t n_r = 20;
    std::size_t n_theta = 40;
};

std::vector<double> disk_spectrum_peierls(const PeierlsDiskSpec& spec, std::size_t count);

}  // namespace magspec

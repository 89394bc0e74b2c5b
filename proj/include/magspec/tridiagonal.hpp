#pragma once

#include <cstddef>
#include <vector>

namespace magspec {

// Real symmetric tridiagonal matrix: diag has n entries, off has n-1 (off[i] couples i and i+1).
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }
    void validate() const;

    // Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
    std::size_t count_below(double x) const;

    // Gershgorin enclosure [lo, hi] of the spectrum.
    double gershgorin_lower() const;
    double gershgorin_upper() const;
};

struct TridiagonalEigenpair {
    double value = 0.0;
    std::vector<double> vector;  // unit Euclidean norm
};

// k-th smallest eigenvalue (k = 0 is the lowest) by bisection on the Sturm count.
double tridiagonal_eigenvalue(const SymTridiagonal& t, std::size_t k);

// The `count` lowest eigenvalues, ascending.
std::vector<double> tridiagonal_lowest(const SymTridiagonal& t, std::size_t count);

// All eigenvalues strictly below `threshold`, ascending.
std::vector<double> tridiagonal_below(const SymTridiagonal& t, double threshold);

// The `count` lowest eigenpairs. Vectors come from inverse iteration and are
// re-orthogonalized against the previously computed ones.
std::vector<TridiagonalEigenpair> tridiagonal_lowest_pairs(const SymTridiagonal& t,
                                                           std::size_t count);

}  // namespace magspec

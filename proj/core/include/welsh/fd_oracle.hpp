#pragma once

// Finite-difference reference for the truncated radial problem: symmetric
// tridiagonal matrix with Dirichlet ends, delta terms folded into the
// diagonal at the nearest node. Eigenvalues by Sturm-sequence bisection.

#include <cstddef>
#include <vector>

#include "welsh/radial.hpp"
#include "welsh/spectral.hpp"

namespace welsh {

struct SnappedCircle {
    double radius;
    std::size_t node;
};

struct FDGrid {
    std::size_t n = 0;  ///< interior nodes
    double h = 0.0;     ///< spacing, (n + 1) h = r_max - r_min
    double r_min = 0.0;
    std::vector<double> diagonal;
    double off_diagonal = 0.0; ///< -1/h^2
    std::vector<SnappedCircle> circles;

    [[nodiscard]] double node(std::size_t i) const noexcept { return r_min + static_cast<double>(i + 1) * h; }
};

FDGrid build_fd_grid(const RadialParams& params, const TruncatedDomain& domain, std::size_t n);

/// Number of matrix eigenvalues strictly below x.
std::size_t fd_count_below(const FDGrid& grid, double x);

/// Lowest k eigenvalues (not filtered against E0). Requires n >= 100 and 1 <= k <= n.
EigenResult fd_spectrum(const RadialParams& params, const TruncatedDomain& domain, std::size_t n, std::size_t k);

/// Normalised eigenvector of eigenvalue `index` (0-based) by inverse
/// iteration, including the zero boundary values at r_min and r_max.
SampledFunction fd_eigenvector(const FDGrid& grid, std::size_t index);

} // namespace welsh

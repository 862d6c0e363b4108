#pragma once

// Eigenvalues of the truncated radial problem below the threshold E0:
// Pruefer shooting with zero counting, the quadratic form of the shifted
// operator, and assembly over angular-momentum channels.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "welsh/lattice_threshold.hpp"
#include "welsh/radial.hpp"

namespace welsh {

/// [r_min, r_max] with the regular (Frobenius) start at r_min and a
/// Dirichlet condition at r_max.
struct TruncatedDomain {
    double r_min = 1e-3;
    double r_max = 60.0;

    /// Throws Errc::invalid_input unless 0 < r_min < d/2 < r_max.
    void validate(const LatticeParams& lattice) const;
};

enum class Method { shooting, fd_oracle };

std::string to_string(Method m);

struct EigenResult {
    std::vector<double> eigenvalues; ///< ascending
    std::vector<double> widths;      ///< final bracket width per eigenvalue
    TruncatedDomain domain;
    Method method = Method::shooting;
    double threshold = 0.0; ///< E0 of the lattice

    [[nodiscard]] std::size_t count() const noexcept { return eigenvalues.size(); }
};

/// Margin below E0 used when counting "eigenvalues below the threshold".
inline constexpr double kThresholdMargin = 1e-6;

/// Regular solution on the domain at energy E.
RadialSolution integrate_regular(const RadialParams& params, double energy, const TruncatedDomain& domain,
                                 double rel_tol = 1e-10);

/// Zeros of the regular solution in (r_min, r_max), i.e. the number of
/// Dirichlet eigenvalues of the truncated problem below E. Requires E < E0.
std::size_t oscillation_count(const RadialParams& params, double energy, const TruncatedDomain& domain);

/// Same count without the E < E0 precondition (used for bracketing).
std::size_t zero_count(const RadialParams& params, double energy, const TruncatedDomain& domain);

/// An energy with no eigenvalue below it on the domain.
double spectral_floor(const RadialParams& params, const TruncatedDomain& domain);

/// Every eigenvalue in [e_lo, min(e_hi, E0 - margin)) by bisection on the
/// count, each to a bracket of width <= tol. Requires e_lo < e_hi <= E0.
EigenResult find_eigenvalues(const RadialParams& params, const TruncatedDomain& domain, double e_lo, double e_hi,
                             double tol = 1e-9);

/// Convenience overload: window [spectral_floor, E0 - margin).
EigenResult find_eigenvalues(const RadialParams& params, const TruncatedDomain& domain, double tol = 1e-9);

/// f sampled on increasing radii, interpreted as piecewise linear.
struct SampledFunction {
    std::vector<double> r;
    std::vector<double> f;
};

/// q[f] = int f'^2 + c int f^2/r^2 + beta sum f(r_n)^2 - E0 int f^2.
/// All integrals are exact for the piecewise-linear interpolant. Throws
/// Errc::boundary_violation unless f vanishes at both ends.
double quadratic_form(const RadialParams& params, const SampledFunction& f);

struct SpectrumEntry {
    double energy;
    int l;
};

struct AssembledSpectrum {
    std::map<int, EigenResult> channels;
    std::vector<SpectrumEntry> merged; ///< ascending in energy
};

/// find_eigenvalues in every channel of l_set. For alpha in (0, 1/2) a
/// nonempty channel with c(alpha, l) >= 0 raises Errc::consistency.
AssembledSpectrum assemble_spectrum(double alpha, const LatticeParams& lattice, const std::set<int>& l_set,
                                    const TruncatedDomain& domain, double e_lo, double e_hi, double tol = 1e-9);

} // namespace welsh

#pragma once

// Radial half-line problem -y'' + (c / r^2) y = E y with the jump
// y'(r_n+) - y'(r_n-) = beta y(r_n) on the circles r_n = d(n + 1/2).

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "welsh/lattice_threshold.hpp"

namespace welsh {

/// c = -1/4 + (l + alpha)^2. Throws Errc::invalid_input unless alpha is in [0, 1).
double effective_coupling(double alpha, int l);

struct RadialParams {
    LatticeParams lattice;
    double alpha = 0.0;
    int l = 0;

    void validate() const;
    [[nodiscard]] double coupling() const { return effective_coupling(alpha, l); }
    /// Exponent of the regular solution r^{1/2 + |l + alpha|} at the origin.
    [[nodiscard]] double frobenius_exponent() const { return 0.5 + std::abs(l + alpha); }
};

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    /// Extra radii the stepper must land on (need not be sorted).
    std::vector<double> landmarks;
};

/// One stored point. Away from circles the minus and plus states coincide;
/// at a circle they are the states before and after the derivative jump.
/// True values are the stored ones times exp(log_scale).
struct RadialSample {
    double r = 0.0;
    double y_minus = 0.0;
    double dy_minus = 0.0;
    double y_plus = 0.0;
    double dy_plus = 0.0;
    double log_scale = 0.0;
    bool at_circle = false;
};

struct RadialSolution {
    RadialParams params;
    double energy = 0.0;
    std::vector<RadialSample> samples;
    std::vector<std::size_t> circle_indices; ///< indices into samples
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;

    [[nodiscard]] const RadialSample& back() const { return samples.back(); }
};

/// Adaptive 8th-order Runge-Kutta-Fehlberg integration from r_start to r_end.
/// (y0, dy0) is the state just after any circle located at r_start. Every
/// circle in (r_start, r_end] and every landmark is a sample point. The
/// state is renormalised when its norm leaves [1e-50, 1e50].
RadialSolution integrate_radial(const RadialParams& params, double energy, double r_start, double r_end,
                                double y0, double dy0, const IntegratorOptions& options = {});

/// Sample index with the largest radius <= r (the post-jump sample at a circle).
std::size_t sample_at_or_before(const RadialSolution& solution, double r);

} // namespace welsh

namespace welsh {

struct StartState {
    double y;
    double dy;
};

/// Leading Frobenius term of the regular solution, y = r^p, y' = p r^{p-1}
/// with p = 1/2 + |l + alpha|.
StartState regular_start(const RadialParams& params, double r);

} // namespace welsh

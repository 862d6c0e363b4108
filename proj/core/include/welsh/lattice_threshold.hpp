#pragma once

// One-dimensional Kronig-Penney comparison problem: equidistant delta
// interactions of strength beta at x_n = d(n + 1/2). Provides the spectral
// threshold E0, the positive d-periodic band-edge solution u, its period
// means and the critical centrifugal coefficient derived from them.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace welsh {

/// Lattice of concentric circles (or points on the line) at d(n + 1/2).
struct LatticeParams {
    double d = 1.0;    ///< spacing, > 0
    double beta = 0.0; ///< coupling strength; 0 is the free case

    /// Throws Errc::invalid_input unless d is positive and finite and beta finite.
    void validate() const;

    [[nodiscard]] double circle_radius(std::size_t n) const noexcept { return d * (static_cast<double>(n) + 0.5); }
};

enum class Branch { attractive, repulsive, free };

std::string to_string(Branch b);

/// Threshold of the comparison operator. E0 = -rate^2 on the attractive
/// branch, +rate^2 on the repulsive one, 0 for beta = 0.
///
/// Stored in extended precision: at large |beta| d the discriminant is steep
/// at E0 (slope ~ sinh(kappa d) / kappa), and a double-rounded E0 alone moves
/// it by more than 1e-10.
struct ThresholdData {
    Branch branch = Branch::free;
    long double energy = 0.0L;
    long double rate = 0.0L;

    [[nodiscard]] double E0() const noexcept { return static_cast<double>(energy); }
};

ThresholdData solve_threshold(const LatticeParams& params);

/// |coth(kd/2) - 2k/|beta|| (attractive) or |cot(kd/2) - 2k/beta|
/// (repulsive); 0 on the free branch.
long double threshold_residual(const LatticeParams& params, const ThresholdData& threshold);

/// Kronig-Penney discriminant Delta(E); the band bottom satisfies Delta = 1.
long double kp_discriminant(const LatticeParams& params, long double energy);

enum class Side { left, right };

/// Positive d-periodic solution of -u'' = E0 u with the delta jump
/// u'(x_n+) - u'(x_n-) = beta u(x_n).
///
/// Attractive branch: the exponential form
///   u(x) = exp(-k(x - d/2)) + exp(kd) exp(k(x - d/2)),  0 < x < d/2,
/// mirrored about d/2. Repulsive branch: cos(k x) on [0, d/2], mirrored.
/// Free branch: u = 1. An overall positive factor can be applied with scaled().
class PeriodicSolution {
public:
    PeriodicSolution(const LatticeParams& params, const ThresholdData& threshold);

    [[nodiscard]] const LatticeParams& params() const noexcept { return params_; }
    [[nodiscard]] const ThresholdData& threshold() const noexcept { return threshold_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }

    [[nodiscard]] double value(double x) const;
    /// One-sided derivative; the side only matters exactly on a lattice point.
    [[nodiscard]] double derivative(double x, Side side = Side::right) const;
    /// log(u(x) / u(0)), evaluated without cancellation for small rates.
    [[nodiscard]] double log_ratio(double x) const;
    /// Integral of u^-2 over [0, x], in closed form.
    [[nodiscard]] double inverse_square_integral(double x) const;

    [[nodiscard]] PeriodicSolution scaled(double factor) const;

private:
    struct Local {
        double w;    // distance from the nearest cell edge (0 or d)
        double sign; // +1 on the left half of the cell, -1 on the right half
        double cell; // integer index of the cell
    };
    [[nodiscard]] Local locate(double x, Side side) const;
    [[nodiscard]] double shape(double w) const;       // u on the left half, unscaled
    [[nodiscard]] double shape_slope(double w) const; // d/dw of shape
    [[nodiscard]] double half_inverse_square(double w) const;

    LatticeParams params_;
    ThresholdData threshold_;
    double rate_ = 0.0;
    double scale_ = 1.0;
};

enum class MeanMode { closed_form, quadrature };

struct MeanSquares {
    double D1 = 0.0; ///< period mean of u^2
    double D2 = 0.0; ///< period mean of u^-2
};

MeanSquares mean_squares(const PeriodicSolution& solution, MeanMode mode);

/// D1 D2 - 1 >= 0, computed from log(u/u(0)) so it stays accurate when u is
/// nearly constant (weak coupling).
double schwarz_excess(const PeriodicSolution& solution);

struct CriticalData {
    ThresholdData threshold;
    double D1 = 0.0;
    double D2 = 0.0;
    double excess = 0.0; ///< D1 D2 - 1
    double c_crit = 0.0;
    double alpha_crit = 0.0;
};

CriticalData critical_coupling(const LatticeParams& params);

/// Strong attractive coupling estimate -(d^2/8) exp(-|beta| d / 2).
double strong_coupling_estimate(const LatticeParams& params);

/// Leading strong-coupling asymptote of c_crit obtained from the closed-form
/// means, -((beta d)^2 / 8) exp(-|beta| d / 2). Dimensionless, unlike the
/// estimate above.
double strong_coupling_asymptote(const LatticeParams& params);

struct SweepRow {
    double beta = 0.0;
    bool ok = false;
    std::string error; ///< empty when ok
    CriticalData data;
};

std::vector<SweepRow> sweep_alpha_crit(std::span<const double> beta_values, double d);

} // namespace welsh

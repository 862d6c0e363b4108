#pragma once

// Phase descriptions of radial solutions: the ordinary Pruefer angle theta,
// the generalised angle gamma relative to the threshold pair (u, v), the
// Kepler phase phi and its period average. Also the averaged coefficients
// A, B whose product decides whether the threshold phase stays bounded.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "welsh/lattice_threshold.hpp"
#include "welsh/radial.hpp"

namespace welsh {

enum class PhaseKind { prufer, generalized, kepler, averaged };

struct PhaseJump {
    double r;
    double before;
    double after;
};

/// Samples of a continuously lifted angle. For kind prufer a circle
/// contributes two consecutive samples with equal r (before/after the jump),
/// also listed in jumps. The other kinds are continuous across circles.
struct PhaseTrajectory {
    PhaseKind kind = PhaseKind::prufer;
    std::vector<double> r;
    std::vector<double> value;
    std::vector<PhaseJump> jumps;

    [[nodiscard]] std::size_t size() const noexcept { return r.size(); }
    /// Linear interpolation; for duplicated radii the later sample wins.
    [[nodiscard]] double at(double radius) const;
};

/// y = rho cos(theta), y' = rho sin(theta).
PhaseTrajectory prufer_trajectory(const RadialSolution& solution);

/// Number of passages of theta through pi/2 + k pi, i.e. zeros of y.
std::size_t zero_crossings(const PhaseTrajectory& prufer);

/// Sign changes of y along the stored samples.
std::size_t sign_changes(const RadialSolution& solution);

/// Threshold solutions u (periodic, positive) and v = u * int_{r0}^{r} u^-2,
/// normalised to the Wronskian u v' - u' v = 1.
class ReferencePair {
public:
    explicit ReferencePair(PeriodicSolution u, double r0 = 0.0);

    [[nodiscard]] const PeriodicSolution& periodic() const noexcept { return u_; }
    [[nodiscard]] double r0() const noexcept { return r0_; }

    [[nodiscard]] double u(double r) const { return u_.value(r); }
    [[nodiscard]] double du(double r, Side side = Side::right) const { return u_.derivative(r, side); }
    [[nodiscard]] double v(double r) const;
    [[nodiscard]] double dv(double r, Side side = Side::right) const;
    [[nodiscard]] double wronskian(double r, Side side = Side::right) const;

private:
    PeriodicSolution u_;
    double r0_;
    double g0_;
};

ReferencePair second_solution(const PeriodicSolution& u, double r0 = 0.0);

/// gamma with (y, y') = [[u, v], [u', v']] a (sin gamma, -cos gamma).
PhaseTrajectory generalized_trajectory(const RadialSolution& solution, const ReferencePair& pair);

/// phi with tan(phi) = (tan(gamma) - v/u) / r, lifted continuously.
PhaseTrajectory kepler_phase(const RadialSolution& solution, const ReferencePair& pair);

/// Right-hand side of the Kepler phase equation,
/// (1/r)(-sin phi cos phi + c u^2 sin^2 phi - u^-2 cos^2 phi), off the circles.
double kepler_rhs(double c, const PeriodicSolution& u, double r, double phi);

/// Running mean (1/d) int_r^{r+d} phi over the stored samples, reported for
/// r0 + d <= r <= r_last - d where r0 is the first sample.
PhaseTrajectory averaged_phase(const PhaseTrajectory& kepler, double d);

/// Single evaluation of the running mean; requires [r, r + d] to be covered.
double averaged_phase_at(const PhaseTrajectory& kepler, double r, double d);

struct AveragedCoefficients {
    double A = 0.0;       ///< period mean of -1/u^2
    double B = 0.0;       ///< period mean of c u^2
    double four_ab = 0.0; ///< 4 A B
    double ratio = 0.0;   ///< c / c_crit
};

AveragedCoefficients coefficient_averages(const RadialParams& params, const PeriodicSolution& u);

enum class SpectrumClass { infinite_accumulating, at_most_finite };

std::string to_string(SpectrumClass kind);

struct Classification {
    SpectrumClass kind = SpectrumClass::at_most_finite;
    double alpha = 0.0;
    double four_ab = 0.0;
    double ratio = 0.0;
    double alpha_crit = 0.0;
    double c = 0.0;
    double c_crit = 0.0;
};

/// Channel l = 0, alpha in (0, 1/2]. Infinite accumulating spectrum iff
/// 4AB > 1, equivalently alpha < alpha_crit; the equality case is finite.
Classification classify_discrete_spectrum(double alpha, const LatticeParams& lattice);

struct GrowthRow {
    double r_max = 0.0;
    double wound_phase = 0.0;   ///< |theta(r_max) - theta(r_start)|
    double log_amplitude = 0.0; ///< log rho(r_max)
    double phase_slope = 0.0;   ///< d(wound) / d(log r) since the previous row
    double amplitude_slope = 0.0;
};

struct GrowthReport {
    double energy = 0.0;
    double r_start = 0.0;
    std::vector<GrowthRow> rows;
};

/// Integrates the regular solution from r_start (default 1e-3 d) at the
/// given energy and reports the Pruefer winding at each requested radius.
GrowthReport phase_growth(const RadialParams& params, double energy, std::span<const double> r_max_list,
                          double r_start = 0.0);

} // namespace welsh

#include "welsh/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "welsh/error.hpp"

namespace welsh {

namespace {

constexpr double kPi = std::numbers::pi;

/// Continues `previous` to the representative of `angle` closest to it.
double lift(double previous, double angle)
{
    double delta = std::remainder(angle - previous, 2 * kPi);
    return previous + delta;
}

double checked_atan2(double y, double x)
{
    if (!(std::isfinite(x) && std::isfinite(y)) || (x == 0.0 && y == 0.0))
        throw Error(Errc::corrupt_solution, "degenerate state (y, y') = (0, 0) in phase computation");
    return std::atan2(y, x);
}

std::size_t lower_sample(const PhaseTrajectory& t, double radius)
{
    auto it = std::upper_bound(t.r.begin(), t.r.end(), radius);
    if (it == t.r.begin() || radius > t.r.back())
        throw Error(Errc::domain_error, "phase trajectory does not cover the requested radius");
    return static_cast<std::size_t>(std::distance(t.r.begin(), it) - 1);
}

} // namespace

double PhaseTrajectory::at(double radius) const
{
    const std::size_t i = lower_sample(*this, radius);
    if (i + 1 >= r.size() || r[i] == radius) return value[i];
    const double t = (radius - r[i]) / (r[i + 1] - r[i]);
    return value[i] + t * (value[i + 1] - value[i]);
}

PhaseTrajectory prufer_trajectory(const RadialSolution& solution)
{
    PhaseTrajectory out;
    out.kind = PhaseKind::prufer;
    if (solution.samples.empty()) return out;
    out.r.reserve(solution.samples.size() + solution.circle_indices.size());
    out.value.reserve(out.r.capacity());

    double theta = checked_atan2(solution.samples.front().dy_plus, solution.samples.front().y_plus);
    out.r.push_back(solution.samples.front().r);
    out.value.push_back(theta);
    for (std::size_t i = 1; i < solution.samples.size(); ++i) {
        const RadialSample& s = solution.samples[i];
        theta = lift(theta, checked_atan2(s.dy_minus, s.y_minus));
        out.r.push_back(s.r);
        out.value.push_back(theta);
        if (s.at_circle) {
            // y is unchanged by the jump, so the new angle stays in the same
            // half-plane and the branch with |delta| < pi is the right one.
            const double after = lift(theta, checked_atan2(s.dy_plus, s.y_plus));
            out.jumps.push_back({s.r, theta, after});
            theta = after;
            out.r.push_back(s.r);
            out.value.push_back(theta);
        }
    }
    return out;
}

std::size_t zero_crossings(const PhaseTrajectory& prufer)
{
    std::size_t count = 0;
    for (std::size_t i = 1; i < prufer.value.size(); ++i) {
        // index of the window (pi/2 + (k-1) pi, pi/2 + k pi] containing theta
        const double a = std::ceil((prufer.value[i - 1] - kPi / 2) / kPi);
        const double b = std::ceil((prufer.value[i] - kPi / 2) / kPi);
        count += static_cast<std::size_t>(std::abs(a - b));
    }
    return count;
}

std::size_t sign_changes(const RadialSolution& solution)
{
    std::size_t count = 0;
    int last = 0;
    for (const RadialSample& s : solution.samples) {
        const int sign = (s.y_plus > 0) - (s.y_plus < 0);
        if (sign == 0) continue;
        if (last != 0 && sign != last) ++count;
        last = sign;
    }
    return count;
}

// ---------------------------------------------------------------------------

ReferencePair::ReferencePair(PeriodicSolution u, double r0)
    : u_(std::move(u)), r0_(r0), g0_(u_.inverse_square_integral(r0))
{
}

double ReferencePair::v(double r) const
{
    return u_.value(r) * (u_.inverse_square_integral(r) - g0_);
}

double ReferencePair::dv(double r, Side side) const
{
    const double u = u_.value(r);
    return u_.derivative(r, side) * (u_.inverse_square_integral(r) - g0_) + 1.0 / u;
}

double ReferencePair::wronskian(double r, Side side) const
{
    return u(r) * dv(r, side) - du(r, side) * v(r);
}

ReferencePair second_solution(const PeriodicSolution& u, double r0)
{
    return ReferencePair(u, r0);
}

namespace {

struct FrameCoordinates {
    double a_sin; // a sin(gamma) = v' y - v y'
    double a_cos; // a cos(gamma) = u' y - u y'
    double v_over_u;
};

FrameCoordinates frame(const ReferencePair& pair, double r, double y, double dy, Side side)
{
    const double u = pair.u(r);
    const double du = pair.du(r, side);
    const double v = pair.v(r);
    const double dv = pair.dv(r, side);
    if (!(u > 0.0)) throw Error(Errc::corrupt_solution, "reference solution u must stay positive");
    return {dv * y - v * dy, du * y - u * dy, v / u};
}

template <typename AngleOf>
PhaseTrajectory continuous_phase(const RadialSolution& solution, const ReferencePair& pair, PhaseKind kind,
                                 AngleOf angle_of)
{
    PhaseTrajectory out;
    out.kind = kind;
    bool first = true;
    double value = 0.0;
    for (const RadialSample& s : solution.samples) {
        const FrameCoordinates f = frame(pair, s.r, s.y_plus, s.dy_plus, Side::right);
        const double angle = angle_of(f, s.r);
        value = first ? angle : lift(value, angle);
        first = false;
        out.r.push_back(s.r);
        out.value.push_back(value);
    }
    return out;
}

} // namespace

PhaseTrajectory generalized_trajectory(const RadialSolution& solution, const ReferencePair& pair)
{
    return continuous_phase(solution, pair, PhaseKind::generalized, [](const FrameCoordinates& f, double) {
        return checked_atan2(f.a_sin, f.a_cos);
    });
}

PhaseTrajectory kepler_phase(const RadialSolution& solution, const ReferencePair& pair)
{
    // tan(phi) = (tan(gamma) - v/u) / r; the vector (r cos g, sin g - (v/u) cos g)
    // flips sign when gamma advances by pi, so its lifted angle is phi.
    return continuous_phase(solution, pair, PhaseKind::kepler, [](const FrameCoordinates& f, double r) {
        return checked_atan2(f.a_sin - f.v_over_u * f.a_cos, r * f.a_cos);
    });
}

double kepler_rhs(double c, const PeriodicSolution& u, double r, double phi)
{
    const double uu = u.value(r);
    const double s = std::sin(phi);
    const double co = std::cos(phi);
    return (-s * co + c * uu * uu * s * s - co * co / (uu * uu)) / r;
}

namespace {

/// Trapezoidal running integral of the piecewise-linear interpolant.
std::vector<double> cumulative_integral(const PhaseTrajectory& t)
{
    std::vector<double> acc(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        acc[i] = acc[i - 1] + (t.r[i] - t.r[i - 1]) * (t.value[i] + t.value[i - 1]) / 2;
    return acc;
}

double integral_to(const PhaseTrajectory& t, const std::vector<double>& acc, double radius)
{
    const std::size_t i = lower_sample(t, radius);
    if (t.r[i] == radius || i + 1 >= t.size()) return acc[i];
    const double phi = t.at(radius);
    return acc[i] + (radius - t.r[i]) * (t.value[i] + phi) / 2;
}

void check_coverage(const PhaseTrajectory& kepler, double d)
{
    if (kepler.kind != PhaseKind::kepler)
        throw Error(Errc::invalid_input, "averaged_phase expects a Kepler phase trajectory");
    if (!(d > 0.0)) throw Error(Errc::invalid_input, "averaged_phase: period must be positive");
    if (kepler.size() < 2 || kepler.r.back() - kepler.r.front() < 2 * d)
        throw Error(Errc::domain_error, "averaged_phase: trajectory shorter than two periods");
}

} // namespace

double averaged_phase_at(const PhaseTrajectory& kepler, double r, double d)
{
    check_coverage(kepler, d);
    if (r < kepler.r.front() || r + d > kepler.r.back())
        throw Error(Errc::domain_error, "averaged_phase: [r, r + d] not covered by the trajectory");
    const auto acc = cumulative_integral(kepler);
    return (integral_to(kepler, acc, r + d) - integral_to(kepler, acc, r)) / d;
}

PhaseTrajectory averaged_phase(const PhaseTrajectory& kepler, double d)
{
    check_coverage(kepler, d);
    const auto acc = cumulative_integral(kepler);
    const double r_begin = kepler.r.front() + d;
    const double r_last = kepler.r.back() - d;
    PhaseTrajectory out;
    out.kind = PhaseKind::averaged;
    for (std::size_t i = 0; i < kepler.size(); ++i) {
        const double r = kepler.r[i];
        if (r < r_begin || r > r_last) continue;
        out.r.push_back(r);
        out.value.push_back((integral_to(kepler, acc, r + d) - acc[i]) / d);
    }
    return out;
}

// ---------------------------------------------------------------------------

AveragedCoefficients coefficient_averages(const RadialParams& params, const PeriodicSolution& u)
{
    params.validate();
    const double c = params.coupling();
    const MeanSquares m = mean_squares(u, MeanMode::quadrature);
    const CriticalData crit = critical_coupling(params.lattice);
    AveragedCoefficients out;
    out.A = -m.D2;
    out.B = c * m.D1 + 0.0; // + 0.0 turns -0 into 0 when c = 0
    out.four_ab = 4 * out.A * out.B + 0.0;
    out.ratio = c / crit.c_crit + 0.0;
    return out;
}

std::string to_string(SpectrumClass kind)
{
    return kind == SpectrumClass::infinite_accumulating ? "InfiniteAccumulating" : "AtMostFinite";
}

Classification classify_discrete_spectrum(double alpha, const LatticeParams& lattice)
{
    lattice.validate();
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0)
        throw Error(Errc::invalid_input, "classify: alpha must lie in (0, 1/2]");
    if (alpha > 0.5)
        throw Error(Errc::reduce_by_symmetry,
                    "classify: alpha > 1/2; the spectrum coincides with that at 1 - alpha, use alpha -> 1 - alpha");

    const RadialParams params{lattice, alpha, 0};
    const CriticalData crit = critical_coupling(lattice);
    const PeriodicSolution u(lattice, crit.threshold);
    const AveragedCoefficients coeff = coefficient_averages(params, u);

    Classification out;
    out.alpha = alpha;
    out.four_ab = coeff.four_ab;
    out.ratio = coeff.ratio;
    out.alpha_crit = crit.alpha_crit;
    out.c = params.coupling();
    out.c_crit = crit.c_crit;

    const bool by_product = coeff.four_ab > 1.0;
    const bool by_flux = alpha < crit.alpha_crit;
    if (by_product != by_flux) {
        if (std::abs(coeff.four_ab - 1.0) > 1e-9)
            throw Error(Errc::consistency, "classify: 4AB and alpha_crit routes disagree");
        out.kind = SpectrumClass::at_most_finite;
        return out;
    }
    out.kind = by_product ? SpectrumClass::infinite_accumulating : SpectrumClass::at_most_finite;
    return out;
}

GrowthReport phase_growth(const RadialParams& params, double energy, std::span<const double> r_max_list,
                          double r_start)
{
    params.validate();
    if (r_start == 0.0) r_start = 1e-3 * params.lattice.d;
    if (r_max_list.empty()) throw Error(Errc::invalid_input, "phase_growth: no radii requested");
    double previous = r_start;
    for (double r : r_max_list) {
        if (!(r > previous)) throw Error(Errc::invalid_input, "phase_growth: radii must increase beyond r_start");
        previous = r;
    }

    const StartState start = regular_start(params, r_start);
    IntegratorOptions options;
    options.landmarks.assign(r_max_list.begin(), r_max_list.end());
    const RadialSolution sol = integrate_radial(params, energy, r_start, r_max_list.back(), start.y, start.dy, options);
    const PhaseTrajectory theta = prufer_trajectory(sol);

    GrowthReport report;
    report.energy = energy;
    report.r_start = r_start;
    const double theta0 = theta.value.front();
    double log_r_prev = std::log(r_start);
    double wound_prev = 0.0;
    double amp_prev = std::log(std::hypot(start.y, start.dy));
    for (double r : r_max_list) {
        const std::size_t i = sample_at_or_before(sol, r);
        const RadialSample& s = sol.samples[i];
        GrowthRow row;
        row.r_max = r;
        row.wound_phase = std::abs(theta.at(r) - theta0);
        row.log_amplitude = std::log(std::hypot(s.y_plus, s.dy_plus)) + s.log_scale;
        const double dlog = std::log(r) - log_r_prev;
        row.phase_slope = (row.wound_phase - wound_prev) / dlog;
        row.amplitude_slope = (row.log_amplitude - amp_prev) / dlog;
        log_r_prev = std::log(r);
        wound_prev = row.wound_phase;
        amp_prev = row.log_amplitude;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace welsh

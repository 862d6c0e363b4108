#include "welsh/lattice_threshold.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "welsh/error.hpp"
#include "welsh/numerics.hpp"

namespace welsh {

namespace {

constexpr int kMaxBracketExpansions = 200;

long double attractive_rate(long double beta_abs, long double d)
{
    // k tanh(kd/2) = |beta|/2 is increasing in k and its root exceeds |beta|/2.
    auto g = [&](long double k) { return k * std::tanh(k * d / 2) - beta_abs / 2; };
    const long double lo = beta_abs / 2;
    long double step = 1.0L / d;
    long double hi = lo + step;
    int expansions = 0;
    while (g(hi) <= 0) {
        if (++expansions > kMaxBracketExpansions)
            throw Error(Errc::convergence_failure, "solve_threshold: attractive bracket expansion cap reached");
        step *= 2;
        hi = lo + step;
    }
    return numerics::bracketed_root(g, lo, hi).root;
}

long double repulsive_rate(long double beta, long double d)
{
    // cot(kd/2) = 2k/beta written without poles; decreasing on (0, pi/d).
    auto h = [&](long double k) { return beta * std::cos(k * d / 2) - 2 * k * std::sin(k * d / 2); };
    const long double edge = std::numbers::pi_v<long double> / d;
    const long double eps = edge * 1e-15L;
    return numerics::bracketed_root(h, eps, edge - eps).root;
}

} // namespace

void LatticeParams::validate() const
{
    if (!std::isfinite(d) || !(d > 0.0))
        throw Error(Errc::invalid_input, "lattice spacing d must be positive and finite");
    if (!std::isfinite(beta))
        throw Error(Errc::invalid_input, "coupling beta must be finite");
}

std::string to_string(Branch b)
{
    switch (b) {
    case Branch::attractive: return "attractive";
    case Branch::repulsive: return "repulsive";
    case Branch::free: return "free";
    }
    return "unknown";
}

ThresholdData solve_threshold(const LatticeParams& params)
{
    params.validate();
    const long double d = params.d;
    const long double beta = params.beta;
    if (params.beta == 0.0) return {Branch::free, 0.0L, 0.0L};
    if (params.beta < 0.0) {
        const long double k = attractive_rate(-beta, d);
        return {Branch::attractive, -k * k, k};
    }
    const long double k = repulsive_rate(beta, d);
    return {Branch::repulsive, k * k, k};
}

long double threshold_residual(const LatticeParams& params, const ThresholdData& threshold)
{
    const long double d = params.d;
    const long double beta = params.beta;
    const long double k = threshold.rate;
    switch (threshold.branch) {
    case Branch::attractive:
        return std::abs(1.0L / std::tanh(k * d / 2) - 2 * k / std::abs(beta));
    case Branch::repulsive:
        return std::abs(1.0L / std::tan(k * d / 2) - 2 * k / beta);
    case Branch::free:
        return 0.0L;
    }
    return 0.0L;
}

long double kp_discriminant(const LatticeParams& params, long double energy)
{
    params.validate();
    if (!std::isfinite(energy)) throw Error(Errc::invalid_input, "kp_discriminant: energy must be finite");
    const long double d = params.d;
    const long double beta = params.beta;
    if (energy > 0) {
        const long double k = std::sqrt(energy);
        return std::cos(k * d) + beta / (2 * k) * std::sin(k * d);
    }
    if (energy < 0) {
        const long double k = std::sqrt(-energy);
        return std::cosh(k * d) + beta / (2 * k) * std::sinh(k * d);
    }
    return 1.0L + beta * d / 2;
}

// ---------------------------------------------------------------------------
// PeriodicSolution

PeriodicSolution::PeriodicSolution(const LatticeParams& params, const ThresholdData& threshold)
    : params_(params), threshold_(threshold), rate_(static_cast<double>(threshold.rate))
{
    params_.validate();
    const Branch expected = params.beta < 0 ? Branch::attractive : (params.beta > 0 ? Branch::repulsive : Branch::free);
    if (threshold.branch != expected)
        throw Error(Errc::invalid_input, "periodic_solution: threshold branch does not match the sign of beta");
    if (expected != Branch::free) {
        const long double ratio = 2 * threshold.rate / std::abs(static_cast<long double>(params.beta));
        if (!(threshold_residual(params, threshold) <= 1e-9L * std::max(1.0L, ratio)))
            throw Error(Errc::invalid_input, "periodic_solution: threshold was not solved for these parameters");
    }
}

PeriodicSolution PeriodicSolution::scaled(double factor) const
{
    if (!std::isfinite(factor) || factor == 0.0)
        throw Error(Errc::invalid_input, "PeriodicSolution::scaled: factor must be finite and nonzero");
    PeriodicSolution copy = *this;
    copy.scale_ *= std::abs(factor);
    return copy;
}

PeriodicSolution::Local PeriodicSolution::locate(double x, Side side) const
{
    const double d = params_.d;
    double cell = std::floor(x / d);
    double xi = x - cell * d;
    if (xi >= d) {
        xi -= d;
        cell += 1;
    } else if (xi < 0) {
        xi += d;
        cell -= 1;
    }
    const double on_circle_tol = 8 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), d);
    bool left_half = xi < d / 2;
    if (std::abs(xi - d / 2) <= on_circle_tol) left_half = (side == Side::left);
    if (left_half) return {xi, 1.0, cell};
    return {d - xi, -1.0, cell};
}

double PeriodicSolution::shape(double w) const
{
    const double d = params_.d;
    const double k = rate_;
    switch (threshold_.branch) {
    case Branch::attractive:
        return std::exp(-k * (w - d / 2)) + std::exp(k * d) * std::exp(k * (w - d / 2));
    case Branch::repulsive:
        return std::cos(k * w);
    case Branch::free:
        return 1.0;
    }
    return 1.0;
}

double PeriodicSolution::shape_slope(double w) const
{
    const double d = params_.d;
    const double k = rate_;
    switch (threshold_.branch) {
    case Branch::attractive:
        return -k * std::exp(-k * (w - d / 2)) + k * std::exp(k * d) * std::exp(k * (w - d / 2));
    case Branch::repulsive:
        return -k * std::sin(k * w);
    case Branch::free:
        return 0.0;
    }
    return 0.0;
}

double PeriodicSolution::half_inverse_square(double w) const
{
    const double d = params_.d;
    const double k = rate_;
    switch (threshold_.branch) {
    case Branch::attractive:
        // shape = 2 exp(kd/2) cosh(k w)
        return std::tanh(k * w) / (4 * std::exp(k * d) * k);
    case Branch::repulsive:
        return std::tan(k * w) / k;
    case Branch::free:
        return w;
    }
    return w;
}

double PeriodicSolution::value(double x) const
{
    return scale_ * shape(locate(x, Side::right).w);
}

double PeriodicSolution::derivative(double x, Side side) const
{
    const Local loc = locate(x, side);
    return scale_ * loc.sign * shape_slope(loc.w);
}

double PeriodicSolution::log_ratio(double x) const
{
    const double z = rate_ * locate(x, Side::right).w;
    switch (threshold_.branch) {
    case Branch::attractive:
        if (z > 20) return z + std::log1p(std::exp(-2 * z)) - std::numbers::ln2;
        return std::log1p(2 * std::pow(std::sinh(z / 2), 2));
    case Branch::repulsive:
        return std::log1p(-2 * std::pow(std::sin(z / 2), 2));
    case Branch::free:
        return 0.0;
    }
    return 0.0;
}

double PeriodicSolution::inverse_square_integral(double x) const
{
    const double d = params_.d;
    const Local loc = locate(x, Side::right);
    const double half = half_inverse_square(d / 2);
    const double within = loc.sign > 0 ? half_inverse_square(loc.w) : 2 * half - half_inverse_square(loc.w);
    return (loc.cell * 2 * half + within) / (scale_ * scale_);
}

// ---------------------------------------------------------------------------
// Means and critical quantities

MeanSquares mean_squares(const PeriodicSolution& solution, MeanMode mode)
{
    const double d = solution.params().d;
    const double s2 = solution.scale() * solution.scale();
    if (mode == MeanMode::closed_form) {
        if (solution.threshold().branch != Branch::attractive)
            throw Error(Errc::unsupported_mode, "mean_squares: closed form is only available for attractive coupling");
        const double k = static_cast<double>(solution.threshold().rate);
        const double ekd = std::exp(k * d);
        const double D1 = 2.0 / d * ekd * ((ekd - 1.0 / ekd) / (2 * k) + d);
        const double D2 = 1.0 / (d * k) / ekd * (0.5 - 1.0 / (1.0 + ekd));
        return {D1 * s2, D2 / s2};
    }
    // u is symmetric about d/2: average over the left half-cell.
    auto u2 = [&](double x) { const double u = solution.value(x); return u * u; };
    auto inv_u2 = [&](double x) { const double u = solution.value(x); return 1.0 / (u * u); };
    const double D1 = 2.0 / d * numerics::adaptive_simpson(u2, 0.0, d / 2, 1e-12);
    const double D2 = 2.0 / d * numerics::adaptive_simpson(inv_u2, 0.0, d / 2, 1e-12);
    return {D1, D2};
}

double schwarz_excess(const PeriodicSolution& solution)
{
    if (solution.threshold().branch == Branch::free) return 0.0;
    const double d = solution.params().d;
    // With g = log(u/u(0)): D1 D2 = <e^{2g}><e^{-2g}> = 1 + (a + b) + a b,
    // a = <expm1(2g)>, b = <expm1(-2g)>, a + b = <4 sinh^2 g>.
    auto sum_term = [&](double x) { const double s = std::sinh(solution.log_ratio(x)); return 4 * s * s; };
    auto up = [&](double x) { return std::expm1(2 * solution.log_ratio(x)); };
    auto down = [&](double x) { return std::expm1(-2 * solution.log_ratio(x)); };
    const double a_plus_b = 2.0 / d * numerics::adaptive_simpson(sum_term, 0.0, d / 2, 1e-13);
    const double a = 2.0 / d * numerics::adaptive_simpson(up, 0.0, d / 2, 1e-13);
    const double b = 2.0 / d * numerics::adaptive_simpson(down, 0.0, d / 2, 1e-13);
    return a_plus_b + a * b;
}

CriticalData critical_coupling(const LatticeParams& params)
{
    params.validate();
    if (params.beta == 0.0)
        throw Error(Errc::undefined_critical, "critical_coupling: beta = 0 has no critical flux");

    CriticalData out;
    out.threshold = solve_threshold(params);
    const PeriodicSolution u(params, out.threshold);
    const MeanSquares q = mean_squares(u, MeanMode::quadrature);
    out.D1 = q.D1;
    out.D2 = q.D2;

    if (out.threshold.branch == Branch::attractive) {
        const MeanSquares cf = mean_squares(u, MeanMode::closed_form);
        if (std::abs(cf.D1 - q.D1) > 1e-9 * cf.D1 || std::abs(cf.D2 - q.D2) > 1e-9 * cf.D2)
            throw Error(Errc::consistency, "critical_coupling: closed-form and quadrature means disagree");
    }

    out.excess = schwarz_excess(u);
    const double product = out.D1 * out.D2;
    if (!(out.excess > 0.0))
        throw Error(Errc::convergence_failure, "critical_coupling: D1 D2 - 1 is not resolved at this coupling");
    if (std::abs(product - 1.0 - out.excess) > 1e-9 * product)
        throw Error(Errc::consistency, "critical_coupling: D1 D2 - 1 routes disagree");

    out.c_crit = -0.25 / (1.0 + out.excess);
    out.alpha_crit = 0.5 * std::sqrt(out.excess / (1.0 + out.excess));
    return out;
}

double strong_coupling_estimate(const LatticeParams& params)
{
    params.validate();
    if (!(params.beta < 0.0))
        throw Error(Errc::unsupported_branch, "strong_coupling_estimate: only defined for attractive coupling");
    const double d = params.d;
    return -(d * d / 8.0) * std::exp(-std::abs(params.beta) * d / 2);
}

double strong_coupling_asymptote(const LatticeParams& params)
{
    params.validate();
    if (!(params.beta < 0.0))
        throw Error(Errc::unsupported_branch, "strong_coupling_asymptote: only defined for attractive coupling");
    const double bd = params.beta * params.d;
    return -(bd * bd / 8.0) * std::exp(-std::abs(bd) / 2);
}

std::vector<SweepRow> sweep_alpha_crit(std::span<const double> beta_values, double d)
{
    std::vector<SweepRow> rows;
    rows.reserve(beta_values.size());
    for (const double beta : beta_values) {
        SweepRow row;
        row.beta = beta;
        try {
            row.data = critical_coupling({d, beta});
            row.ok = true;
        } catch (const Error& e) {
            row.error = std::string(to_string(e.code())) + ": " + e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace welsh

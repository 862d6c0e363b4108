#include "welsh/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "welsh/error.hpp"

namespace welsh {

namespace {

using State = std::array<double, 2>;
using Stepper = boost::numeric::odeint::runge_kutta_fehlberg78<State>;

constexpr double kRenormHigh = 1e50;
constexpr double kRenormLow = 1e-50;
constexpr std::size_t kMaxSteps = 200'000'000;

double norm(const State& s) { return std::hypot(s[0], s[1]); }

} // namespace

double effective_coupling(double alpha, int l)
{
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 1.0)
        throw Error(Errc::invalid_input, "flux alpha must lie in [0, 1)");
    const double m = l + alpha;
    return -0.25 + m * m;
}

void RadialParams::validate() const
{
    lattice.validate();
    (void)effective_coupling(alpha, l);
}

RadialSolution integrate_radial(const RadialParams& params, double energy, double r_start, double r_end,
                                double y0, double dy0, const IntegratorOptions& options)
{
    params.validate();
    if (!std::isfinite(r_start) || r_start <= 0.0)
        throw Error(Errc::singularity, "integrate_radial: r_start must be positive (r = 0 is singular)");
    if (!std::isfinite(r_end) || !(r_end > r_start))
        throw Error(Errc::invalid_input, "integrate_radial: need r_start < r_end");
    if (!std::isfinite(energy) || !std::isfinite(y0) || !std::isfinite(dy0) || (y0 == 0.0 && dy0 == 0.0))
        throw Error(Errc::invalid_input, "integrate_radial: initial state must be finite and nonzero");
    if (!(options.rel_tol > 0.0) || !(options.max_step > 0.0))
        throw Error(Errc::invalid_input, "integrate_radial: tolerances must be positive");

    const double c = params.coupling();
    const double beta = params.lattice.beta;
    const double d = params.lattice.d;

    auto rhs = [c, energy](const State& x, State& dxdr, double r) {
        dxdr[0] = x[1];
        dxdr[1] = (c / (r * r) - energy) * x[0];
    };

    std::vector<double> marks;
    for (double m : options.landmarks)
        if (m > r_start && m < r_end) marks.push_back(m);
    std::sort(marks.begin(), marks.end());
    std::size_t next_mark = 0;

    // first circle strictly beyond r_start
    std::size_t next_circle = 0;
    {
        const double guess = std::floor(r_start / d - 0.5);
        next_circle = guess > 0 ? static_cast<std::size_t>(guess) : 0;
        while (params.lattice.circle_radius(next_circle) <= r_start) ++next_circle;
    }

    RadialSolution out;
    out.params = params;
    out.energy = energy;

    State x{y0, dy0};
    double log_scale = 0.0;
    double r = r_start;
    out.samples.push_back({r, y0, dy0, y0, dy0, 0.0, false});

    Stepper stepper;
    State x_new{};
    State x_err{};
    double h = std::min({options.max_step, (r_end - r_start), 1e-2 * std::max(r_start, 1e-3)});

    while (r < r_end) {
        while (next_mark < marks.size() && marks[next_mark] <= r) ++next_mark;
        const double circle = params.lattice.circle_radius(next_circle);
        double target = std::min(r_end, circle);
        bool target_is_mark = false;
        if (next_mark < marks.size() && marks[next_mark] < target) {
            target = marks[next_mark];
            target_is_mark = true;
        }

        // |theta'| <= max(|q|, 1) for the Pruefer angle, so this cap keeps the
        // rotation per step below pi/4 and the angle lifting unambiguous.
        const double q = std::abs(c) / (r * r) + std::abs(energy);
        const double rotation_cap = (std::numbers::pi / 4) / std::max(q, 1.0);
        double step = std::min({h, rotation_cap, options.max_step});
        bool lands = false;
        if (r + step >= target) {
            step = target - r;
            lands = true;
        }
        if (!(step > std::abs(r) * 1e-15))
            throw Error(Errc::integration_failure, "integrate_radial: step size underflow");

        stepper.do_step(rhs, x, r, x_new, step, x_err);
        const double scale = std::max(norm(x), norm(x_new));
        const double err = norm(x_err) / (options.rel_tol * scale);
        if (!std::isfinite(err) || err > 1.0) {
            ++out.steps_rejected;
            const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -1.0 / 8.0)) : 0.2;
            h = step * factor;
            continue;
        }
        ++out.steps_accepted;
        if (out.steps_accepted > kMaxSteps)
            throw Error(Errc::integration_failure, "integrate_radial: step budget exhausted");

        const double grow = err > 0 ? std::min(4.0, 0.9 * std::pow(err, -1.0 / 8.0)) : 4.0;
        if (!lands) h = step * grow;
        else h = std::max(h, step * grow);
        x = x_new;
        r = lands ? target : r + step;

        const double n = norm(x);
        if (n > kRenormHigh || n < kRenormLow) {
            x[0] /= n;
            x[1] /= n;
            log_scale += std::log(n);
        }

        RadialSample s{r, x[0], x[1], x[0], x[1], log_scale, false};
        if (lands && !target_is_mark && target == circle) {
            x[1] += beta * x[0];
            s.y_plus = x[0];
            s.dy_plus = x[1];
            s.at_circle = true;
            out.circle_indices.push_back(out.samples.size());
            ++next_circle;
        }
        if (lands && target_is_mark) ++next_mark;
        out.samples.push_back(s);
    }
    return out;
}

std::size_t sample_at_or_before(const RadialSolution& solution, double r)
{
    const auto& s = solution.samples;
    auto it = std::upper_bound(s.begin(), s.end(), r, [](double v, const RadialSample& a) { return v < a.r; });
    if (it == s.begin())
        throw Error(Errc::domain_error, "sample_at_or_before: radius precedes the solution");
    return static_cast<std::size_t>(std::distance(s.begin(), it) - 1);
}

} // namespace welsh

namespace welsh {

StartState regular_start(const RadialParams& params, double r)
{
    params.validate();
    if (!(r > 0.0) || !std::isfinite(r))
        throw Error(Errc::singularity, "regular_start: radius must be positive");
    const double p = params.frobenius_exponent();
    return {std::pow(r, p), p * std::pow(r, p - 1.0)};
}

} // namespace welsh

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "welsh/error.hpp"
#include "welsh/phase.hpp"

using namespace welsh;

namespace {

constexpr double kPi = std::numbers::pi;

PeriodicSolution periodic(const LatticeParams& p) { return PeriodicSolution(p, solve_threshold(p)); }

RadialSolution regular(const RadialParams& p, double e, double r_end, std::vector<double> marks = {})
{
    const StartState s = regular_start(p, 1e-3);
    IntegratorOptions opt;
    opt.landmarks = std::move(marks);
    return integrate_radial(p, e, 1e-3, r_end, s.y, s.dy, opt);
}

Errc code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::consistency;
}

} // namespace

TEST_CASE("reference pair has unit Wronskian and v obeys the jump condition")
{
    for (double beta : {-20.0, -2.0, 0.0, 3.0}) {
        CAPTURE(beta);
        const LatticeParams lat{1.0, beta};
        for (double r0 : {0.0, 0.2, 3.7}) {
            const ReferencePair pair(periodic(lat), r0);
            CHECK(pair.v(r0) == doctest::Approx(0.0).scale(1e-12));
            for (double r : {0.1, 0.5, 1.25, 7.5, 40.3}) {
                CHECK(pair.wronskian(r, Side::left) == doctest::Approx(1.0).epsilon(1e-10));
                CHECK(pair.wronskian(r, Side::right) == doctest::Approx(1.0).epsilon(1e-10));
            }
            const double rn = 2.5;
            CHECK(pair.dv(rn, Side::right) - pair.dv(rn, Side::left) ==
                  doctest::Approx(beta * pair.v(rn)).epsilon(1e-9).scale(1e-9));
        }
    }
}

TEST_CASE("Pruefer angle counts zeros and records the jumps")
{
    const RadialParams p{{1.0, 2.0}, 0.3, 0};
    const RadialSolution sol = regular(p, 6.0, 25.0);
    const PhaseTrajectory theta = prufer_trajectory(sol);
    CHECK(zero_crossings(theta) == sign_changes(sol));
    CHECK(zero_crossings(theta) > 5);
    CHECK(theta.jumps.size() == sol.circle_indices.size());
    for (const PhaseJump& j : theta.jumps) {
        CHECK(std::abs(j.after - j.before) < kPi / 2);
        // y is continuous: cos(theta) keeps its sign across the jump
        CHECK((std::cos(j.before) > 0) == (std::cos(j.after) > 0));
    }
    // theta decreases through the zeros of y
    CHECK(theta.value.back() < theta.value.front());
    CHECK(theta.at(theta.r.back()) == theta.value.back());
    CHECK(code_of([&] { (void)theta.at(100.0); }) == Errc::domain_error);
}

TEST_CASE("phase equations agree with finite differences of the phases")
{
    for (double beta : {-2.0, 1.5}) {
        CAPTURE(beta);
        const RadialParams p{{1.0, beta}, 0.1, 0};
        const PeriodicSolution u = periodic(p.lattice);
        const ReferencePair pair(u);
        const double e0 = u.threshold().E0();
        const double c = p.coupling();
        const double h = 1e-5;
        for (double r : {2.2, 5.8, 11.1}) {
            const RadialSolution sol = regular(p, e0, r + 2 * h, {r - h, r, r + h});
            const PhaseTrajectory phi = kepler_phase(sol, pair);
            const PhaseTrajectory gamma = generalized_trajectory(sol, pair);
            const double dphi = (phi.at(r + h) - phi.at(r - h)) / (2 * h);
            CHECK(dphi == doctest::Approx(kepler_rhs(c, u, r, phi.at(r))).epsilon(1e-5).scale(1e-7));

            const auto i = sample_at_or_before(sol, r);
            const RadialSample& s = sol.samples[i];
            const double as = pair.dv(r) * s.y_plus - pair.v(r) * s.dy_plus;
            const double ac = pair.du(r) * s.y_plus - pair.u(r) * s.dy_plus;
            const double dgamma = (gamma.at(r + h) - gamma.at(r - h)) / (2 * h);
            CHECK(dgamma == doctest::Approx(c / (r * r) * s.y_plus * s.y_plus / (as * as + ac * ac))
                                .epsilon(1e-5)
                                .scale(1e-8));
            // tan(phi) = (tan(gamma) - v/u) / r
            CHECK(std::tan(phi.at(r)) ==
                  doctest::Approx((std::tan(gamma.at(r)) - pair.v(r) / pair.u(r)) / r).epsilon(1e-8));
        }
    }
}

TEST_CASE("generalised and Kepler phases are continuous across circles")
{
    const RadialParams p{{1.0, -5.0}, 0.0, 0};
    const ReferencePair pair(periodic(p.lattice));
    const RadialSolution sol = regular(p, pair.periodic().threshold().E0() - 0.01, 30.0);
    for (const PhaseTrajectory& t : {generalized_trajectory(sol, pair), kepler_phase(sol, pair)})
        for (std::size_t i = 1; i < t.size(); ++i) CHECK(std::abs(t.value[i] - t.value[i - 1]) < kPi / 2);
}

TEST_CASE("averaged phase")
{
    PhaseTrajectory flat;
    flat.kind = PhaseKind::kepler;
    for (int i = 0; i <= 100; ++i) {
        flat.r.push_back(0.1 * i);
        flat.value.push_back(0.5 * flat.r.back());
    }
    // mean of a linear function over [r, r + d] is its value at r + d/2
    CHECK(averaged_phase_at(flat, 2.0, 1.0) == doctest::Approx(0.5 * 2.5));
    const PhaseTrajectory avg = averaged_phase(flat, 1.0);
    CHECK(avg.kind == PhaseKind::averaged);
    REQUIRE(avg.size() > 0);
    for (std::size_t i = 0; i < avg.size(); ++i) CHECK(avg.value[i] == doctest::Approx(0.5 * (avg.r[i] + 0.5)));
    CHECK(avg.r.front() >= 1.0);
    CHECK(avg.r.back() <= 9.0 + 1e-12);
    CHECK(code_of([&] { averaged_phase_at(flat, 9.5, 1.0); }) == Errc::domain_error);
    PhaseTrajectory wrong = flat;
    wrong.kind = PhaseKind::prufer;
    CHECK(code_of([&] { averaged_phase(wrong, 1.0); }) == Errc::invalid_input);
}

TEST_CASE("4AB equals c / c_crit")
{
    for (double beta : {-20.0, -2.0, -0.5, 0.5, 5.0})
        for (double alpha : {0.05, 0.15, 0.25, 0.35, 0.45}) {
            const RadialParams p{{1.0, beta}, alpha, 0};
            const AveragedCoefficients a = coefficient_averages(p, periodic(p.lattice));
            CHECK(a.four_ab == doctest::Approx(a.ratio).epsilon(1e-10));
            CHECK(a.A < 0);
        }
    // independent of the normalisation of u
    const RadialParams p{{1.0, -2.0}, 0.1, 0};
    const auto a = coefficient_averages(p, periodic(p.lattice));
    const auto b = coefficient_averages(p, periodic(p.lattice).scaled(1e-3));
    CHECK(a.four_ab == doctest::Approx(b.four_ab).epsilon(1e-12));
}

TEST_CASE("classification")
{
    CHECK(classify_discrete_spectrum(0.05, {1.0, -2.0}).kind == SpectrumClass::infinite_accumulating);
    CHECK(classify_discrete_spectrum(0.5, {1.0, 7.0}).kind == SpectrumClass::at_most_finite);
    CHECK(classify_discrete_spectrum(0.3, {1.0, -0.01}).kind == SpectrumClass::at_most_finite);
    CHECK(classify_discrete_spectrum(0.45, {1.0, -20.0}).kind == SpectrumClass::infinite_accumulating);
    const CriticalData crit = critical_coupling({1.0, -2.0});
    const Classification at = classify_discrete_spectrum(crit.alpha_crit, {1.0, -2.0});
    CHECK(at.kind == SpectrumClass::at_most_finite);
    CHECK(at.four_ab == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(to_string(SpectrumClass::infinite_accumulating) == "InfiniteAccumulating");
    CHECK(to_string(SpectrumClass::at_most_finite) == "AtMostFinite");

    CHECK(code_of([] { classify_discrete_spectrum(0.6, {1.0, -2.0}); }) == Errc::reduce_by_symmetry);
    CHECK(code_of([] { classify_discrete_spectrum(0.0, {1.0, -2.0}); }) == Errc::invalid_input);
    CHECK(code_of([] { classify_discrete_spectrum(1.0, {1.0, -2.0}); }) == Errc::invalid_input);
    CHECK(code_of([] { classify_discrete_spectrum(0.2, {1.0, 0.0}); }) == Errc::undefined_critical);
}

TEST_CASE("phase growth at the threshold")
{
    const std::vector<double> radii{30.0, 60.0, 120.0, 240.0};
    // deep subcritical flux: the angle keeps winding
    const RadialParams deep{{1.0, -20.0}, 0.0, 0};
    const GrowthReport g = phase_growth(deep, solve_threshold(deep.lattice).E0(), radii);
    REQUIRE(g.rows.size() == radii.size());
    CHECK(g.r_start == doctest::Approx(1e-3));
    CHECK(g.rows.back().wound_phase > g.rows.front().wound_phase + kPi);
    // supercritical flux: bounded angle
    const RadialParams sup{{1.0, 7.0}, 0.5, 0};
    const GrowthReport b = phase_growth(sup, solve_threshold(sup.lattice).E0(), radii);
    for (const GrowthRow& row : b.rows) CHECK(row.wound_phase < kPi);

    CHECK(code_of([&] { phase_growth(sup, 0.0, std::vector<double>{}); }) == Errc::invalid_input);
    CHECK(code_of([&] { phase_growth(sup, 0.0, std::vector<double>{5.0, 4.0}); }) == Errc::invalid_input);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "welsh/error.hpp"
#include "welsh/fd_oracle.hpp"
#include "welsh/phase.hpp"
#include "welsh/spectral.hpp"

using namespace welsh;

namespace {

constexpr double kPi = std::numbers::pi;

Errc code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::consistency;
}

double e0_of(const LatticeParams& p) { return solve_threshold(p).E0(); }

/// Zeros of the solution with y(r_min) = 0, y'(r_min) = 1: the Dirichlet
/// problem on [r_min, r_max] that the FD matrix discretises.
std::size_t dirichlet_count(const RadialParams& p, const TruncatedDomain& dom, double e)
{
    const RadialSolution sol = integrate_radial(p, e, dom.r_min, dom.r_max, 0.0, 1.0);
    const PhaseTrajectory theta = prufer_trajectory(sol);
    // the start sits on a zero (theta = pi/2); count the later ones
    return zero_crossings(theta);
}

double dirichlet_eigenvalue(const RadialParams& p, const TruncatedDomain& dom, std::size_t j, double lo, double hi)
{
    for (int it = 0; it < 80; ++it) {
        const double mid = (lo + hi) / 2;
        (dirichlet_count(p, dom, mid) > j ? hi : lo) = mid;
    }
    return (lo + hi) / 2;
}

} // namespace

TEST_CASE("domain validation")
{
    const LatticeParams lat{1.0, -2.0};
    CHECK_NOTHROW(TruncatedDomain{1e-3, 60.0}.validate(lat));
    CHECK(code_of([&] { TruncatedDomain{0.0, 60.0}.validate(lat); }) == Errc::invalid_input);
    CHECK(code_of([&] { TruncatedDomain{0.6, 60.0}.validate(lat); }) == Errc::invalid_input);
    CHECK(code_of([&] { TruncatedDomain{1e-3, 0.4}.validate(lat); }) == Errc::invalid_input);
    // r_max may sit on a circle
    const RadialParams p{lat, 0.0, 0};
    CHECK_NOTHROW(oscillation_count(p, e0_of(lat) - 0.1, TruncatedDomain{1e-3, 10.5}));
}

TEST_CASE("FD particle in a box")
{
    // alpha = 1/2 and beta = 0: -y'' on [r_min, r_max] with Dirichlet ends
    const RadialParams p{{1.0, 0.0}, 0.5, 0};
    const TruncatedDomain dom{0.25, 10.25};
    const std::size_t n = 999;
    const EigenResult fd = fd_spectrum(p, dom, n, 5);
    const double L = 10.0, h = L / (n + 1);
    for (std::size_t j = 0; j < 5; ++j) {
        const double discrete = 4 / (h * h) * std::pow(std::sin((j + 1) * kPi * h / (2 * L)), 2);
        const double exact = std::pow((j + 1) * kPi / L, 2);
        CHECK(fd.eigenvalues[j] == doctest::Approx(discrete).epsilon(1e-11));
        CHECK(std::abs(fd.eigenvalues[j] - exact) < exact * h * h);
    }
    CHECK(fd.method == Method::fd_oracle);
    CHECK(std::is_sorted(fd.eigenvalues.begin(), fd.eigenvalues.end()));
}

TEST_CASE("FD grid snaps every circle within h/2")
{
    const RadialParams p{{0.7, -3.0}, 0.1, 0};
    const TruncatedDomain dom{1e-3, 20.0};
    const FDGrid g = build_fd_grid(p, dom, 1234);
    CHECK(g.h * (g.n + 1) == doctest::Approx(dom.r_max - dom.r_min));
    CHECK(g.circles.size() == 29); // 0.35 + 0.7 k < 20
    for (const SnappedCircle& c : g.circles) CHECK(std::abs(g.node(c.node) - c.radius) <= g.h / 2 * (1 + 1e-12));
    CHECK(code_of([&] { build_fd_grid(p, dom, 99); }) == Errc::invalid_request);
    CHECK(code_of([&] { fd_spectrum(p, dom, 200, 201); }) == Errc::invalid_request);
    CHECK(code_of([&] { fd_spectrum(p, dom, 200, 0); }) == Errc::invalid_request);
}

TEST_CASE("FD Richardson: halving h divides the error by about four")
{
    const RadialParams p{{1.0, -2.0}, 0.2, 0};
    // circles fall on nodes for every grid below; r_min is resolved by the grid
    const TruncatedDomain dom{0.1, 20.1};
    std::vector<double> lam;
    for (std::size_t m : {1000u, 2000u, 4000u}) lam.push_back(fd_spectrum(p, dom, 20 * m - 1, 1).eigenvalues[0]);
    const double ratio = (lam[0] - lam[1]) / (lam[1] - lam[2]);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("shooting engine matches the extrapolated FD oracle on the same Dirichlet problem")
{
    const RadialParams p{{1.0, -20.0}, 0.2, 0};
    const TruncatedDomain dom{0.001, 8.001};
    const double e0 = e0_of(p.lattice);
    const EigenResult coarse = fd_spectrum(p, dom, 8 * 1000 - 1, 3);
    const EigenResult fine = fd_spectrum(p, dom, 8 * 2000 - 1, 3);
    for (std::size_t j = 0; j < 3; ++j) {
        CAPTURE(j);
        const double extrapolated = (4 * fine.eigenvalues[j] - coarse.eigenvalues[j]) / 3;
        const double shot = dirichlet_eigenvalue(p, dom, j, e0 - 5.0, e0 + 5.0);
        CHECK(shot == doctest::Approx(extrapolated).epsilon(1e-7));
        // and the raw FD error is the expected O(h^2) size
        CHECK(std::abs(coarse.eigenvalues[j] - shot) < 1e-2);
    }
}

TEST_CASE("oscillation count equals the FD count below E0")
{
    for (double beta : {-2.0, 2.0})
        for (double alpha : {0.0, 0.2, 0.5}) {
            CAPTURE(beta);
            CAPTURE(alpha);
            const RadialParams p{{1.0, beta}, alpha, 0};
            const TruncatedDomain dom{1e-3, 30.0};
            const double e = e0_of(p.lattice) - kThresholdMargin;
            CHECK(oscillation_count(p, e, dom) == fd_count_below(build_fd_grid(p, dom, 30000), e));
        }
    const RadialParams p{{1.0, -2.0}, 0.0, 0};
    CHECK(code_of([&] { oscillation_count(p, e0_of(p.lattice), TruncatedDomain{}); }) == Errc::invalid_input);
}

TEST_CASE("counts are monotone in E and in the truncation")
{
    const RadialParams p{{1.0, -20.0}, 0.1, 0};
    const double e0 = e0_of(p.lattice);
    std::size_t last = 0;
    for (int i = 0; i <= 40; ++i) {
        const double e = e0 - 2.0 + 2.0 * i / 40.0 - kThresholdMargin;
        const std::size_t n = oscillation_count(p, e, TruncatedDomain{1e-3, 20.0});
        CHECK(n >= last);
        last = n;
    }
    CHECK(last > 0);
    std::size_t previous = 0;
    for (double r_max : {10.0, 20.0, 40.0, 80.0}) {
        const std::size_t n = oscillation_count(p, e0 - kThresholdMargin, TruncatedDomain{1e-3, r_max});
        CHECK(n >= previous);
        previous = n;
    }
}

TEST_CASE("find_eigenvalues")
{
    const RadialParams p{{1.0, -20.0}, 0.0, 0};
    const TruncatedDomain dom{1e-3, 30.0};
    const EigenResult res = find_eigenvalues(p, dom, 1e-9);
    const double e0 = e0_of(p.lattice);
    REQUIRE(res.count() >= 5);
    CHECK(res.threshold == e0);
    CHECK(std::is_sorted(res.eigenvalues.begin(), res.eigenvalues.end()));
    for (std::size_t j = 0; j < res.count(); ++j) {
        const double e = res.eigenvalues[j];
        CHECK(e < e0 - kThresholdMargin);
        CHECK(res.widths[j] <= 1e-9);
        CHECK(zero_count(p, e - 1e-9, dom) <= j);
        CHECK(zero_count(p, e + 1e-9, dom) >= j + 1);
    }
    CHECK(zero_count(p, spectral_floor(p, dom), dom) == 0);

    // window restricted to the upper part
    const EigenResult top = find_eigenvalues(p, dom, res.eigenvalues[1] + 1e-6, e0, 1e-9);
    CHECK(top.count() == res.count() - 2);

    CHECK(find_eigenvalues(RadialParams{{1.0, -2.0}, 0.5, 0}, TruncatedDomain{1e-3, 120.0}, 1e-9).count() == 0);
    CHECK(code_of([&] { find_eigenvalues(p, dom, e0 - 1, e0 + 1, 1e-9); }) == Errc::invalid_window);
    CHECK(code_of([&] { find_eigenvalues(p, dom, e0 - 1, e0 - 2, 1e-9); }) == Errc::invalid_window);
    CHECK(code_of([&] { find_eigenvalues(p, dom, e0 - 1, e0, 0.0); }) == Errc::invalid_input);
}

TEST_CASE("eigenvalues converge as the truncation grows")
{
    const RadialParams p{{1.0, -20.0}, 0.0, 0};
    const double e0 = e0_of(p.lattice);
    const EigenResult a = find_eigenvalues(p, TruncatedDomain{1e-3, 15.0}, e0 - 5, e0, 1e-10);
    const EigenResult b = find_eigenvalues(p, TruncatedDomain{1e-3, 30.0}, e0 - 5, e0, 1e-10);
    REQUIRE(a.count() >= 1);
    REQUIRE(b.count() >= a.count());
    // the ground state is localised at the first circle: truncation barely moves it
    CHECK(a.eigenvalues[0] == doctest::Approx(b.eigenvalues[0]).epsilon(1e-10));
    for (std::size_t j = 0; j < a.count(); ++j) CHECK(b.eigenvalues[j] <= a.eigenvalues[j] + 1e-9);
}

TEST_CASE("flux symmetry: (alpha, l = 0) and (1 - alpha, l = -1)")
{
    const TruncatedDomain dom{1e-3, 30.0};
    const LatticeParams lat{1.0, -20.0};
    const double e0 = e0_of(lat);
    const EigenResult a = find_eigenvalues({lat, 0.3, 0}, dom, e0 - 3, e0, 1e-10);
    const EigenResult b = find_eigenvalues({lat, 0.7, -1}, dom, e0 - 3, e0, 1e-10);
    REQUIRE(a.count() == b.count());
    REQUIRE(a.count() > 0);
    for (std::size_t j = 0; j < a.count(); ++j) CHECK(std::abs(a.eigenvalues[j] - b.eigenvalues[j]) <= 1e-8);
}

TEST_CASE("assembled spectrum comes from a single channel")
{
    const LatticeParams lat{1.0, -20.0};
    const TruncatedDomain dom{1e-3, 20.0};
    const double e0 = e0_of(lat);
    const AssembledSpectrum s3 = assemble_spectrum(0.3, lat, {-1, 0, 1}, dom, e0 - 3, e0, 1e-10);
    CHECK(s3.channels.at(0).count() > 0);
    CHECK(s3.channels.at(-1).count() == 0);
    CHECK(s3.channels.at(1).count() == 0);
    CHECK(s3.merged.size() == s3.channels.at(0).count());
    for (const SpectrumEntry& e : s3.merged) CHECK(e.l == 0);

    const AssembledSpectrum s7 = assemble_spectrum(0.7, lat, {-1, 0, 1}, dom, e0 - 3, e0, 1e-10);
    CHECK(s7.channels.at(0).count() == 0);
    CHECK(s7.channels.at(1).count() == 0);
    REQUIRE(s7.channels.at(-1).count() == s3.channels.at(0).count());
    for (std::size_t j = 0; j < s7.merged.size(); ++j)
        CHECK(std::abs(s7.merged[j].energy - s3.merged[j].energy) <= 1e-8);
    CHECK(code_of([&] { assemble_spectrum(1.0, lat, {0}, dom, e0 - 3, e0); }) == Errc::invalid_input);
}

TEST_CASE("quadratic form")
{
    // hat function: exact kinetic energy 2/w for height 1 and half-width w
    SampledFunction hat{{1.0, 2.0, 3.0}, {0.0, 1.0, 0.0}};
    const RadialParams free_half{{1.0, 0.0}, 0.5, 0};
    CHECK(quadratic_form(free_half, hat) == doctest::Approx(2.0));

    // f = r - r^2/ (on [a, b]) against direct quadrature of every term
    const RadialParams p{{1.0, -3.0}, 0.2, 0};
    SampledFunction g;
    const double a = 0.2, b = 3.2;
    for (int i = 0; i <= 3000; ++i) {
        const double r = a + (b - a) * i / 3000.0;
        g.r.push_back(r);
        g.f.push_back((r - a) * (b - r));
    }
    g.f.back() = 0.0;
    const double c = p.coupling();
    const double e0 = e0_of(p.lattice);
    // closed forms for f = (r - a)(b - r)
    const double kinetic = std::pow(b - a, 3) / 3;
    const double mass = std::pow(b - a, 5) / 30;
    const double cen = [&] {
        // int (r-a)^2 (b-r)^2 / r^2 dr from a to b, by the antiderivative
        auto F = [&](double r) {
            return r * r * r / 3 - (a + b) * r * r + (a * a + b * b + 4 * a * b) * r - 2 * a * b * (a + b) * std::log(r) -
                   a * a * b * b / r;
        };
        return F(b) - F(a);
    }();
    double delta = 0.0;
    for (double rn : {0.5, 1.5, 2.5}) delta += std::pow((rn - a) * (b - rn), 2);
    const double expected = kinetic + c * cen + p.lattice.beta * delta - e0 * mass;
    CHECK(quadratic_form(p, g) == doctest::Approx(expected).epsilon(1e-5));

    SampledFunction open{{1.0, 2.0, 3.0}, {0.0, 1.0, 0.5}};
    CHECK(code_of([&] { quadratic_form(p, open); }) == Errc::boundary_violation);
    SampledFunction unsorted{{1.0, 3.0, 2.0}, {0.0, 1.0, 0.0}};
    CHECK(code_of([&] { quadratic_form(p, unsorted); }) == Errc::invalid_input);
}

TEST_CASE("quadratic form is negative on the FD ground state when eigenvalues exist")
{
    const RadialParams p{{1.0, -20.0}, 0.0, 0};
    const TruncatedDomain dom{1e-3, 20.001}; // circles on nodes
    const FDGrid g = build_fd_grid(p, dom, 19999);
    const SampledFunction f = fd_eigenvector(g, 0);
    const double q = quadratic_form(p, f);
    CHECK(q < 0.0);
    // Rayleigh quotient of the eigenvector reproduces its eigenvalue up to the FD error
    double norm = 0.0;
    for (std::size_t i = 1; i < f.r.size(); ++i)
        norm += (f.r[i] - f.r[i - 1]) * (f.f[i] * f.f[i] + f.f[i] * f.f[i - 1] + f.f[i - 1] * f.f[i - 1]) / 3;
    const double lambda = fd_spectrum(p, dom, 19999, 1).eigenvalues[0];
    CHECK(q / norm == doctest::Approx(lambda - e0_of(p.lattice)).epsilon(1e-2));
}

#include "welsh/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "welsh/error.hpp"
#include "welsh/phase.hpp"

namespace welsh {

void TruncatedDomain::validate(const LatticeParams& lattice) const
{
    lattice.validate();
    if (!(std::isfinite(r_min) && std::isfinite(r_max)))
        throw Error(Errc::invalid_input, "domain: radii must be finite");
    if (!(r_min > 0.0)) throw Error(Errc::invalid_input, "domain: r_min must be positive");
    if (!(r_min < lattice.d / 2))
        throw Error(Errc::invalid_input, "domain: r_min must lie inside the first circle (r_min < d/2)");
    if (!(r_max > lattice.d / 2)) throw Error(Errc::invalid_input, "domain: r_max must exceed d/2");
}

std::string to_string(Method m)
{
    return m == Method::shooting ? "shooting" : "fd_oracle";
}

RadialSolution integrate_regular(const RadialParams& params, double energy, const TruncatedDomain& domain,
                                 double rel_tol)
{
    params.validate();
    domain.validate(params.lattice);
    const StartState start = regular_start(params, domain.r_min);
    IntegratorOptions options;
    options.rel_tol = rel_tol;
    return integrate_radial(params, energy, domain.r_min, domain.r_max, start.y, start.dy, options);
}

std::size_t zero_count(const RadialParams& params, double energy, const TruncatedDomain& domain)
{
    const RadialSolution sol = integrate_regular(params, energy, domain);
    std::size_t zeros = zero_crossings(prufer_trajectory(sol));
    // A zero landing exactly on r_max belongs to the boundary, not the interior.
    if (sol.back().y_minus == 0.0 && zeros > 0) --zeros;
    return zeros;
}

std::size_t oscillation_count(const RadialParams& params, double energy, const TruncatedDomain& domain)
{
    const double e0 = solve_threshold(params.lattice).E0();
    if (!(energy < e0)) throw Error(Errc::invalid_input, "oscillation_count: energy must lie below E0");
    return zero_count(params, energy, domain);
}

double spectral_floor(const RadialParams& params, const TruncatedDomain& domain)
{
    const double e0 = solve_threshold(params.lattice).E0();
    double step = 1.0;
    for (int i = 0; i < 64; ++i) {
        const double e = e0 - step;
        if (zero_count(params, e, domain) == 0) return e;
        step *= 2;
    }
    throw Error(Errc::convergence_failure, "spectral_floor: no eigenvalue-free energy found");
}

namespace {

struct Bracketing {
    const RadialParams& params;
    const TruncatedDomain& domain;
    double tol;
    EigenResult& out;

    void split(double lo, std::size_t n_lo, double hi, std::size_t n_hi)
    {
        if (n_hi <= n_lo) return;
        if (hi - lo <= tol) {
            const double mid = lo + (hi - lo) / 2;
            for (std::size_t k = n_lo; k < n_hi; ++k) {
                out.eigenvalues.push_back(mid);
                out.widths.push_back(hi - lo);
            }
            return;
        }
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            // bracket at floating-point resolution
            for (std::size_t k = n_lo; k < n_hi; ++k) {
                out.eigenvalues.push_back(mid);
                out.widths.push_back(hi - lo);
            }
            return;
        }
        const std::size_t n_mid = zero_count(params, mid, domain);
        split(lo, n_lo, mid, std::clamp(n_mid, n_lo, n_hi));
        split(mid, std::clamp(n_mid, n_lo, n_hi), hi, n_hi);
    }
};

} // namespace

EigenResult find_eigenvalues(const RadialParams& params, const TruncatedDomain& domain, double e_lo, double e_hi,
                             double tol)
{
    params.validate();
    domain.validate(params.lattice);
    if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(Errc::invalid_input, "find_eigenvalues: tol must be positive");
    const double e0 = solve_threshold(params.lattice).E0();
    if (!(std::isfinite(e_lo) && std::isfinite(e_hi)) || !(e_lo < e_hi) || e_hi > e0)
        throw Error(Errc::invalid_window, "find_eigenvalues: window must satisfy E_lo < E_hi <= E0");

    EigenResult out;
    out.domain = domain;
    out.method = Method::shooting;
    out.threshold = e0;

    const double hi = std::min(e_hi, e0 - kThresholdMargin);
    if (!(e_lo < hi)) return out;
    const std::size_t n_lo = zero_count(params, e_lo, domain);
    const std::size_t n_hi = zero_count(params, hi, domain);
    Bracketing{params, domain, tol, out}.split(e_lo, n_lo, hi, n_hi);
    return out;
}

EigenResult find_eigenvalues(const RadialParams& params, const TruncatedDomain& domain, double tol)
{
    const double e0 = solve_threshold(params.lattice).E0();
    const double floor = spectral_floor(params, domain);
    return find_eigenvalues(params, domain, floor, e0, tol);
}

// ---------------------------------------------------------------------------

double quadratic_form(const RadialParams& params, const SampledFunction& fn)
{
    params.validate();
    const auto& r = fn.r;
    const auto& f = fn.f;
    if (r.size() != f.size() || r.size() < 3)
        throw Error(Errc::invalid_input, "quadratic_form: need at least three samples of equal length");
    if (!(r.front() > 0.0)) throw Error(Errc::invalid_input, "quadratic_form: support must stay away from r = 0");
    double scale = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(f[i]))
            throw Error(Errc::invalid_input, "quadratic_form: non-finite sample");
        if (i > 0 && !(r[i] > r[i - 1])) throw Error(Errc::invalid_input, "quadratic_form: radii must increase");
        scale = std::max(scale, std::abs(f[i]));
    }
    const double edge_tol = 1e-12 * scale;
    if (std::abs(f.front()) > edge_tol || std::abs(f.back()) > edge_tol)
        throw Error(Errc::boundary_violation, "quadratic_form: f must vanish at both ends of its support");

    const double c = params.coupling();
    const double e0 = solve_threshold(params.lattice).E0();
    double kinetic = 0.0, centrifugal = 0.0, mass = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double r0 = r[i - 1], r1 = r[i], h = r1 - r0;
        const double f0 = f[i - 1], f1 = f[i];
        const double b = (f1 - f0) / h;
        const double a = f0 - b * r0; // f = a + b r on the segment
        kinetic += b * b * h;
        mass += h * (f0 * f0 + f0 * f1 + f1 * f1) / 3;
        centrifugal += a * a * (1 / r0 - 1 / r1) + 2 * a * b * std::log(r1 / r0) + b * b * h;
    }
    double delta = 0.0;
    for (std::size_t n = 0;; ++n) {
        const double rn = params.lattice.circle_radius(n);
        if (rn >= r.back()) break;
        if (rn <= r.front()) continue;
        const auto it = std::upper_bound(r.begin(), r.end(), rn);
        const std::size_t j = static_cast<std::size_t>(it - r.begin());
        const double t = (rn - r[j - 1]) / (r[j] - r[j - 1]);
        const double value = f[j - 1] + t * (f[j] - f[j - 1]);
        delta += value * value;
    }
    return kinetic + c * centrifugal + params.lattice.beta * delta - e0 * mass;
}

// ---------------------------------------------------------------------------

AssembledSpectrum assemble_spectrum(double alpha, const LatticeParams& lattice, const std::set<int>& l_set,
                                    const TruncatedDomain& domain, double e_lo, double e_hi, double tol)
{
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 1.0)
        throw Error(Errc::invalid_input, "assemble_spectrum: alpha must lie in [0, 1)");
    AssembledSpectrum out;
    for (int l : l_set) {
        const RadialParams params{lattice, alpha, l};
        EigenResult res = find_eigenvalues(params, domain, e_lo, e_hi, tol);
        if (alpha > 0.0 && alpha < 0.5 && params.coupling() >= 0.0 && res.count() > 0)
            throw Error(Errc::consistency, "assemble_spectrum: channel l = " + std::to_string(l) +
                                               " with c >= 0 produced eigenvalues below E0");
        for (double e : res.eigenvalues) out.merged.push_back({e, l});
        out.channels.emplace(l, std::move(res));
    }
    std::stable_sort(out.merged.begin(), out.merged.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.energy < b.energy; });
    return out;
}

} // namespace welsh

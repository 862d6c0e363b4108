#include "welsh/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "welsh/error.hpp"

namespace welsh {

FDGrid build_fd_grid(const RadialParams& params, const TruncatedDomain& domain, std::size_t n)
{
    params.validate();
    domain.validate(params.lattice);
    if (n < 100) throw Error(Errc::invalid_request, "fd grid: need at least 100 interior nodes");

    FDGrid g;
    g.n = n;
    g.r_min = domain.r_min;
    g.h = (domain.r_max - domain.r_min) / static_cast<double>(n + 1);
    g.off_diagonal = -1.0 / (g.h * g.h);
    g.diagonal.resize(n);
    const double c = params.coupling();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = g.node(i);
        g.diagonal[i] = 2.0 / (g.h * g.h) + c / (r * r);
    }
    for (std::size_t k = 0;; ++k) {
        const double rn = params.lattice.circle_radius(k);
        if (rn >= domain.r_max) break;
        const double pos = std::round((rn - g.r_min) / g.h) - 1.0;
        if (pos < 0.0 || pos >= static_cast<double>(n)) continue; // snaps onto a Dirichlet end
        const auto node = static_cast<std::size_t>(pos);
        g.diagonal[node] += params.lattice.beta / g.h;
        g.circles.push_back({rn, node});
    }
    return g;
}

std::size_t fd_count_below(const FDGrid& grid, double x)
{
    // Sylvester inertia of T - x I from the LDL^T pivots.
    const long double b2 = static_cast<long double>(grid.off_diagonal) * grid.off_diagonal;
    const long double tiny = std::numeric_limits<long double>::min() * 1e10L;
    std::size_t count = 0;
    long double q = 1.0L;
    for (std::size_t i = 0; i < grid.n; ++i) {
        q = static_cast<long double>(grid.diagonal[i]) - x - (i == 0 ? 0.0L : b2 / q);
        if (q == 0.0L) q = -tiny;
        if (q < 0.0L) ++count;
    }
    return count;
}

namespace {

std::pair<double, double> gershgorin(const FDGrid& g)
{
    const double off = 2 * std::abs(g.off_diagonal);
    auto [lo, hi] = std::minmax_element(g.diagonal.begin(), g.diagonal.end());
    return {*lo - off, *hi + off};
}

/// Eigenvalue number `index` (0-based) by bisection to floating-point resolution.
double bisect_eigenvalue(const FDGrid& g, std::size_t index, double lo, double hi)
{
    for (int it = 0; it < 200; ++it) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        if (fd_count_below(g, mid) > index)
            hi = mid;
        else
            lo = mid;
    }
    return lo + (hi - lo) / 2;
}

} // namespace

EigenResult fd_spectrum(const RadialParams& params, const TruncatedDomain& domain, std::size_t n, std::size_t k)
{
    if (k < 1 || k > n) throw Error(Errc::invalid_request, "fd_spectrum: need 1 <= k <= n");
    const FDGrid g = build_fd_grid(params, domain, n);
    auto [lo, hi] = gershgorin(g);

    EigenResult out;
    out.domain = domain;
    out.method = Method::fd_oracle;
    out.threshold = solve_threshold(params.lattice).E0();
    for (std::size_t j = 0; j < k; ++j) {
        const double e = bisect_eigenvalue(g, j, lo, hi);
        out.eigenvalues.push_back(e);
        out.widths.push_back(std::abs(e) * std::numeric_limits<double>::epsilon() * 4);
        lo = std::nextafter(e, lo); // eigenvalue j+1 >= eigenvalue j
    }
    return out;
}

SampledFunction fd_eigenvector(const FDGrid& g, std::size_t index)
{
    if (index >= g.n) throw Error(Errc::invalid_request, "fd_eigenvector: index out of range");
    auto [lo, hi] = gershgorin(g);
    const double lambda = bisect_eigenvalue(g, index, lo, hi);
    // Shift slightly off the eigenvalue so the factorisation stays regular.
    const double sigma = lambda - 1e-10 * std::max(1.0, std::abs(lambda));

    const std::size_t n = g.n;
    std::vector<double> x(n, 1.0), cp(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * std::sin(0.37 * static_cast<double>(i));
    const double b = g.off_diagonal;
    for (int iter = 0; iter < 4; ++iter) {
        // Thomas algorithm for (T - sigma) y = x.
        double denom = g.diagonal[0] - sigma;
        cp[0] = b / denom;
        rhs[0] = x[0] / denom;
        for (std::size_t i = 1; i < n; ++i) {
            denom = g.diagonal[i] - sigma - b * cp[i - 1];
            cp[i] = b / denom;
            rhs[i] = (x[i] - b * rhs[i - 1]) / denom;
        }
        x[n - 1] = rhs[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = rhs[i] - cp[i] * x[i + 1];
        double norm = 0.0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm * g.h);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw Error(Errc::convergence_failure, "fd_eigenvector: inverse iteration broke down");
        for (double& v : x) v /= norm;
    }
    // Fix the sign so the largest component is positive.
    const auto peak = std::max_element(x.begin(), x.end(), [](double a, double c) { return std::abs(a) < std::abs(c); });
    if (*peak < 0) for (double& v : x) v = -v;

    SampledFunction out;
    out.r.reserve(n + 2);
    out.f.reserve(n + 2);
    out.r.push_back(g.r_min);
    out.f.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out.r.push_back(g.node(i));
        out.f.push_back(x[i]);
    }
    out.r.push_back(g.r_min + static_cast<double>(n + 1) * g.h);
    out.f.push_back(0.0);
    return out;
}

} // namespace welsh

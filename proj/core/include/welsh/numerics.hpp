#pragma once

// Small numerical kernels shared by the modules: a safeguarded bracketed
// root finder and adaptive Simpson quadrature.

#include <cmath>
#include <limits>

#include "welsh/error.hpp"

namespace welsh::numerics {

template <typename T>
struct RootResult {
    T root;
    int iterations;
};

/// Bisection on [lo, hi] with a secant (regula falsi, Illinois weighting)
/// trial step; a secant step that falls outside the bracket or stalls is
/// replaced by bisection. Requires f(lo), f(hi) of opposite sign.
template <typename T, typename F>
RootResult<T> bracketed_root(F&& f, T lo, T hi, int max_iter = 400)
{
    T flo = f(lo);
    T fhi = f(hi);
    if (flo == T(0)) return {lo, 0};
    if (fhi == T(0)) return {hi, 0};
    if ((flo > 0) == (fhi > 0))
        throw Error(Errc::convergence_failure, "bracketed_root: no sign change on bracket");

    int side = 0;
    for (int it = 1; it <= max_iter; ++it) {
        T x = (lo * fhi - hi * flo) / (fhi - flo);
        const T width = hi - lo;
        if (!(x > lo && x < hi) || it % 4 == 0) x = lo + width / 2;

        const T fx = f(x);
        if (fx == T(0)) return {x, it};
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
            if (side == -1) fhi /= 2;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo /= 2;
            side = 1;
        }
        const T mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) return {std::abs(flo) < std::abs(fhi) ? lo : hi, it};
    }
    throw Error(Errc::convergence_failure, "bracketed_root: iteration cap reached");
}

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth, int& evaluations)
{
    const double lm = (a + m) / 2;
    const double rm = (m + b) / 2;
    const double flm = f(lm);
    const double frm = f(rm);
    evaluations += 2;
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1, evaluations)
         + simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1, evaluations);
}

} // namespace detail

/// Adaptive Simpson with Richardson correction. The tolerance is relative to
/// the magnitude of a coarse first estimate of the integral over 8 panels.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-12, int max_depth = 48)
{
    if (a == b) return 0.0;
    constexpr int panels = 8;
    const double h = (b - a) / panels;
    double coarse = 0.0;
    double fx[2 * panels + 1];
    for (int i = 0; i <= 2 * panels; ++i) fx[i] = f(a + i * h / 2);
    for (int p = 0; p < panels; ++p) coarse += h / 6 * (fx[2 * p] + 4 * fx[2 * p + 1] + fx[2 * p + 2]);

    const double scale = std::abs(coarse) > 0 ? std::abs(coarse) : std::numeric_limits<double>::min();
    const double tol = rel_tol * scale;
    int evaluations = 0;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double hi = lo + h;
        const double whole = h / 6 * (fx[2 * p] + 4 * fx[2 * p + 1] + fx[2 * p + 2]);
        total += detail::simpson_step(f, lo, fx[2 * p], hi, fx[2 * p + 2], lo + h / 2, fx[2 * p + 1],
                                      whole, tol / panels, max_depth, evaluations);
    }
    return total;
}

} // namespace welsh::numerics

#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "hmap/errors.hpp"

namespace hmap {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 40;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 10)
            throw std::invalid_argument("QuadratureSpec: need abs_tol>0, rel_tol>0, max_depth>=10");
    }
};

namespace detail {

template <class F>
double simpson_panel(F&& f, double a, double fa, double m, double fm, double b, double fb,
                     double whole, double tol, int depth, const QuadratureSpec& spec) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw std::domain_error("quad_adaptive: non-finite integrand value");
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    if (depth >= spec.max_depth)
        throw AccuracyError("quad_adaptive: max_depth exhausted",
                            left + right + delta / 15.0, std::abs(delta) / 15.0);
    return simpson_panel(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1, spec) +
           simpson_panel(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1, spec);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [lo, hi] with Richardson correction.
/// Deterministic for a fixed spec; throws AccuracyError on depth exhaustion
/// (carrying the best estimate) and std::domain_error on non-finite values.
template <class F>
    requires std::invocable<F&, double>
double quad_adaptive(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("quad_adaptive: non-finite interval");
    if (lo == hi) return 0.0;
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    const double m = 0.5 * (lo + hi);
    const double fa = f(lo);
    const double fm = f(m);
    const double fb = f(hi);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
        throw std::domain_error("quad_adaptive: non-finite integrand value");
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = spec.abs_tol + spec.rel_tol * std::abs(whole);
    return sign * detail::simpson_panel(f, lo, fa, m, fm, hi, fb, whole, tol, 0, spec);
}

} // namespace hmap

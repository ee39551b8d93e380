#pragma once

// Test-only numeric oracles, kept independent of the library's quadrature and
// ODE paths: fixed-order composite Gauss-Legendre panels and bisection.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

// 10-point Gauss-Legendre nodes/weights on [-1, 1]
inline constexpr double kGaussX[5] = {0.14887433898163121, 0.43339539412924719,
                                      0.67940956829902441, 0.86506336668898451,
                                      0.97390652851717172};
inline constexpr double kGaussW[5] = {0.29552422471475287, 0.26926671930999635,
                                      0.21908636251598204, 0.14945134915058059,
                                      0.066671344308688138};

template <class F>
double gauss_panel(F&& f, double a, double b) {
    const double xm = 0.5 * (a + b), xr = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) {
        const double dx = xr * kGaussX[k];
        s += kGaussW[k] * (f(xm + dx) + f(xm - dx));
    }
    return s * xr;
}

template <class F>
double gauss(F&& f, double a, double b, int panels = 512) {
    double s = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) s += gauss_panel(f, a + p * h, a + (p + 1) * h);
    return s;
}

// find root of g on [lo, hi] with g(lo), g(hi) of opposite sign
template <class G>
double bisect(G&& g, double lo, double hi, int iters = 200) {
    double flo = g(lo);
    if (flo == 0.0) return lo;
    if (g(hi) == 0.0) return hi;
    if ((flo > 0) == (g(hi) > 0)) throw std::invalid_argument("bisect: no sign change");
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle

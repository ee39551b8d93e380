#include "hmap/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmap {

namespace {

constexpr int kAgmMax = 32;

JacobiValues jacobi_agm(double v, double n) {
    // 0 <= n <= 1 assumed here
    if (n < 1e-14) {
        const double corr = 0.25 * n * (v - std::sin(v) * std::cos(v));
        const double sn = std::sin(v) - corr * std::cos(v);
        const double cn = std::cos(v) + corr * std::sin(v);
        return {sn, cn, std::sqrt(1.0 - n * sn * sn)};
    }
    if (n > 1.0 - 1e-14) {
        // separatrix limit: sn = tanh, cn = dn = sech
        const double sn = std::tanh(v);
        const double sech = 1.0 / std::cosh(v);
        return {sn, sech, sech};
    }

    double a[kAgmMax + 1], c[kAgmMax + 1];
    a[0] = 1.0;
    c[0] = std::sqrt(n);
    double b = std::sqrt(1.0 - n);
    int m = 0;
    while (m < kAgmMax) {
        const double an = 0.5 * (a[m] + b);
        const double cn1 = 0.5 * (a[m] - b);
        b = std::sqrt(a[m] * b);
        ++m;
        a[m] = an;
        c[m] = cn1;
        if (std::abs(cn1) <= 4.0 * 2.22e-16 * an) break;
    }
    double phi = std::ldexp(a[m] * v, m);
    for (int i = m; i >= 1; --i) {
        const double s = std::clamp(c[i] * std::sin(phi) / a[i], -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    return {sn, cn, std::sqrt(std::max(0.0, 1.0 - n * sn * sn))};
}

} // namespace

JacobiValues jacobi_elliptic(double v, double n) {
    if (!std::isfinite(v) || !std::isfinite(n))
        throw std::invalid_argument("jacobi_elliptic: non-finite input");
    if (n > 1.0 + 1e-14) {
        // reciprocal parameter (A&S 16.11)
        const double rn = std::sqrt(n);
        const JacobiValues t = jacobi_elliptic(rn * v, 1.0 / n);
        return {t.sn / rn, t.dn, t.cn};
    }
    if (n < -1e-14) {
        // negative parameter (A&S 16.10): mu = -n/(1-n), v' = v sqrt(1-n)
        const double omn = 1.0 - n;
        const double mu = -n / omn;
        const JacobiValues t = jacobi_elliptic(v * std::sqrt(omn), mu);
        return {t.sn / (t.dn * std::sqrt(omn)), t.cn / t.dn, 1.0 / t.dn};
    }
    return jacobi_agm(v, std::clamp(n, 0.0, 1.0));
}

namespace detail {

double carlson_rf(double x, double y, double z) {
    constexpr double kTol = 2.5e-3; // series truncation keeps ~1e-17 accuracy
    if (x < 0.0 || y < 0.0 || z < 0.0 || (x + y) == 0.0 || (y + z) == 0.0 || (x + z) == 0.0)
        throw std::domain_error("carlson_rf: invalid arguments");
    double mu, dx, dy, dz;
    for (int i = 0; i < 200; ++i) {
        mu = (x + y + z) / 3.0;
        dx = 1.0 - x / mu;
        dy = 1.0 - y / mu;
        dz = 1.0 - z / mu;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kTol) break;
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    const double e2 = dx * dy - dz * dz;
    const double e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

} // namespace detail

double incomplete_elliptic_f(double phi, double n) {
    if (!std::isfinite(phi) || !std::isfinite(n))
        throw std::invalid_argument("incomplete_elliptic_f: non-finite input");
    constexpr double kHalfPi = 1.57079632679489661923;
    if (std::abs(phi) > kHalfPi + 1e-12)
        throw std::invalid_argument("incomplete_elliptic_f: |phi| > pi/2");
    const double s = std::sin(phi);
    const double c2 = std::max(0.0, 1.0 - s * s);
    const double w = 1.0 - n * s * s;
    if (w <= 0.0) throw std::domain_error("incomplete_elliptic_f: n sin^2(phi) >= 1");
    return s * detail::carlson_rf(c2, w, 1.0);
}

double complete_elliptic_k(double n) {
    if (!(n < 1.0)) throw std::domain_error("complete_elliptic_k: need n < 1");
    return detail::carlson_rf(0.0, 1.0 - n, 1.0);
}

} // namespace hmap

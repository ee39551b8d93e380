#include <doctest.h>

#include <cmath>

#include "hmap/elliptic.hpp"
#include "hmap/quadrature.hpp"
#include "oracles.hpp"

using namespace hmap;

namespace {

// invert the defining integral F(phi|n) = v by bisection over phi, with the
// integral itself evaluated by composite Gauss panels (independent oracle)
double sn_oracle(double v, double n) {
    auto F = [n](double phi) {
        return oracle::gauss(
            [n](double psi) { return 1.0 / std::sqrt(1.0 - n * std::sin(psi) * std::sin(psi)); },
            0.0, phi, 400);
    };
    const double phi = oracle::bisect([&](double p) { return F(p) - v; }, 0.0, 1.5707963267948966);
    return std::sin(phi);
}

} // namespace

TEST_CASE("identity cases at v = 0") {
    for (double n : {0.0, 0.3, 1.0, 4.0, -2.0}) {
        const auto j = jacobi_elliptic(0.0, n);
        CHECK(j.sn == 0.0);
        CHECK(j.cn == 1.0);
        CHECK(j.dn == 1.0);
    }
}

TEST_CASE("degenerate parameter n = 1 gives tanh/sech") {
    for (double v : {-1.5, -0.3, 0.2, 0.9, 2.0}) {
        const auto j = jacobi_elliptic(v, 1.0);
        CHECK(std::abs(j.sn - std::tanh(v)) < 1e-12);
        CHECK(std::abs(j.dn - 1.0 / std::cosh(v)) < 1e-12);
    }
}

TEST_CASE("frozen reference values") {
    // oracle: bisection inversion of the defining integral (also run live below)
    const auto j = jacobi_elliptic(0.7, 0.25);
    CHECK(std::abs(j.sn - 0.634293276335112372) < 1e-12);
    CHECK(std::abs(j.cn - 0.773092516841334311) < 1e-12);
    CHECK(std::abs(j.dn - 0.948376512730580646) < 1e-12);
    CHECK(std::abs(j.sn - sn_oracle(0.7, 0.25)) < 1e-12);

    const auto r = jacobi_elliptic(0.8, 4.0); // reciprocal-parameter branch
    CHECK(std::abs(r.sn - 0.498621079551363504) < 1e-12);
    CHECK(std::abs(r.cn - 0.866820061504712077) < 1e-12);
    CHECK(std::abs(r.dn - 0.0742164140074910322) < 1e-12);

    const auto m = jacobi_elliptic(0.8, -2.0); // negative-parameter branch
    CHECK(std::abs(m.sn - 0.81599780378443984) < 1e-12);
    CHECK(std::abs(m.cn - 0.578055001032748455) < 1e-12);
    CHECK(std::abs(m.dn - 1.52699208628010197) < 1e-12);
}

TEST_CASE("paper identity sn(x|4) = (1/2) sn(2x|1/4) on [-1,1]") {
    for (int k = 0; k <= 40; ++k) {
        const double x = -1.0 + 0.05 * k;
        const double lhs = jacobi_elliptic(x, 4.0).sn;
        const double rhs = 0.5 * jacobi_elliptic(2.0 * x, 0.25).sn;
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("reciprocal-parameter identity for general n > 1") {
    for (double n : {1.7, 4.0, 25.0}) {
        for (int k = 0; k <= 10; ++k) {
            const double v = -1.0 + 0.2 * k;
            const double lhs = jacobi_elliptic(v, n).sn;
            const double rhs = jacobi_elliptic(std::sqrt(n) * v, 1.0 / n).sn / std::sqrt(n);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("algebraic identities across all parameter branches") {
    for (double n : {0.0, 0.1, 0.85, 0.999, 1.0, 2.5, 4.0, 40.0, -0.4, -3.0}) {
        for (int k = 0; k <= 16; ++k) {
            const double v = -2.0 + 0.25 * k;
            const auto j = jacobi_elliptic(v, n);
            CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) <= 1e-12);
            CHECK(std::abs(j.dn * j.dn + n * j.sn * j.sn - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("incomplete F basics") {
    for (double phi : {-1.2, -0.4, 0.0, 0.7, 1.5}) {
        CHECK(std::abs(incomplete_elliptic_f(phi, 0.0) - phi) < 1e-14);
    }
    CHECK(std::abs(incomplete_elliptic_f(1.0471975511965977, 0.5) - 1.14242905804577726) < 1e-12);
    CHECK(std::abs(incomplete_elliptic_f(0.4, -1.5) - 0.385916488230278842) < 1e-12);
    // adaptive-quadrature oracle on the t-form integral
    const double phi = 1.0471975511965977;
    const double want = quad_adaptive(
        [](double t) { return 1.0 / std::sqrt((1.0 - t * t) * (1.0 - 0.5 * t * t)); }, 0.0,
        std::sin(phi), QuadratureSpec{1e-13, 1e-13, 45});
    CHECK(std::abs(incomplete_elliptic_f(phi, 0.5) - want) < 1e-12);
}

TEST_CASE("F inverts sn on the principal range") {
    for (double n : {0.2, 0.8, 3.0, -1.2}) {
        for (double v : {0.08, 0.25, 0.4}) {
            const auto j = jacobi_elliptic(v, n);
            const double back = incomplete_elliptic_f(std::asin(j.sn), n);
            CHECK(std::abs(back - v) < 1e-12);
        }
    }
}

TEST_CASE("complete K") {
    CHECK(std::abs(complete_elliptic_k(0.25) - 1.68575035481259604) < 1e-13);
    CHECK(std::abs(complete_elliptic_k(0.0) - 1.5707963267948966) < 1e-14);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(jacobi_elliptic(std::nan(""), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(incomplete_elliptic_f(1.5707963267948966, 1.2), std::domain_error);
    CHECK_THROWS_AS(incomplete_elliptic_f(2.5, 0.5), std::invalid_argument);
}

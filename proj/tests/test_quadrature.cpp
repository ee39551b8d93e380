#include <doctest.h>

#include <cmath>

#include "hmap/quadrature.hpp"
#include "oracles.hpp"

using namespace hmap;

TEST_CASE("constant and identity integrands") {
    CHECK(quad_adaptive([](double) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // the X integral for w == 0: cosh(0) sin(pi/2) = 1
    for (double x : {0.25, 1.0, -0.7}) {
        CHECK(std::abs(quad_adaptive([](double) { return 1.0; }, 0.0, x) - x) < 1e-14);
    }
    CHECK(quad_adaptive([](double t) { return t; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("closed-form arcsin oracle") {
    // int_0^1 dt/sqrt(1 - t^2/2) = sqrt(2) arcsin(1/sqrt2)
    const double got = quad_adaptive([](double t) { return 1.0 / std::sqrt(1.0 - 0.5 * t * t); },
                                     0.0, 1.0);
    const double want = std::sqrt(2.0) * std::asin(1.0 / std::sqrt(2.0));
    CHECK(std::abs(got - want) < 1e-10);
}

TEST_CASE("exact on cubics") {
    auto poly = [](double t) { return ((3.0 * t - 2.0) * t + 5.0) * t - 1.0; };
    const double got = quad_adaptive(poly, -1.0, 2.0);
    // antiderivative (3/4)t^4 - (2/3)t^3 + (5/2)t^2 - t
    auto anti = [](double t) {
        return ((0.75 * t - 2.0 / 3.0) * t + 2.5) * t * t - t;
    };
    CHECK(std::abs(got - (anti(2.0) - anti(-1.0))) < 1e-14);
}

TEST_CASE("orientation and determinism") {
    auto f = [](double t) { return std::exp(-t) * std::sin(3.0 * t); };
    const double a = quad_adaptive(f, 0.0, 2.0);
    CHECK(std::abs(quad_adaptive(f, 2.0, 0.0) + a) < 1e-15);
    CHECK(quad_adaptive(f, 0.0, 2.0) == a); // bitwise repeatable
    CHECK(std::abs(a - oracle::gauss(f, 0.0, 2.0)) < 1e-10);
}

TEST_CASE("tolerance contract on a smooth oscillatory integrand") {
    QuadratureSpec tight;
    tight.abs_tol = tight.rel_tol = 1e-12;
    auto f = [](double t) { return std::cos(20.0 * t) + 0.3 * std::sin(7.0 * t); };
    const double want = std::sin(40.0) / 20.0 + 0.3 * (1.0 - std::cos(14.0)) / 7.0;
    CHECK(std::abs(quad_adaptive(f, 0.0, 2.0, tight) - want) < 1e-11);
}

TEST_CASE("depth exhaustion carries the best estimate") {
    QuadratureSpec shallow;
    shallow.abs_tol = shallow.rel_tol = 1e-15;
    shallow.max_depth = 10;
    auto nasty = [](double t) { return std::sqrt(std::abs(t - 0.37)); };
    try {
        quad_adaptive(nasty, 0.0, 1.0, shallow);
        FAIL("expected AccuracyError");
    } catch (const AccuracyError& e) {
        CHECK(e.best_estimate == doctest::Approx(0.41).epsilon(0.1));
        CHECK(e.error_bound > 0.0);
    }
}

TEST_CASE("non-finite integrand is a domain error") {
    CHECK_THROWS_AS(quad_adaptive([](double t) { return 1.0 / t; }, -1.0, 1.0),
                    std::domain_error);
    QuadratureSpec bad;
    bad.max_depth = 5;
    CHECK_THROWS_AS(quad_adaptive([](double) { return 1.0; }, 0.0, 1.0, bad),
                    std::invalid_argument);
}

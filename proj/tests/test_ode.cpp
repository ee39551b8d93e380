#include <doctest.h>

#include <array>
#include <cmath>

#include "hmap/ode.hpp"

using namespace hmap;

namespace {
const OdeRhs kHarmonic = [](double, std::span<const double> y, std::span<double> d) {
    d[0] = y[1];
    d[1] = -y[0];
};
const OdeRhs kSineGordon = [](double, std::span<const double> y, std::span<double> d) {
    d[0] = y[1];
    d[1] = -2.0 * std::sin(2.0 * y[0]);
};
} // namespace

TEST_CASE("constant solution") {
    const OdeRhs rhs = [](double, std::span<const double>, std::span<double> d) { d[0] = 0.0; };
    const std::array<double, 1> y0{3.5};
    auto sol = ode_integrate(rhs, y0, 0.0, 2.0);
    CHECK(sol.eval(1.3, 0) == doctest::Approx(3.5).epsilon(1e-15));
}

TEST_CASE("harmonic oscillator hits sin at pi/2") {
    const std::array<double, 2> y0{0.0, 1.0};
    auto end = ode_endpoint(kHarmonic, y0, 0.0, 1.57079632679489661923);
    CHECK(std::abs(end[0] - 1.0) < 1e-9);
}

TEST_CASE("dense output matches the analytic solution everywhere") {
    const std::array<double, 2> y0{0.0, 1.0};
    OdeSpec spec;
    spec.max_step = 0.5;
    auto sol = ode_integrate(kHarmonic, y0, 0.0, 6.0, spec);
    double worst = 0.0;
    for (int k = 0; k <= 600; ++k) {
        const double x = 0.01 * k;
        worst = std::max(worst, std::abs(sol.eval(x, 0) - std::sin(x)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("sine-Gordon conservation over [0,3]") {
    const std::array<double, 2> y0{0.0, 1.0};
    auto sol = ode_integrate(kSineGordon, y0, 0.0, 3.0);
    const double c2 = 1.0; // theta'(0)^2 + 4 sin^2 theta(0)
    double worst = 0.0;
    for (int k = 0; k <= 300; ++k) {
        const double x = 0.01 * k;
        const double th = sol.eval(x, 0), dth = sol.eval(x, 1);
        worst = std::max(worst, std::abs(dth * dth + 4.0 * std::sin(th) * std::sin(th) - c2));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("bidirectional integration covers both sides") {
    const std::array<double, 2> y0{0.0, 1.0};
    auto sol = ode_integrate_bidirectional(kHarmonic, y0, 0.0, -2.0, 2.0);
    CHECK(std::abs(sol.eval(-1.0, 0) + std::sin(1.0)) < 1e-9);
    CHECK(std::abs(sol.eval(1.0, 0) - std::sin(1.0)) < 1e-9);
    CHECK_THROWS_AS(sol.eval(3.0, 0), std::domain_error);
}

TEST_CASE("finite-time blowup raises stiffness error") {
    // y' = y^2 from y(0)=1 blows up at x=1
    const OdeRhs rhs = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[0] * y[0];
    };
    const std::array<double, 1> y0{1.0};
    CHECK_THROWS_AS(ode_endpoint(rhs, y0, 0.0, 2.0), StiffnessError);
}

TEST_CASE("bad spec rejected") {
    OdeSpec s;
    s.step_tol = 0.0;
    const std::array<double, 1> y0{0.0};
    const OdeRhs rhs = [](double, std::span<const double>, std::span<double> d) { d[0] = 1.0; };
    CHECK_THROWS_AS(ode_integrate(rhs, y0, 0.0, 1.0, s), std::invalid_argument);
}

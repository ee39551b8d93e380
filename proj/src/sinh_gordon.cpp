#include "hmap/sinh_gordon.hpp"

#include <array>
#include <cmath>

namespace hmap {

bool SeparableSolution::defined(double x, double y) const {
    if (!x_range.contains(x) || !y_range.contains(y)) return false;
    const double t = F(x) * G(y);
    return std::isfinite(t) && std::abs(t) < 1.0 - guard_eps;
}

double SeparableSolution::w(double x, double y) const {
    const double t = F(x) * G(y);
    if (!std::isfinite(t) || std::abs(t) >= 1.0)
        throw std::domain_error("SeparableSolution::w: |F G| >= 1");
    return 2.0 * std::atanh(t);
}

double SeparableSolution::b(double x) const {
    const double f = F(x);
    if (f == 0.0 || !std::isfinite(f))
        throw std::domain_error("SeparableSolution::b: F(x) vanishes");
    return dF(x) / (2.0 * f);
}

namespace {

double quartic_f(const OdeCoefficients& c, double F) {
    return ((c.A * F * F + c.B) * F * F + c.C);
}
double quartic_g(const OdeCoefficients& c, double G) {
    return ((-c.C * G * G - (c.B - 4.0)) * G * G - c.A);
}

void check_consistency(const char* which, double d0, double quartic) {
    const double lhs = d0 * d0;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(quartic)});
    if (std::abs(lhs - quartic) > 1e-10 * scale)
        throw std::invalid_argument(std::string("make_separable: initial data for ") + which +
                                    " violates the first-order relation");
}

void check_invariant(const SeparableSolution& sol) {
    constexpr int kSamples = 65;
    auto sweep = [&](const Interval& r, auto&& residual) {
        for (int i = 0; i < kSamples; ++i) {
            const double t = r.lo + (r.hi - r.lo) * i / (kSamples - 1);
            if (residual(t) > 1e-8)
                throw AccuracyError("make_separable: first-order invariant drift exceeds 1e-8");
        }
    };
    sweep(sol.x_range, [&](double x) {
        const double F = sol.F(x), dF = sol.dF(x);
        const double rhs = quartic_f(sol.coeffs, F);
        const double scale = std::max({1.0, dF * dF, std::abs(rhs)});
        return std::abs(dF * dF - rhs) / scale;
    });
    sweep(sol.y_range, [&](double y) {
        const double G = sol.G(y), dG = sol.dG(y);
        const double rhs = quartic_g(sol.coeffs, G);
        const double scale = std::max({1.0, dG * dG, std::abs(rhs)});
        return std::abs(dG * dG - rhs) / scale;
    });
}

} // namespace

SeparableSolution make_separable(const OdeCoefficients& coeffs, double F0, double dF0, double G0,
                                 double dG0, Interval x_range, Interval y_range,
                                 const OdeSpec& spec) {
    if (coeffs.A == 0.0 && coeffs.B == 0.0 && coeffs.C == 0.0)
        throw std::invalid_argument("make_separable: coefficients all zero");
    if (!x_range.contains(0.0) || !y_range.contains(0.0))
        throw std::invalid_argument("make_separable: ranges must contain the origin");
    check_consistency("F", dF0, quartic_f(coeffs, F0));
    check_consistency("G", dG0, quartic_g(coeffs, G0));

    // non-constant per the separable characterization
    const bool f_const = (dF0 == 0.0) && (2.0 * coeffs.A * F0 * F0 * F0 + coeffs.B * F0 == 0.0);
    const bool g_const =
        (dG0 == 0.0) && (-2.0 * coeffs.C * G0 * G0 * G0 - (coeffs.B - 4.0) * G0 == 0.0);
    if (f_const) throw std::invalid_argument("make_separable: F must be non-constant");
    if (g_const) throw std::invalid_argument("make_separable: G must be non-constant");

    // second-order forms avoid the square-root sign ambiguity at turning points
    const double A = coeffs.A, B = coeffs.B, C = coeffs.C;
    OdeRhs rhs_f = [A, B](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = 2.0 * A * y[0] * y[0] * y[0] + B * y[0];
    };
    OdeRhs rhs_g = [B, C](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = -2.0 * C * y[0] * y[0] * y[0] - (B - 4.0) * y[0];
    };
    const std::array<double, 2> yf0{F0, dF0}, yg0{G0, dG0};
    auto fsol = std::make_shared<DenseSolution>(
        ode_integrate_bidirectional(rhs_f, yf0, 0.0, x_range.lo, x_range.hi, spec));
    auto gsol = std::make_shared<DenseSolution>(
        ode_integrate_bidirectional(rhs_g, yg0, 0.0, y_range.lo, y_range.hi, spec));

    SeparableSolution sol;
    sol.coeffs = coeffs;
    sol.provenance = Provenance::ode;
    sol.F0 = F0;
    sol.dF0 = dF0;
    sol.G0 = G0;
    sol.dG0 = dG0;
    sol.x_range = x_range;
    sol.y_range = y_range;
    sol.F = [fsol](double x) { return fsol->eval(x, 0); };
    sol.dF = [fsol](double x) { return fsol->eval(x, 1); };
    sol.G = [gsol](double y) { return gsol->eval(y, 0); };
    sol.dG = [gsol](double y) { return gsol->eval(y, 1); };
    check_invariant(sol);
    return sol;
}

void KenmotsuParams::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(w0 > 0.0))
        throw std::invalid_argument("KenmotsuParams: need alpha, beta, w0 > 0");
    const double ch = std::cosh(w0);
    if (!(ch > 1.0) || std::abs(alpha + beta - ch) > 1e-9 * ch)
        throw std::invalid_argument("KenmotsuParams: alpha + beta must equal cosh(w0) > 1");
}

SeparableSolution make_kenmotsu(const KenmotsuParams& p, Interval x_range, Interval y_range,
                                const OdeSpec& spec) {
    p.validate();
    if (!x_range.contains(0.0) || !y_range.contains(0.0))
        throw std::invalid_argument("make_kenmotsu: ranges must contain the origin");
    const double T0 = std::tanh(0.5 * p.w0);

    // f'' = 2 f^3 - 4(1+alpha^2-beta^2) f, state (f, f', int f); g likewise
    const double cf = 4.0 * (1.0 + p.alpha * p.alpha - p.beta * p.beta);
    const double cg = 4.0 * (1.0 + p.beta * p.beta - p.alpha * p.alpha);
    auto make_rhs = [](double lin) {
        return OdeRhs([lin](double, std::span<const double> y, std::span<double> d) {
            d[0] = y[1];
            d[1] = 2.0 * y[0] * y[0] * y[0] - lin * y[0];
            d[2] = y[0];
        });
    };
    const std::array<double, 3> f0{0.0, -4.0 * p.alpha, 0.0}, g0{0.0, -4.0 * p.beta, 0.0};
    auto fsol = std::make_shared<DenseSolution>(
        ode_integrate_bidirectional(make_rhs(cf), f0, 0.0, x_range.lo, x_range.hi, spec));
    auto gsol = std::make_shared<DenseSolution>(
        ode_integrate_bidirectional(make_rhs(cg), g0, 0.0, y_range.lo, y_range.hi, spec));

    SeparableSolution sol;
    const double B = 2.0 * (1.0 + p.alpha * p.alpha - p.beta * p.beta);
    sol.coeffs = {(4.0 * p.alpha - B) / (2.0 * T0 * T0), B, -T0 * T0 * (B + 4.0 * p.alpha) / 2.0};
    sol.provenance = Provenance::kenmotsu;
    sol.F0 = T0;
    sol.dF0 = 0.0;
    sol.G0 = 1.0;
    sol.dG0 = 0.0;
    sol.x_range = x_range;
    sol.y_range = y_range;
    sol.F = [fsol, T0](double x) { return T0 * std::exp(-fsol->eval(x, 2)); };
    sol.dF = [fsol, T0](double x) {
        const auto s = fsol->eval(x);
        return -s[0] * T0 * std::exp(-s[2]);
    };
    sol.G = [gsol](double y) { return std::exp(-gsol->eval(y, 2)); };
    sol.dG = [gsol](double y) {
        const auto s = gsol->eval(y);
        return -s[0] * std::exp(-s[2]);
    };
    check_invariant(sol);
    return sol;
}

SeparableSolution example3_solution(Interval x_range, Interval y_range) {
    SeparableSolution sol;
    sol.coeffs = {-4.0, 4.0, 0.0};
    sol.provenance = Provenance::closed_form;
    sol.F0 = 1.0;
    sol.dF0 = 0.0;
    sol.G0 = 0.0;
    sol.dG0 = 2.0;
    sol.x_range = x_range;
    sol.y_range = y_range;
    sol.F = [](double x) { return 1.0 / std::cosh(2.0 * x); };
    sol.dF = [](double x) {
        const double s = 1.0 / std::cosh(2.0 * x);
        return -2.0 * s * std::tanh(2.0 * x);
    };
    sol.G = [](double y) { return 2.0 * y; };
    sol.dG = [](double) { return 2.0; };
    return sol;
}

SeparableSolution example5_solution(Interval x_range, Interval y_range) {
    constexpr double kQuarterPi = 0.78539816339744830962;
    if (x_range.lo <= -kQuarterPi || x_range.hi >= kQuarterPi)
        throw std::invalid_argument("example5_solution: x range must stay inside |x| < pi/4");
    SeparableSolution sol;
    const double r2 = std::sqrt(2.0);
    sol.coeffs = {8.0, -4.0, 0.0};
    sol.provenance = Provenance::closed_form;
    sol.F0 = r2 / 2.0;
    sol.dF0 = 0.0;
    sol.G0 = 1.0;
    sol.dG0 = 0.0;
    sol.x_range = x_range;
    sol.y_range = y_range;
    sol.F = [r2](double x) { return (r2 / 2.0) / std::cos(2.0 * x); };
    sol.dF = [r2](double x) {
        const double c = std::cos(2.0 * x);
        return r2 * std::sin(2.0 * x) / (c * c);
    };
    sol.G = [r2](double y) { return std::cosh(2.0 * r2 * y); };
    sol.dG = [r2](double y) { return 2.0 * r2 * std::sinh(2.0 * r2 * y); };
    return sol;
}

ScalarField sample_separable_w(const SeparableSolution& sol, const GridSpec& grid) {
    return mask_singular([&sol](double x, double y) { return sol.w(x, y); }, grid,
                         [&sol](double x, double y) { return sol.defined(x, y); });
}

ResidualReport sinh_gordon_residual(const ScalarField& w, double tolerance) {
    const ScalarField lap = fd_laplacian(w);
    std::vector<double> res;
    res.reserve(static_cast<size_t>(lap.valid_count()));
    for (int j = 0; j < w.grid.ny; ++j)
        for (int i = 0; i < w.grid.nx; ++i) {
            if (!lap.valid(i, j)) continue;
            res.push_back(lap.at(i, j) - 2.0 * std::sinh(2.0 * w.at(i, j)));
        }
    return ResidualReport::from_samples("sinh_gordon", res, tolerance);
}

ResidualReport sinh_gordon_residual_scaled(const ScalarField& w, double tolerance) {
    const ScalarField lap = fd_laplacian(w);
    std::vector<double> res;
    res.reserve(static_cast<size_t>(lap.valid_count()));
    for (int j = 0; j < w.grid.ny; ++j)
        for (int i = 0; i < w.grid.nx; ++i) {
            if (!lap.valid(i, j)) continue;
            const double rhs = 2.0 * std::sinh(2.0 * w.at(i, j));
            res.push_back((lap.at(i, j) - rhs) / std::max(1.0, std::abs(rhs)));
        }
    return ResidualReport::from_samples("sinh_gordon_scaled", res, tolerance);
}

} // namespace hmap

#include "hmap/map_builder.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace hmap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_base(const BaseValues& base) {
    if (base.S00 == 0.0 || !std::isfinite(base.S00) || !std::isfinite(base.R00))
        throw std::invalid_argument("map builder: base values need finite R00 and S00 != 0");
}

// grid x-indices in marching order away from the anchor x = 0
struct AxisSplit {
    std::vector<int> up;   // x >= 0, ascending
    std::vector<int> down; // x < 0, descending
};
AxisSplit split_axis(const GridSpec& g, bool x_axis) {
    AxisSplit s;
    const int n = x_axis ? g.nx : g.ny;
    int first_up = 0;
    while (first_up < n && (x_axis ? g.x(first_up) : g.y(first_up)) < 0.0) ++first_up;
    for (int i = first_up; i < n; ++i) s.up.push_back(i);
    for (int i = first_up - 1; i >= 0; --i) s.down.push_back(i);
    return s;
}

// march a state along one axis with per-cell endpoint integration; dead ends
// (singular path) mask the remainder of the direction
template <class Visit>
void march_cells(const OdeRhs& rhs, std::span<const double> state0, const std::vector<int>& order,
                 const std::function<double(int)>& coord, const OdeSpec& spec, Visit&& visit) {
    std::vector<double> state(state0.begin(), state0.end());
    double prev = 0.0;
    for (int idx : order) {
        const double target = coord(idx);
        try {
            state = ode_endpoint(rhs, state, prev, target, spec);
        } catch (const std::exception&) {
            break;
        }
        prev = target;
        visit(idx, state);
    }
}

} // namespace

QuadratureIntegrals quadrature_integrals(const BtPair& pair, const OdeSpec& spec) {
    auto guard = [pair](double x, double y) {
        if (!pair.valid(x, y)) throw std::domain_error("quadrature_integrals: masked path");
    };
    OdeRhs axis_rhs = [pair, guard](double t, std::span<const double> s, std::span<double> d) {
        guard(t, 0.0);
        const double chw = std::cosh(pair.w(t, 0.0));
        d[0] = chw * pair.sin_theta(t, 0.0);
        d[1] = std::exp(2.0 * s[0]) * chw * pair.cos_theta(t, 0.0);
    };
    auto fiber_state = [pair, guard, spec](double x, double y) {
        OdeRhs rhs = [&pair, &guard, x](double s, std::span<const double> v,
                                        std::span<double> d) {
            guard(x, s);
            const double shw = std::sinh(pair.w(x, s));
            d[0] = shw * pair.cos_theta(x, s);
            d[1] = std::exp(2.0 * v[0]) * shw * pair.sin_theta(x, s);
        };
        const std::array<double, 2> zero{0.0, 0.0};
        return ode_endpoint(rhs, zero, 0.0, y, spec);
    };

    QuadratureIntegrals out;
    out.I1 = [axis_rhs, spec](double x) {
        const std::array<double, 2> zero{0.0, 0.0};
        return ode_endpoint(axis_rhs, zero, 0.0, x, spec)[0];
    };
    out.I3 = [axis_rhs, spec](double x) {
        const std::array<double, 2> zero{0.0, 0.0};
        return ode_endpoint(axis_rhs, zero, 0.0, x, spec)[1];
    };
    out.I2 = [fiber_state](double x, double y) { return fiber_state(x, y)[0]; };
    out.I4 = [fiber_state, axis_rhs, spec](double x, double y) {
        const std::array<double, 2> zero{0.0, 0.0};
        const double i1 = ode_endpoint(axis_rhs, zero, 0.0, x, spec)[0];
        return std::exp(2.0 * i1) * fiber_state(x, y)[1];
    };
    return out;
}

MapField build_quadrature(const BtPair& pair, const BaseValues& base, const GridSpec& grid,
                          const OdeSpec& spec) {
    check_base(base);
    grid.validate();
    MapField out(grid);
    out.base = base;

    auto guard = [&pair](double x, double y) {
        if (!pair.valid(x, y)) throw std::domain_error("build_quadrature: masked path");
    };

    // axis pass: d/dt (I1, I3) = (cosh w sin th, e^{2 I1} cosh w cos th) at y = 0
    OdeRhs axis_rhs = [&](double t, std::span<const double> s, std::span<double> d) {
        guard(t, 0.0);
        const double chw = std::cosh(pair.w(t, 0.0));
        d[0] = chw * pair.sin_theta(t, 0.0);
        d[1] = std::exp(2.0 * s[0]) * chw * pair.cos_theta(t, 0.0);
    };
    std::vector<double> I1(grid.nx, kNaN), I3(grid.nx, kNaN);
    const AxisSplit xs = split_axis(grid, true);
    const std::array<double, 2> zero2{0.0, 0.0};
    auto record_axis = [&](int i, const std::vector<double>& s) {
        I1[i] = s[0];
        I3[i] = s[1];
    };
    auto xcoord = std::function<double(int)>([&grid](int i) { return grid.x(i); });
    march_cells(axis_rhs, zero2, xs.up, xcoord, spec, record_axis);
    march_cells(axis_rhs, zero2, xs.down, xcoord, spec, record_axis);

    // fiber pass: d/ds (I2, H4) = (sinh w cos th, e^{2 I2} sinh w sin th);
    // I4 = e^{2 I1(x)} H4. BT0 pairs carry Y in the state so that sin/cos of
    // theta come from the half-angle form instead of a nested integral.
    const AxisSplit ys = split_axis(grid, false);
    auto ycoord = std::function<double(int)>([&grid](int j) { return grid.y(j); });
    const bool fused = (pair.tag == BtPair::Tag::BT0) && (pair.separable != nullptr);

    for (int i = 0; i < grid.nx; ++i) {
        if (!std::isfinite(I1[i])) continue;
        const double x = grid.x(i);
        const double e2i1 = std::exp(2.0 * I1[i]);

        auto emit = [&](int j, double I2, double H4) {
            const double S = base.S00 * e2i1 * std::exp(2.0 * I2);
            const double R = base.R00 + 2.0 * base.S00 * (I3[i] - e2i1 * H4);
            if (!std::isfinite(S) || !std::isfinite(R) || S == 0.0) return;
            const size_t k = out.idx(i, j);
            out.R[k] = R;
            out.S[k] = S;
            out.mask[k] = 1;
        };

        if (fused) {
            const SeparableSolution& sol = *pair.separable;
            double bx;
            try {
                bx = sol.b(x);
            } catch (const std::domain_error&) {
                continue;
            }
            if (!std::isfinite(bx) || std::abs(bx * bx - 1.0) <= 1e-8) continue;
            const double Fx = sol.F(x);
            const double cap = 1.0 - sol.guard_eps;
            OdeRhs fiber_rhs = [&, bx, Fx, cap](double s, std::span<const double> v,
                                                std::span<double> d) {
                const double fg = Fx * sol.G(s);
                if (!std::isfinite(fg) || std::abs(fg) >= cap)
                    throw std::domain_error("build_quadrature: masked path");
                const double shw = 2.0 * fg / (1.0 - fg * fg);
                const HalfAngle ha = theta_half_tangent(bx, v[0]);
                d[0] = shw;
                d[1] = shw * ha.cos_theta();
                d[2] = std::exp(2.0 * v[1]) * shw * ha.sin_theta();
            };
            const std::array<double, 3> zero3{0.0, 0.0, 0.0};
            auto visit = [&](int j, const std::vector<double>& s) { emit(j, s[1], s[2]); };
            march_cells(fiber_rhs, zero3, ys.up, ycoord, spec, visit);
            march_cells(fiber_rhs, zero3, ys.down, ycoord, spec, visit);
        } else {
            OdeRhs fiber_rhs = [&, x](double s, std::span<const double> v, std::span<double> d) {
                guard(x, s);
                const double shw = std::sinh(pair.w(x, s));
                d[0] = shw * pair.cos_theta(x, s);
                d[1] = std::exp(2.0 * v[0]) * shw * pair.sin_theta(x, s);
            };
            const std::array<double, 2> zero{0.0, 0.0};
            auto visit = [&](int j, const std::vector<double>& s) { emit(j, s[0], s[1]); };
            march_cells(fiber_rhs, zero, ys.up, ycoord, spec, visit);
            march_cells(fiber_rhs, zero, ys.down, ycoord, spec, visit);
        }
    }
    return out;
}

MapField build_newclass(const SeparableSolution& sol, const BaseValues& base,
                        const GridSpec& grid, const OdeSpec& spec) {
    check_base(base);
    grid.validate();
    if (!sol.bt0_eligible())
        throw std::invalid_argument("build_newclass: solution is not BT0-eligible");
    MapField out(grid);
    out.base = base;

    // X(x) = int_0^x cosh w(t,0) dt, accumulated cell by cell
    const double G0 = sol.G(0.0);
    const double cap = 1.0 - sol.guard_eps;
    OdeRhs axis_rhs = [&](double t, std::span<const double>, std::span<double> d) {
        const double fg = sol.F(t) * G0;
        if (!std::isfinite(fg) || std::abs(fg) >= cap)
            throw std::domain_error("build_newclass: masked path");
        d[0] = (1.0 + fg * fg) / (1.0 - fg * fg);
    };
    std::vector<double> X(grid.nx, kNaN);
    const AxisSplit xs = split_axis(grid, true);
    auto xcoord = std::function<double(int)>([&grid](int i) { return grid.x(i); });
    const std::array<double, 1> zero1{0.0};
    auto record = [&](int i, const std::vector<double>& s) { X[i] = s[0]; };
    march_cells(axis_rhs, zero1, xs.up, xcoord, spec, record);
    march_cells(axis_rhs, zero1, xs.down, xcoord, spec, record);

    const AxisSplit ys = split_axis(grid, false);
    auto ycoord = std::function<double(int)>([&grid](int j) { return grid.y(j); });

    for (int i = 0; i < grid.nx; ++i) {
        if (!std::isfinite(X[i])) continue;
        const double x = grid.x(i);
        double bx;
        try {
            bx = sol.b(x);
        } catch (const std::domain_error&) {
            continue;
        }
        if (!std::isfinite(bx) || std::abs(bx * bx - 1.0) <= 1e-8) continue;
        if (std::abs(1.0 + bx) <= 1e-9) continue; // division singularity at b = -1
        const double Fx = sol.F(x);
        const double scale = base.S00 * std::exp(2.0 * X[i]) / (1.0 + bx);

        OdeRhs fiber_rhs = [&, Fx](double s, std::span<const double>, std::span<double> d) {
            const double fg = Fx * sol.G(s);
            if (!std::isfinite(fg) || std::abs(fg) >= cap)
                throw std::domain_error("build_newclass: masked path");
            d[0] = 2.0 * fg / (1.0 - fg * fg);
        };
        auto visit = [&](int j, const std::vector<double>& s) {
            const HalfAngle ha = theta_half_tangent(bx, s[0]);
            const double S = scale * (ha.sin_theta() + bx);
            const double R = base.R00 + scale * ha.cos_theta();
            if (!std::isfinite(S) || !std::isfinite(R) || S == 0.0) return;
            const size_t k = out.idx(i, j);
            out.R[k] = R;
            out.S[k] = S;
            out.mask[k] = 1;
        };
        march_cells(fiber_rhs, zero1, ys.up, ycoord, spec, visit);
        march_cells(fiber_rhs, zero1, ys.down, ycoord, spec, visit);
    }
    return out;
}

namespace {

struct SolitonConstants {
    double a, b, ab, T0, cos2k, D;
    std::complex<double> sqrt_ab, k;
};

double require_real_c(std::complex<double> z, const char* what) {
    if (std::isfinite(z.real()) && std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real())))
        throw AccuracyError(std::string(what) + ": imaginary residue exceeds 1e-10");
    return z.real();
}

SolitonConstants soliton_constants(const SolitonTheta& st, double w00, const char* who) {
    SolitonConstants c;
    c.a = st.a;
    c.b = st.b;
    c.ab = st.a * st.b;
    if (std::abs(c.b) <= 1e-12 * std::max(1.0, std::abs(c.a)))
        throw DegenerateParameterError(std::string(who) +
                                       ": b = 0 (linear-G limit not constructed)");
    if (std::abs(c.ab) <= 1e-12)
        throw DegenerateParameterError(std::string(who) + ": ab = 0 limit not constructed");
    c.T0 = std::tanh(0.5 * w00);
    if (std::abs(c.a + c.b * c.T0 * c.T0) <= 1e-12 * std::max(1.0, std::abs(c.a)))
        throw DegenerateParameterError(std::string(who) + ": base data sits on the BT0 boundary");
    const std::complex<double> ca(c.a, 0.0), cb(c.b, 0.0);
    c.sqrt_ab = std::sqrt(ca * cb);
    c.k = std::atan(-c.T0 / std::sqrt(ca / cb));
    c.cos2k = require_real_c(std::cos(2.0 * c.k), who);
    c.D = 2.0 * std::cos(st.theta0) * c.cos2k - st.dtheta0;
    if (!std::isfinite(c.D) || std::abs(c.D) <= 1e-12)
        throw DegenerateParameterError(std::string(who) + ": degenerate base denominator");
    return c;
}

} // namespace

MapField build_soliton(const SolitonTheta& st, double w00, const BaseValues& base,
                       const GridSpec& grid, const OdeSpec& spec) {
    check_base(base);
    grid.validate();
    if (grid.x_min < st.range.lo || grid.x_max > st.range.hi)
        throw std::invalid_argument("build_soliton: grid exceeds the theta evaluator range");
    const SolitonConstants sc = soliton_constants(st, w00, "build_soliton");
    MapField out(grid);
    out.base = base;

    // I3 accumulated with the radical-free integrand
    //   (u^2 + T0^2)(b u^2 + a) / (4 u^2 (1 - T0^2)),  u(t) = (2 cos th - th')/b;
    // equals (1/2) cosh^2(w00/2) J(u(x)) wherever int sin theta is monotone.
    const double omT2 = 1.0 - sc.T0 * sc.T0;
    OdeRhs axis_rhs = [&](double t, std::span<const double>, std::span<double> d) {
        const double u = (2.0 * std::cos(st.theta(t)) - st.dtheta(t)) / sc.b;
        if (!std::isfinite(u) || std::abs(u) < 1e-14)
            throw std::domain_error("build_soliton: u(x) collapsed");
        const double u2 = u * u;
        d[0] = (u2 + sc.T0 * sc.T0) * (sc.b * u2 + sc.a) / (4.0 * u2 * omT2);
    };
    std::vector<double> I3(grid.nx, kNaN);
    const AxisSplit xs = split_axis(grid, true);
    auto xcoord = std::function<double(int)>([&grid](int i) { return grid.x(i); });
    const std::array<double, 1> zero1{0.0};
    auto record = [&](int i, const std::vector<double>& s) { I3[i] = s[0]; };
    march_cells(axis_rhs, zero1, xs.up, xcoord, spec, record);
    march_cells(axis_rhs, zero1, xs.down, xcoord, spec, record);

    // cos(sqrt(ab) y + 2k) per row, realness asserted
    std::vector<double> cy(grid.ny);
    for (int j = 0; j < grid.ny; ++j)
        cy[j] = require_real_c(std::cos(sc.sqrt_ab * grid.y(j) + 2.0 * sc.k), "build_soliton");

    for (int i = 0; i < grid.nx; ++i) {
        if (!std::isfinite(I3[i])) continue;
        const double x = grid.x(i);
        const double cth = std::cos(st.theta(x));
        const double sth = std::sin(st.theta(x));
        const double dth = st.dtheta(x);
        for (int j = 0; j < grid.ny; ++j) {
            const double S = base.S00 * (2.0 * cth * cy[j] - dth) / sc.D;
            const double I4 = sth * (cy[j] - sc.cos2k) / sc.D;
            const double R = base.R00 + 2.0 * base.S00 * (I3[i] - I4);
            if (!std::isfinite(S) || !std::isfinite(R) || S == 0.0) continue;
            const size_t k = out.idx(i, j);
            out.R[k] = R;
            out.S[k] = S;
            out.mask[k] = 1;
        }
    }
    return out;
}

double j_integral(const SolitonTheta& st, double w00, double t, const QuadratureSpec& spec) {
    if (!std::isfinite(t)) throw std::invalid_argument("j_integral: non-finite endpoint");
    const SolitonConstants sc = soliton_constants(st, w00, "j_integral");
    const double c2 = 4.0 - sc.ab;
    if (c2 < -1e-12) throw std::domain_error("j_integral: radicand negative everywhere");
    const double c = std::sqrt(std::max(c2, 0.0));
    const double babs = std::abs(sc.b);
    const double r1 = std::abs(c - 2.0) / babs;
    const double r2 = (c + 2.0) / babs;

    double ulo = std::min(1.0, t), uhi = std::max(1.0, t);
    const double slack = 1e-9 * std::max(1.0, r2 - r1);
    if (ulo < r1 - slack || uhi > r2 + slack)
        throw std::domain_error("j_integral: radicand negative inside the integration range");
    ulo = std::max(ulo, r1);
    uhi = std::min(uhi, r2);
    if (ulo >= uhi) return 0.0;

    const double T02 = sc.T0 * sc.T0;
    auto num = [&](double u) { return (u * u + T02) * (sc.b * u * u + sc.a) / (u * u); };

    // substitute u = r1 + s^2 on the lower half and u = r2 - s^2 on the upper
    // half; either removes the inverse-square-root endpoint singularity
    const double um = 0.5 * (ulo + uhi);
    auto lower = [&](double s) {
        const double u = r1 + s * s;
        return 2.0 * num(u) / (babs * std::sqrt((r2 - u) * (u + r1) * (r2 + u)));
    };
    auto upper = [&](double s) {
        const double u = r2 - s * s;
        return 2.0 * num(u) / (babs * std::sqrt((u - r1) * (u + r1) * (r2 + u)));
    };
    const double left =
        quad_adaptive(lower, std::sqrt(ulo - r1), std::sqrt(um - r1), spec);
    const double right =
        quad_adaptive(upper, std::sqrt(r2 - uhi), std::sqrt(r2 - um), spec);
    const double value = left + right;
    return (t >= 1.0) ? value : -value;
}

} // namespace hmap

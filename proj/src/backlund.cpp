#include "hmap/backlund.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "hmap/elliptic.hpp"

namespace hmap {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.57079632679489661923;

double require_real(std::complex<double> z, const char* what) {
    if (std::isfinite(z.real()) && std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real())))
        throw AccuracyError(std::string(what) + ": imaginary residue exceeds 1e-10");
    return z.real();
}

// phase c1 with sn(c1|n) = sin theta0, cn(c1|n) = cos theta0, c dn(c1|n) = theta'0
double soliton_phase(double theta0, double dtheta0, double c_signed, double c_mag) {
    const double s0 = std::sin(theta0);
    const double co0 = std::cos(theta0);
    if (std::abs(c_mag - 2.0) <= 1e-12) {
        // separatrix: sn(v|1) = tanh v
        return std::atanh(s0);
    }
    if (c_mag > 2.0) {
        // rotation, n < 1, dn > 0; flip cn sign via half-period reflection
        const double n = 4.0 / (c_mag * c_mag);
        const double base = incomplete_elliptic_f(std::asin(std::clamp(s0, -1.0, 1.0)), n);
        return (co0 >= 0.0) ? base : 2.0 * complete_elliptic_k(n) - base;
    }
    // libration about 0, n > 1: work in the reciprocal parameter
    const double n = 4.0 / (c_mag * c_mag);
    const double mu = 1.0 / n;
    const double st = std::clamp(std::sqrt(n) * s0, -1.0, 1.0);
    double v = incomplete_elliptic_f(std::asin(st), mu);
    if (dtheta0 / c_signed < 0.0) v = 2.0 * complete_elliptic_k(mu) - v;
    return v / std::sqrt(n);
}

} // namespace

SolitonTheta soliton_theta(double theta0, double dtheta0, Interval range, const OdeSpec& spec) {
    if (!std::isfinite(theta0) || !std::isfinite(dtheta0))
        throw std::invalid_argument("soliton_theta: non-finite initial data");
    if (!range.contains(0.0))
        throw std::invalid_argument("soliton_theta: range must contain the origin");

    OdeRhs rhs = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = -2.0 * std::sin(2.0 * y[0]);
    };
    const std::array<double, 2> y0{theta0, dtheta0};
    auto sol = std::make_shared<DenseSolution>(
        ode_integrate_bidirectional(rhs, y0, 0.0, range.lo, range.hi, spec));

    SolitonTheta st;
    st.theta = [sol](double x) { return sol->eval(x, 0); };
    st.dtheta = [sol](double x) { return sol->eval(x, 1); };
    st.theta0 = theta0;
    st.dtheta0 = dtheta0;
    st.range = range;
    st.a = 2.0 * std::cos(theta0) + dtheta0;
    st.b = 2.0 * std::cos(theta0) - dtheta0;
    st.constant = (dtheta0 == 0.0) && (std::abs(std::sin(2.0 * theta0)) < 1e-15);

    const double s0 = std::sin(theta0);
    const double c_mag = std::sqrt(dtheta0 * dtheta0 + 4.0 * s0 * s0);
    // theta' keeps one sign on rotations and the separatrix; the signed c
    // matches theta'(x) = c dn(cx + c1 | n)
    st.c = (c_mag >= 2.0 - 1e-12 && dtheta0 < 0.0) ? -c_mag : c_mag;

    if (st.constant || c_mag == 0.0) {
        st.c1 = std::numeric_limits<double>::quiet_NaN();
        st.elliptic_form_valid = false;
        return st;
    }
    const bool around_zero = std::cos(theta0) > 0.0 || c_mag > 2.0 + 1e-12;
    st.elliptic_form_valid = around_zero;
    st.c1 = around_zero ? soliton_phase(theta0, dtheta0, st.c, c_mag)
                        : std::numeric_limits<double>::quiet_NaN();
    return st;
}

// ---------------------------------------------------------------------------

double HalfAngle::sin_theta() const {
    const double n2 = N * N + D * D;
    return 2.0 * N * D / n2;
}

double HalfAngle::cos_theta() const {
    const double n2 = N * N + D * D;
    return (D * D - N * N) / n2;
}

HalfAngle theta_half_tangent(double b, double Y) {
    if (!std::isfinite(b) || !std::isfinite(Y))
        throw std::invalid_argument("theta_half_tangent: non-finite input");
    const double disc = b * b - 1.0;
    if (std::abs(disc) <= 1e-12)
        throw DegenerateParameterError("theta_half_tangent: b = +-1 has no limit form");
    if (disc > 0.0) {
        const double B = std::sqrt(disc);
        const double J = std::atan((b + 1.0) / B) + B * Y;
        return {B * std::sin(J) - std::cos(J), b * std::cos(J)};
    }
    // |b| < 1: the lemma formula reduces over sqrt(b^2-1) = i q to an
    // elementary real form with no cancellation at b = 0
    const double q = std::sqrt(-disc);
    const double tp = std::tanh(q * Y);
    return {q + (1.0 + b) * tp, q - (1.0 + b) * tp};
}

std::complex<double> theta_half_tangent_complex(double b, double Y) {
    const std::complex<double> cb(b, 0.0);
    const std::complex<double> root = std::sqrt(cb * cb - 1.0);
    const std::complex<double> j1 = std::atan((cb + 1.0) / root);
    return (root * std::tan(j1 + root * Y) - 1.0) / cb;
}

// ---------------------------------------------------------------------------

double x_integral(const SeparableSolution& sol, double x, const QuadratureSpec& spec) {
    const double G0 = sol.G(0.0);
    const double cap = 1.0 - sol.guard_eps;
    auto integrand = [&](double t) {
        const double fg = sol.F(t) * G0;
        if (!std::isfinite(fg) || std::abs(fg) >= cap)
            throw std::domain_error("x_integral: singular path, |F G(0)| >= 1 - 1e-6");
        const double fg2 = fg * fg;
        return (1.0 + fg2) / (1.0 - fg2);
    };
    return quad_adaptive(integrand, 0.0, x, spec);
}

double y_integral(const SeparableSolution& sol, double x, double y, const QuadratureSpec& spec) {
    const double Fx = sol.F(x);
    const double cap = 1.0 - sol.guard_eps;
    auto integrand = [&](double s) {
        const double fg = Fx * sol.G(s);
        if (!std::isfinite(fg) || std::abs(fg) >= cap)
            throw std::domain_error("y_integral: singular path, |F G| >= 1 - 1e-6");
        return 2.0 * fg / (1.0 - fg * fg);
    };
    return quad_adaptive(integrand, 0.0, y, spec);
}

namespace {

// Continuation of theta along one x-fiber: keeps the running Y integral and
// the unwrapped branch of theta, refining steps until each raw increment is
// below pi/2.
class ThetaMarcher {
public:
    ThetaMarcher(const SeparableSolution& sol, double x, QuadratureSpec spec)
        : sol_(sol), spec_(spec), x_(x), b_(sol.b(x)) {
        if (std::abs(b_ * b_ - 1.0) <= 1e-12)
            throw DegenerateParameterError("theta_bt0: b(x) = +-1 has no limit form");
        theta_ = kHalfPi;
    }

    void advance(double y) {
        while (s_ != y) {
            double h = y - s_;
            bool full = true;
            for (;;) {
                const double s_next = full ? y : s_ + h;
                const double Ynew = Y_ + y_segment(s_, s_next);
                const HalfAngle ha = theta_half_tangent(b_, Ynew);
                const double raw = 2.0 * std::atan2(ha.N, ha.D);
                const double unwrapped =
                    raw + 2.0 * kPi * std::round((theta_ - raw) / (2.0 * kPi));
                if (std::abs(unwrapped - theta_) <= kHalfPi) {
                    s_ = s_next;
                    Y_ = Ynew;
                    theta_ = unwrapped;
                    break;
                }
                h *= 0.5;
                full = false;
                if (std::abs(h) < 1e-12 * std::max(1.0, std::abs(y)))
                    throw AccuracyError("theta_bt0: branch continuation failed");
            }
        }
    }

    double theta() const { return theta_; }
    double y_value() const { return Y_; }

private:
    double y_segment(double s0, double s1) const {
        const double Fx = sol_.F(x_);
        const double cap = 1.0 - sol_.guard_eps;
        auto integrand = [&](double s) {
            const double fg = Fx * sol_.G(s);
            if (!std::isfinite(fg) || std::abs(fg) >= cap)
                throw std::domain_error("theta_bt0: singular path, |F G| >= 1 - 1e-6");
            return 2.0 * fg / (1.0 - fg * fg);
        };
        return quad_adaptive(integrand, s0, s1, spec_);
    }

    const SeparableSolution& sol_;
    QuadratureSpec spec_;
    double x_;
    double b_;
    double s_ = 0.0;
    double Y_ = 0.0;
    double theta_ = kHalfPi;
};

} // namespace

double theta_bt0(const SeparableSolution& sol, double x, double y, const QuadratureSpec& spec) {
    if (!sol.bt0_eligible())
        throw std::invalid_argument("theta_bt0: solution is not BT0-eligible (dG(0) != 0)");
    ThetaMarcher marcher(sol, x, spec);
    marcher.advance(y);
    return marcher.theta();
}

ScalarField sample_theta_bt0(const SeparableSolution& sol, const GridSpec& grid) {
    if (!sol.bt0_eligible())
        throw std::invalid_argument("sample_theta_bt0: solution is not BT0-eligible");
    grid.validate();
    ScalarField raw(grid);
    QuadratureSpec qspec;
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        double bx;
        try {
            bx = sol.b(x);
        } catch (const std::domain_error&) {
            continue; // F(x) = 0: fiber masked
        }
        if (!std::isfinite(bx) || std::abs(bx * bx - 1.0) <= 1e-8) continue;

        auto march_side = [&](int j_from, int j_step) {
            try {
                ThetaMarcher m(sol, x, qspec);
                for (int j = j_from; j >= 0 && j < grid.ny; j += j_step) {
                    m.advance(grid.y(j));
                    raw.set(i, j, m.theta());
                }
            } catch (const std::exception&) {
                // singular path or failed continuation: rest of fiber masked
            }
        };
        // split the fiber at y = 0 and march outward in both directions
        int j_up = 0;
        while (j_up < grid.ny && grid.y(j_up) < 0.0) ++j_up;
        march_side(j_up, +1);
        march_side(j_up - 1, -1);
    }
    if (raw.valid_count() == 0) throw EmptyFieldError("sample_theta_bt0: all nodes masked");
    return raw;
}

// ---------------------------------------------------------------------------

SeparableSolution w_from_theta(const SolitonTheta& st, double w00, Interval x_range,
                               Interval y_range) {
    if (!std::isfinite(w00)) throw std::invalid_argument("w_from_theta: non-finite w00");
    if (x_range.lo < st.range.lo || x_range.hi > st.range.hi)
        throw std::invalid_argument("w_from_theta: x range exceeds the theta evaluator");
    const double a = st.a, b = st.b;
    if (std::abs(b) <= 1e-12 * std::max(1.0, std::abs(a)))
        throw DegenerateParameterError("w_from_theta: b = 0 (linear-G limit not constructed)");
    if (std::abs(a * b) <= 1e-12)
        throw DegenerateParameterError("w_from_theta: ab = 0 limit not constructed");

    const double T0 = std::tanh(0.5 * w00);
    if (std::abs(a + b * T0 * T0) <= 1e-12 * std::max(1.0, std::abs(a)))
        throw DegenerateParameterError("w_from_theta: base data sits on the BT0 boundary");

    const std::complex<double> ca(a, 0.0), cb(b, 0.0);
    const std::complex<double> sqrt_ab = std::sqrt(ca * cb);
    const std::complex<double> sqrt_a_over_b = std::sqrt(ca / cb);
    const std::complex<double> k = std::atan(-T0 / sqrt_a_over_b);

    auto theta_fn = st.theta;
    auto dtheta_fn = st.dtheta;

    SeparableSolution sol;
    sol.coeffs = {-a * a / 4.0, (8.0 - a * b) / 2.0, -b * b / 4.0};
    sol.provenance = Provenance::ode;
    sol.x_range = x_range;
    sol.y_range = y_range;
    sol.F = [theta_fn, dtheta_fn, a](double x) {
        return (dtheta_fn(x) + 2.0 * std::cos(theta_fn(x))) / a;
    };
    sol.dF = [theta_fn, dtheta_fn, a](double x) {
        // F = e^{-2I} with I' = sin theta, so F' = -2 F sin theta
        return -2.0 * std::sin(theta_fn(x)) * (dtheta_fn(x) + 2.0 * std::cos(theta_fn(x))) / a;
    };
    sol.G = [sqrt_ab, sqrt_a_over_b, k](double y) {
        const std::complex<double> val = -sqrt_a_over_b * std::tan(0.5 * sqrt_ab * y + k);
        return require_real(val, "w_from_theta: G");
    };
    sol.dG = [a, b, G = sol.G](double y) {
        const double g = G(y);
        return -0.5 * (b * g * g + a);
    };
    sol.F0 = 1.0;
    sol.dF0 = -2.0 * std::sin(st.theta0);
    sol.G0 = sol.G(0.0);
    sol.dG0 = sol.dG(0.0);
    if (std::abs(sol.G0 - T0) > 1e-9 * std::max(1.0, std::abs(T0)))
        throw AccuracyError("w_from_theta: G(0) does not reproduce tanh(w00/2)");
    return sol;
}

// ---------------------------------------------------------------------------

BtPair trivial_pair() {
    BtPair p;
    p.tag = BtPair::Tag::BT;
    p.w = [](double, double) { return 0.0; };
    p.sin_theta = [](double, double) { return 1.0; };
    p.cos_theta = [](double, double) { return 0.0; };
    p.theta = [](double, double) { return kHalfPi; };
    p.valid = [](double, double) { return true; };
    p.theta_valid = p.valid;
    return p;
}

BtPair soliton_pair(const SolitonTheta& st, std::shared_ptr<const SeparableSolution> wsol) {
    BtPair p;
    p.tag = BtPair::Tag::BT;
    auto theta_fn = st.theta;
    const Interval xr = st.range;
    p.w = [wsol](double x, double y) { return wsol->w(x, y); };
    p.sin_theta = [theta_fn](double x, double) { return std::sin(theta_fn(x)); };
    p.cos_theta = [theta_fn](double x, double) { return std::cos(theta_fn(x)); };
    p.theta = [theta_fn](double x, double) { return theta_fn(x); };
    p.valid = [wsol, xr](double x, double y) { return xr.contains(x) && wsol->defined(x, y); };
    p.theta_valid = [xr](double x, double) { return xr.contains(x); };
    p.separable = std::move(wsol);
    return p;
}

BtPair bt0_pair(std::shared_ptr<const SeparableSolution> sol) {
    if (!sol->bt0_eligible())
        throw std::invalid_argument("bt0_pair: solution is not BT0-eligible");
    BtPair p;
    p.tag = BtPair::Tag::BT0;
    p.separable = sol;
    p.w = [sol](double x, double y) { return sol->w(x, y); };
    p.valid = [sol](double x, double y) {
        if (!sol->defined(x, y)) return false;
        const double f = sol->F(x);
        if (f == 0.0 || !std::isfinite(f)) return false;
        const double bx = sol->dF(x) / (2.0 * f);
        return std::isfinite(bx) && std::abs(bx * bx - 1.0) > 1e-8;
    };
    p.theta_valid = p.valid;
    p.sin_theta = [sol](double x, double y) {
        return theta_half_tangent(sol->b(x), y_integral(*sol, x, y)).sin_theta();
    };
    p.cos_theta = [sol](double x, double y) {
        return theta_half_tangent(sol->b(x), y_integral(*sol, x, y)).cos_theta();
    };
    p.theta = [sol](double x, double y) { return theta_bt0(*sol, x, y); };
    return p;
}

// ---------------------------------------------------------------------------

namespace {

void check_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (a.nx != b.nx || a.ny != b.ny || a.x_min != b.x_min || a.x_max != b.x_max ||
        a.y_min != b.y_min || a.y_max != b.y_max)
        throw std::invalid_argument(std::string(what) + ": fields on different grids");
}

} // namespace

BtResiduals bt_residual(const ScalarField& w, const ScalarField& theta, double tolerance) {
    check_same_grid(w.grid, theta.grid, "bt_residual");

    ScalarField W(w.grid), Th(w.grid);
    for (int j = 0; j < w.grid.ny; ++j)
        for (int i = 0; i < w.grid.nx; ++i) {
            if (w.valid(i, j)) W.set(i, j, std::tanh(0.5 * w.at(i, j)));
            if (theta.valid(i, j)) {
                const double t = std::tan(0.5 * theta.at(i, j));
                if (std::isfinite(t) && std::abs(t) < 1e6) Th.set(i, j, t);
            }
        }

    const GradientFields gw = fd_gradient(w);
    const GradientFields gt = fd_gradient(theta);
    const GradientFields gW = fd_gradient(W);
    const GradientFields gT = fd_gradient(Th);

    std::vector<double> r1, r2, p1, p2;
    for (int j = 0; j < w.grid.ny; ++j)
        for (int i = 0; i < w.grid.nx; ++i) {
            if (gw.fx.valid(i, j) && gt.fx.valid(i, j)) {
                const double wv = w.at(i, j), tv = theta.at(i, j);
                r1.push_back(gw.fx.at(i, j) - gt.fy.at(i, j) +
                             2.0 * std::sinh(wv) * std::sin(tv));
                r2.push_back(gw.fy.at(i, j) + gt.fx.at(i, j) +
                             2.0 * std::cosh(wv) * std::cos(tv));
            }
            if (gW.fx.valid(i, j) && gT.fx.valid(i, j)) {
                const double Wv = W.at(i, j), Tv = Th.at(i, j);
                const double Wp = 1.0 - Wv * Wv, Tp = 1.0 + Tv * Tv;
                p1.push_back(gW.fx.at(i, j) * Tp - gT.fy.at(i, j) * Wp + 4.0 * Wv * Tv);
                p2.push_back(gW.fy.at(i, j) * Tp + gT.fx.at(i, j) * Wp +
                             (1.0 + Wv * Wv) * (1.0 - Tv * Tv));
            }
        }
    BtResiduals out;
    out.raw_x = ResidualReport::from_samples("backlund_raw_x", r1, tolerance);
    out.raw_y = ResidualReport::from_samples("backlund_raw_y", r2, tolerance);
    out.poly_x = ResidualReport::from_samples("backlund_poly_x", p1, tolerance);
    out.poly_y = ResidualReport::from_samples("backlund_poly_y", p2, tolerance);
    return out;
}

ResidualReport sine_gordon_residual(const ScalarField& theta, double tolerance) {
    const ScalarField lap = fd_laplacian(theta);
    std::vector<double> res;
    for (int j = 0; j < theta.grid.ny; ++j)
        for (int i = 0; i < theta.grid.nx; ++i) {
            if (!lap.valid(i, j)) continue;
            res.push_back(lap.at(i, j) + 2.0 * std::sin(2.0 * theta.at(i, j)));
        }
    return ResidualReport::from_samples("sine_gordon", res, tolerance);
}

ResidualReport sine_gordon_residual_scaled(const ScalarField& theta, double tolerance) {
    const ScalarField lap = fd_laplacian(theta);
    std::vector<double> res;
    for (int j = 0; j < theta.grid.ny; ++j)
        for (int i = 0; i < theta.grid.nx; ++i) {
            if (!lap.valid(i, j)) continue;
            const double rhs = -2.0 * std::sin(2.0 * theta.at(i, j));
            res.push_back((lap.at(i, j) - rhs) / std::max(1.0, std::abs(rhs)));
        }
    return ResidualReport::from_samples("sine_gordon_scaled", res, tolerance);
}

} // namespace hmap

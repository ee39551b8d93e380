#pragma once

#include <complex>
#include <functional>
#include <memory>

#include "hmap/grid.hpp"
#include "hmap/quadrature.hpp"
#include "hmap/report.hpp"
#include "hmap/sinh_gordon.hpp"

namespace hmap {

/// One-dimensional sine-Gordon solution theta(x) with theta'' = -2 sin(2 theta).
/// c^2 = theta'(0)^2 + 4 sin^2 theta(0) is the conserved energy level;
/// a = 2 cos theta(0) + theta'(0), b = 2 cos theta(0) - theta'(0), ab = 4 - c^2.
class SolitonTheta {
public:
    std::function<double(double)> theta, dtheta;
    double theta0 = 0.0, dtheta0 = 0.0;
    double c = 0.0;  // signed so that theta'(x) = c dn(c x + c1 | 4/c^2)
    double c1 = 0.0; // phase; NaN when the elliptic closed form has no finite phase
    double a = 0.0, b = 0.0;
    bool constant = false;
    // sin theta = sn(cx+c1|n) holds only for orbits the sn inversion covers
    // (rotations, and librations around 0); false for librations around pi
    // and for degenerate separatrix anchors.
    bool elliptic_form_valid = false;
    Interval range;

    double n() const { return 4.0 / (c * c); }
};

SolitonTheta soliton_theta(double theta0, double dtheta0, Interval range,
                           const OdeSpec& spec = {});

/// A sinh-Gordon / sine-Gordon pair related by the Backlund transformation,
/// held as evaluators. sin/cos of theta are provided separately because they
/// stay smooth where theta itself wraps.
struct BtPair {
    enum class Tag { BT, BT0 };
    Tag tag = Tag::BT;
    std::function<double(double, double)> w;
    std::function<double(double, double)> sin_theta, cos_theta;
    std::function<double(double, double)> theta; // unwrapped branch, for sampling/export
    std::function<bool(double, double)> valid;
    std::function<bool(double, double)> theta_valid;
    std::shared_ptr<const SeparableSolution> separable; // set for (BT0) pairs
};

/// (w == 0, theta == pi/2); satisfies both Backlund equations identically.
BtPair trivial_pair();

/// Pair a one-soliton theta(x) with a sinh-Gordon solution w (usually from
/// w_from_theta).
BtPair soliton_pair(const SolitonTheta& st, std::shared_ptr<const SeparableSolution> wsol);

/// Lemma-5.1 pair for a BT0-eligible separable solution: theta derived by the
/// Backlund transformation with theta(x,0) = pi/2.
BtPair bt0_pair(std::shared_ptr<const SeparableSolution> sol);

/// X(x) = int_0^x cosh w(t,0) dt along the x-axis.
double x_integral(const SeparableSolution& sol, double x, const QuadratureSpec& spec = {});

/// Y(x,y) = int_0^y sinh w(x,s) ds along a fiber.
double y_integral(const SeparableSolution& sol, double x, double y,
                  const QuadratureSpec& spec = {});

/// Smooth representation of tan(theta/2) = N/D as a function of b(x) and Y.
/// For |b|>1 this is the trigonometric form of the lemma; for |b|<1 the
/// equivalent real form (algebraically reduced, no complex intermediates).
struct HalfAngle {
    double N = 0.0, D = 0.0;
    double sin_theta() const;
    double cos_theta() const;
};
HalfAngle theta_half_tangent(double b, double Y);

/// Literal complex-arithmetic evaluation of the lemma formula (test
/// cross-check; loses accuracy near b = 0 where the real form does not).
std::complex<double> theta_half_tangent_complex(double b, double Y);

/// theta(x,y) for a BT0 pair, unwrapped continuously in y from
/// theta(x,0) = pi/2. Throws DegenerateParameterError when b(x) = +-1.
double theta_bt0(const SeparableSolution& sol, double x, double y,
                 const QuadratureSpec& spec = {});

/// Sample theta_bt0 on a grid (one continuation march per x-fiber).
ScalarField sample_theta_bt0(const SeparableSolution& sol, const GridSpec& grid);

/// w associated to a one-soliton theta by the Backlund transformation:
/// tanh(w/2) = sqrt(ab) tan(sqrt(ab) y/2 + k) / (theta' - 2 cos theta),
/// with tanh(w00/2) = -sqrt(a/b) tan k. Complex intermediates (ab < 0 or
/// imaginary k) are evaluated in complex arithmetic with a realness check.
SeparableSolution w_from_theta(const SolitonTheta& st, double w00, Interval x_range,
                               Interval y_range);

/// Residuals of both Backlund equations, raw and polynomial (W, Theta) form.
struct BtResiduals {
    ResidualReport raw_x, raw_y, poly_x, poly_y;
    bool all_pass() const { return raw_x.pass && raw_y.pass && poly_x.pass && poly_y.pass; }
};
BtResiduals bt_residual(const ScalarField& w, const ScalarField& theta, double tolerance = 1e-4);

/// max/RMS of |Delta theta + 2 sin(2 theta)|.
ResidualReport sine_gordon_residual(const ScalarField& theta, double tolerance = 1e-4);
ResidualReport sine_gordon_residual_scaled(const ScalarField& theta, double tolerance = 1e-4);

} // namespace hmap

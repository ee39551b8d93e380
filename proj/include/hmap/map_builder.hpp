#pragma once

#include "hmap/backlund.hpp"
#include "hmap/grid.hpp"
#include "hmap/ode.hpp"
#include "hmap/quadrature.hpp"

namespace hmap {

/// Evaluators of the cumulative integrals behind the quadrature construction:
/// I1, I3 along the x-axis and I2, I4 along y-fibers, all anchored at the
/// origin (I1(0)=I3(0)=0, I2(x,0)=I4(x,0)=0).
struct QuadratureIntegrals {
    std::function<double(double)> I1, I3;
    std::function<double(double, double)> I2, I4;
};

/// Pointwise evaluators for I1..I4 of a pair (convenience / cross-checking;
/// the grid builders below use streaming per-fiber integration instead).
QuadratureIntegrals quadrature_integrals(const BtPair& pair, const OdeSpec& spec = {});

/// Harmonic map from a Backlund pair by cumulative quadrature:
///   S = S00 e^{2(I1+I2)},  R = R00 + 2 S00 (I3 - I4).
/// Fibers are integrated as ODE systems reusing the I2 partial sums, so the
/// nested I4 costs O(nx ny). Nodes whose integration path leaves the pair's
/// validity region are masked.
MapField build_quadrature(const BtPair& pair, const BaseValues& base, const GridSpec& grid,
                          const OdeSpec& spec = {});

/// Harmonic map for a BT0-eligible separable solution by the closed form
///   S = S00 e^{2X} (sin theta + b)/(1 + b),
///   R = R00 + S00 e^{2X} cos theta/(1 + b).
MapField build_newclass(const SeparableSolution& sol, const BaseValues& base,
                        const GridSpec& grid, const OdeSpec& spec = {});

/// Harmonic map for a one-soliton theta(x) (constant-denominator form, the
/// proof/worked-example reading of the closed formulas). I3 is accumulated
/// with the radical-free integrand, which stays valid across turning points
/// of int sin theta where the J-substitution form folds back.
MapField build_soliton(const SolitonTheta& st, double w00, const BaseValues& base,
                       const GridSpec& grid, const OdeSpec& spec = {});

/// J(t) = int_1^t (u^2 + tanh^2(w00/2))/u^2 (b u^2 + a)/sqrt(2(8-ab)u^2 - a^2 - b^2 u^4) du
/// with inverse-square-root substitutions at endpoints where the radicand
/// vanishes. Throws std::domain_error when the radicand is negative inside.
double j_integral(const SolitonTheta& st, double w00, double t, const QuadratureSpec& spec = {});

} // namespace hmap

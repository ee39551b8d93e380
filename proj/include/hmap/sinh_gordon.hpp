#pragma once

#include <functional>
#include <memory>

#include "hmap/grid.hpp"
#include "hmap/ode.hpp"
#include "hmap/report.hpp"

namespace hmap {

/// Coefficients of the separable first-order system
///   F'^2 = A F^4 + B F^2 + C,   G'^2 = -C G^4 - (B-4) G^2 - A.
struct OdeCoefficients {
    double A = 0.0, B = 0.0, C = 0.0;
};

enum class Provenance { ode, kenmotsu, closed_form };

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Solution of Delta w = 2 sinh(2w) of the form w = 2 arctanh(F(x) G(y)).
/// Immutable after construction; evaluators are safe for concurrent reads.
class SeparableSolution {
public:
    OdeCoefficients coeffs;
    Provenance provenance = Provenance::ode;
    double F0 = 0.0, dF0 = 0.0, G0 = 0.0, dG0 = 0.0;
    Interval x_range, y_range;
    double guard_eps = 1e-6; // validity: |F G| < 1 - guard_eps

    std::function<double(double)> F, dF, G, dG;

    double tanh_half_w(double x, double y) const { return F(x) * G(y); }
    bool defined(double x, double y) const;
    double w(double x, double y) const;

    /// b(x) = F'(x) / (2 F(x)); throws std::domain_error at zeros of F.
    double b(double x) const;

    /// Eligible for the (BT0) machinery: dw/dy vanishes on the x-axis.
    bool bt0_eligible() const { return std::abs(dG0) <= 1e-10 * std::max(1.0, std::abs(G0)); }
};

/// Integrate the separable system from initial data at the origin. The data
/// must satisfy the first-order relations to 1e-10; the relations are
/// monitored along the evaluators and drift beyond 1e-8 is an accuracy error.
SeparableSolution make_separable(const OdeCoefficients& coeffs, double F0, double dF0, double G0,
                                 double dG0, Interval x_range, Interval y_range,
                                 const OdeSpec& spec = {});

struct KenmotsuParams {
    double alpha = 0.0, beta = 0.0, w0 = 0.0;
    void validate() const;
};

/// Kenmotsu-style family: tanh(w/2) = tanh(w0/2) exp(-int f) exp(-int g)
/// with f, g solving their quartic first-order equations from f(0)=g(0)=0,
/// f'(0)=-4 alpha, g'(0)=-4 beta. Always BT0-eligible.
SeparableSolution make_kenmotsu(const KenmotsuParams& p, Interval x_range, Interval y_range,
                                const OdeSpec& spec = {});

/// tanh(w/2) = 2y / cosh(2x); coefficients (A,B,C) = (-4, 4, 0).
SeparableSolution example3_solution(Interval x_range, Interval y_range);

/// tanh(w/2) = (sqrt2/2) cosh(2 sqrt2 y) / cos(2x); (A,B,C) = (8, -4, 0).
SeparableSolution example5_solution(Interval x_range, Interval y_range);

/// Sample w on a grid with the |FG| guard and stencil dilation.
ScalarField sample_separable_w(const SeparableSolution& sol, const GridSpec& grid);

/// max/RMS of |Delta w - 2 sinh(2w)| over FD-valid nodes.
ResidualReport sinh_gordon_residual(const ScalarField& w, double tolerance = 1e-4);

/// Same residual divided pointwise by max(1, |2 sinh 2w|); certifies fields
/// whose PDE terms are large compared to the absolute tolerance.
ResidualReport sinh_gordon_residual_scaled(const ScalarField& w, double tolerance = 1e-4);

} // namespace hmap

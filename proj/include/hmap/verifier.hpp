#pragma once

#include <array>

#include "hmap/grid.hpp"
#include "hmap/report.hpp"

namespace hmap {

struct HarmonicityReports {
    ResidualReport orthogonality; // |Rx Ry + Sx Sy|
    ResidualReport normalization; // |(Rx^2 + Sx^2 - Ry^2 - Sy^2)/S^2 - 4|
    bool all_pass() const { return orthogonality.pass && normalization.pass; }
};

/// The Cartesian characterization of a harmonic map to the hyperbolic plane.
HarmonicityReports harmonicity_residual(const MapField& u, double tolerance = 1e-4);

/// |uzbar/uz - e^{-2w}|; nodes with |uz| <= 1e-10 are masked.
ResidualReport beltrami_residual(const MapField& u, const ScalarField& w,
                                 double tolerance = 1e-4);

/// |dz(u) dz(ubar) / S^2 - 1|, the normalized-Hopf form; S = 0 nodes masked.
ResidualReport hopf_residual(const MapField& u, double tolerance = 1e-4);

struct DerivativeIdentityReports {
    ResidualReport uz;    // |uz - S e^{w} e^{i theta}|
    ResidualReport uzbar; // |uzbar - S e^{-w} e^{i theta}|
    bool all_pass() const { return uz.pass && uzbar.pass; }
};
DerivativeIdentityReports derivative_identity_check(const MapField& u, const ScalarField& w,
                                                    const ScalarField& theta,
                                                    double tolerance = 1e-4);

/// The four first-order equations defining R,S from (w, theta):
///   Sx = 2S cosh w sin th, Sy = 2S sinh w cos th,
///   Rx = 2S cosh w cos th, Ry = -2S sinh w sin th.
std::array<ResidualReport, 4> lemma_system_residuals(const MapField& u, const ScalarField& w,
                                                     const ScalarField& theta,
                                                     double tolerance = 1e-4);

/// Assemble reports plus grid metadata into the exportable tree form.
ReportNode verification_tree(std::span<const ResidualReport> reports, const GridSpec& grid);

} // namespace hmap

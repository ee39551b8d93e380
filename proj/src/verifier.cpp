#include "hmap/verifier.hpp"

#include <cmath>
#include <complex>

namespace hmap {

namespace {

struct MapDerivs {
    ScalarField Rx, Ry, Sx, Sy;
};

MapDerivs map_gradients(const MapField& u) {
    ScalarField Rf(u.grid), Sf(u.grid);
    Rf.values = u.R;
    Sf.values = u.S;
    Rf.mask = u.mask;
    Sf.mask = u.mask;
    GradientFields gR = fd_gradient(Rf);
    GradientFields gS = fd_gradient(Sf);
    return {std::move(gR.fx), std::move(gR.fy), std::move(gS.fx), std::move(gS.fy)};
}

} // namespace

HarmonicityReports harmonicity_residual(const MapField& u, double tolerance) {
    const MapDerivs d = map_gradients(u);
    std::vector<double> r1, r2;
    for (int j = 0; j < u.grid.ny; ++j)
        for (int i = 0; i < u.grid.nx; ++i) {
            if (!d.Rx.valid(i, j)) continue;
            const double S = u.S[u.idx(i, j)];
            if (S == 0.0) continue;
            const double Rx = d.Rx.at(i, j), Ry = d.Ry.at(i, j);
            const double Sx = d.Sx.at(i, j), Sy = d.Sy.at(i, j);
            r1.push_back(Rx * Ry + Sx * Sy);
            r2.push_back((Rx * Rx + Sx * Sx - Ry * Ry - Sy * Sy) / (S * S) - 4.0);
        }
    HarmonicityReports out;
    out.orthogonality = ResidualReport::from_samples("harmonicity_orthogonality", r1, tolerance);
    out.normalization = ResidualReport::from_samples("harmonicity_normalization", r2, tolerance);
    return out;
}

ResidualReport beltrami_residual(const MapField& u, const ScalarField& w, double tolerance) {
    if (u.grid.nx != w.grid.nx || u.grid.ny != w.grid.ny)
        throw std::invalid_argument("beltrami_residual: fields on different grids");
    const WirtingerFields wf = wirtinger(u);
    std::vector<double> res;
    for (int j = 0; j < u.grid.ny; ++j)
        for (int i = 0; i < u.grid.nx; ++i) {
            if (!wf.uz.valid(i, j) || !w.valid(i, j)) continue;
            const std::complex<double> uz = wf.uz.at(i, j);
            if (std::abs(uz) <= 1e-10) continue; // vanishing uz: node masked
            const std::complex<double> ratio = wf.uzbar.at(i, j) / uz;
            res.push_back(std::abs(ratio - std::exp(-2.0 * w.at(i, j))));
        }
    return ResidualReport::from_samples("beltrami", res, tolerance);
}

ResidualReport hopf_residual(const MapField& u, double tolerance) {
    const WirtingerFields wf = wirtinger(u);
    std::vector<double> res;
    for (int j = 0; j < u.grid.ny; ++j)
        for (int i = 0; i < u.grid.nx; ++i) {
            if (!wf.uz.valid(i, j)) continue;
            const double S = u.S[u.idx(i, j)];
            if (S == 0.0) continue;
            // dz(ubar) = conj(dzbar(u))
            const std::complex<double> prod = wf.uz.at(i, j) * std::conj(wf.uzbar.at(i, j));
            res.push_back(std::abs(prod / (S * S) - 1.0));
        }
    return ResidualReport::from_samples("hopf_normalization", res, tolerance);
}

DerivativeIdentityReports derivative_identity_check(const MapField& u, const ScalarField& w,
                                                    const ScalarField& theta, double tolerance) {
    if (u.grid.nx != w.grid.nx || u.grid.ny != w.grid.ny || u.grid.nx != theta.grid.nx ||
        u.grid.ny != theta.grid.ny)
        throw std::invalid_argument("derivative_identity_check: fields on different grids");
    const WirtingerFields wf = wirtinger(u);
    std::vector<double> rz, rzb;
    for (int j = 0; j < u.grid.ny; ++j)
        for (int i = 0; i < u.grid.nx; ++i) {
            if (!wf.uz.valid(i, j) || !w.valid(i, j) || !theta.valid(i, j)) continue;
            const double S = u.S[u.idx(i, j)];
            const double wv = w.at(i, j);
            const std::complex<double> phase(std::cos(theta.at(i, j)),
                                             std::sin(theta.at(i, j)));
            rz.push_back(std::abs(wf.uz.at(i, j) - S * std::exp(wv) * phase));
            rzb.push_back(std::abs(wf.uzbar.at(i, j) - S * std::exp(-wv) * phase));
        }
    DerivativeIdentityReports out;
    out.uz = ResidualReport::from_samples("derivative_identity_uz", rz, tolerance);
    out.uzbar = ResidualReport::from_samples("derivative_identity_uzbar", rzb, tolerance);
    return out;
}

std::array<ResidualReport, 4> lemma_system_residuals(const MapField& u, const ScalarField& w,
                                                     const ScalarField& theta, double tolerance) {
    const MapDerivs d = map_gradients(u);
    std::vector<double> r[4];
    for (int j = 0; j < u.grid.ny; ++j)
        for (int i = 0; i < u.grid.nx; ++i) {
            if (!d.Rx.valid(i, j) || !w.valid(i, j) || !theta.valid(i, j)) continue;
            const double S = u.S[u.idx(i, j)];
            const double chw = std::cosh(w.at(i, j)), shw = std::sinh(w.at(i, j));
            const double sth = std::sin(theta.at(i, j)), cth = std::cos(theta.at(i, j));
            r[0].push_back(d.Sx.at(i, j) - 2.0 * S * chw * sth);
            r[1].push_back(d.Sy.at(i, j) - 2.0 * S * shw * cth);
            r[2].push_back(d.Rx.at(i, j) - 2.0 * S * chw * cth);
            r[3].push_back(d.Ry.at(i, j) + 2.0 * S * shw * sth);
        }
    return {ResidualReport::from_samples("lemma_system_Sx", r[0], tolerance),
            ResidualReport::from_samples("lemma_system_Sy", r[1], tolerance),
            ResidualReport::from_samples("lemma_system_Rx", r[2], tolerance),
            ResidualReport::from_samples("lemma_system_Ry", r[3], tolerance)};
}

ReportNode verification_tree(std::span<const ResidualReport> reports, const GridSpec& grid) {
    ReportNode root("verification");
    ReportNode& g = root.child("grid");
    g.add("x_min", grid.x_min);
    g.add("x_max", grid.x_max);
    g.add("y_min", grid.y_min);
    g.add("y_max", grid.y_max);
    g.add("nx", static_cast<long>(grid.nx));
    g.add("ny", static_cast<long>(grid.ny));
    long failed = 0;
    for (const auto& r : reports) {
        add_report(root, r);
        if (!r.pass) ++failed;
    }
    ReportNode& s = root.child("summary");
    s.add("suites", static_cast<long>(reports.size()));
    s.add("failed", failed);
    s.add("verdict", failed == 0 ? std::string("pass") : std::string("fail"));
    return root;
}

} // namespace hmap

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hmap/grid.hpp"

using namespace hmap;

namespace {

ScalarField sample(const GridSpec& g, double (*f)(double, double)) {
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.set(i, j, f(g.x(i), g.y(j)));
    return out;
}

MapField sample_map(const GridSpec& g, double (*R)(double, double), double (*S)(double, double)) {
    MapField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out.R[out.idx(i, j)] = R(g.x(i), g.y(j));
            out.S[out.idx(i, j)] = S(g.x(i), g.y(j));
            out.mask[out.idx(i, j)] = 1;
        }
    return out;
}

const GridSpec kSmall{-1.0, 1.0, -1.0, 1.0, 21, 21};

} // namespace

TEST_CASE("grid validation") {
    GridSpec g;
    g.nx = 4;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    GridSpec h;
    h.x_min = 2.0;
    h.x_max = -2.0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}

TEST_CASE("gradient exact on affine fields") {
    auto f = sample(kSmall, [](double x, double y) { return 3.0 * x - 2.0 * y + 1.0; });
    const auto g = fd_gradient(f);
    for (int j = 0; j < kSmall.ny; ++j)
        for (int i = 0; i < kSmall.nx; ++i) {
            if (!g.fx.valid(i, j)) continue;
            CHECK(std::abs(g.fx.at(i, j) - 3.0) < 1e-12);
            CHECK(std::abs(g.fy.at(i, j) + 2.0) < 1e-12);
        }
    // boundary nodes masked out
    CHECK_FALSE(g.fx.valid(0, 5));
    CHECK_FALSE(g.fx.valid(5, kSmall.ny - 1));
}

TEST_CASE("gradient exact on quadratics, laplacian exact on x^2+y^2 and x^2-y^2") {
    auto f = sample(kSmall, [](double x, double y) { return x * x + y * y; });
    const auto g = fd_gradient(f);
    const auto lap = fd_laplacian(f);
    auto harm = sample(kSmall, [](double x, double y) { return x * x - y * y; });
    const auto lap0 = fd_laplacian(harm);
    for (int j = 1; j < kSmall.ny - 1; ++j)
        for (int i = 1; i < kSmall.nx - 1; ++i) {
            CHECK(std::abs(g.fx.at(i, j) - 2.0 * kSmall.x(i)) < 1e-12);
            CHECK(std::abs(lap.at(i, j) - 4.0) < 1e-11);
            CHECK(std::abs(lap0.at(i, j)) < 1e-11);
        }
}

TEST_CASE("analytic-derivative oracle at h = 1e-3") {
    const GridSpec fine{-0.008, 0.008, -0.008, 0.008, 17, 17}; // h = 1e-3
    auto f = sample(fine, [](double x, double y) { return std::sin(x) * std::cos(y); });
    const auto g = fd_gradient(f);
    const auto lap = fd_laplacian(f);
    double worst_g = 0.0, worst_l = 0.0;
    for (int j = 1; j < fine.ny - 1; ++j)
        for (int i = 1; i < fine.nx - 1; ++i) {
            const double x = fine.x(i), y = fine.y(j);
            worst_g = std::max(worst_g,
                               std::abs(g.fx.at(i, j) - std::cos(x) * std::cos(y)));
            // laplacian of sin x cos y is -2 sin x cos y
            worst_l = std::max(worst_l,
                               std::abs(lap.at(i, j) + 2.0 * std::sin(x) * std::cos(y)));
        }
    CHECK(worst_g < 1e-6);
    CHECK(worst_l < 1e-6);

    const GridSpec efine{-0.008, 0.008, -0.008, 0.008, 17, 17};
    auto e = sample(efine, [](double x, double y) { return std::exp(x) * std::sin(y); });
    const auto lape = fd_laplacian(e);
    double worst = 0.0;
    for (int j = 1; j < efine.ny - 1; ++j)
        for (int i = 1; i < efine.nx - 1; ++i) worst = std::max(worst, std::abs(lape.at(i, j)));
    CHECK(worst < 1e-6); // harmonic
}

TEST_CASE("wirtinger derivatives on z, zbar and i e^{2x}") {
    auto uz_of = [](const MapField& u) { return wirtinger(u); };
    auto id = sample_map(kSmall, [](double x, double) { return x; },
                         [](double, double y) { return y; });
    auto w1 = uz_of(id);
    auto conj = sample_map(kSmall, [](double x, double) { return x; },
                           [](double, double y) { return -y; });
    auto w2 = uz_of(conj);
    auto expo = sample_map(kSmall, [](double, double) { return 0.0; },
                           [](double x, double) { return std::exp(2.0 * x); });
    auto w3 = uz_of(expo);
    for (int j = 1; j < kSmall.ny - 1; ++j)
        for (int i = 1; i < kSmall.nx - 1; ++i) {
            CHECK(std::abs(w1.uz.at(i, j) - 1.0) < 1e-12);
            CHECK(std::abs(w1.uzbar.at(i, j)) < 1e-12);
            CHECK(std::abs(w2.uz.at(i, j)) < 1e-12);
            CHECK(std::abs(w2.uzbar.at(i, j) - 1.0) < 1e-12);
        }
    // uz = uzbar = i e^{2x} up to O(h^2); h = 0.1 here so allow the stencil error
    const GridSpec fine{-0.008, 0.008, -0.008, 0.008, 17, 17};
    auto ef = sample_map(fine, [](double, double) { return 0.0; },
                         [](double x, double) { return std::exp(2.0 * x); });
    auto wf = wirtinger(ef);
    double worst = 0.0;
    for (int j = 1; j < fine.ny - 1; ++j)
        for (int i = 1; i < fine.nx - 1; ++i) {
            const std::complex<double> want(0.0, std::exp(2.0 * fine.x(i)));
            worst = std::max(worst, std::abs(wf.uz.at(i, j) - want));
            worst = std::max(worst, std::abs(wf.uzbar.at(i, j) - want));
        }
    CHECK(worst < 1e-6);
}

TEST_CASE("wirtinger conjugation consistency") {
    // uzbar(u) equals conj(uz) applied to the conjugated map (R, -S)
    const GridSpec g{-0.7, 0.9, -0.6, 0.8, 24, 18};
    auto u = sample_map(g, [](double x, double y) { return std::sin(x + 2 * y); },
                        [](double x, double y) { return std::cos(3 * x - y); });
    auto v = sample_map(g, [](double x, double y) { return std::sin(x + 2 * y); },
                        [](double x, double y) { return -std::cos(3 * x - y); });
    auto wu = wirtinger(u);
    auto wv = wirtinger(v);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i)
            CHECK(std::abs(wu.uzbar.at(i, j) - std::conj(wv.uz.at(i, j))) < 1e-12);
}

TEST_CASE("mask_singular guards and dilation") {
    // trivial guard: everything valid
    auto full = mask_singular([](double x, double y) { return x + y; }, kSmall,
                              [](double, double) { return true; });
    CHECK(full.valid_count() == kSmall.nodes());

    // paper's first golden field: mask near |2y/cosh 2x| = 1
    auto w3 = mask_singular(
        [](double x, double y) { return 2.0 * std::atanh(2.0 * y / std::cosh(2.0 * x)); }, kSmall,
        [](double x, double y) { return std::abs(2.0 * y / std::cosh(2.0 * x)) < 1.0 - 1e-6; });
    CHECK(w3.valid_count() > 0);
    CHECK(w3.valid_count() < kSmall.nodes());
    // a node beyond the singular line must be masked
    CHECK_FALSE(w3.valid(10, kSmall.ny - 1)); // x = 0, y = 1: |2y/cosh0| = 2 > 1

    // monotonicity: a stricter guard never unmasks
    auto strict = mask_singular(
        [](double x, double y) { return 2.0 * std::atanh(2.0 * y / std::cosh(2.0 * x)); }, kSmall,
        [](double x, double y) { return std::abs(2.0 * y / std::cosh(2.0 * x)) < 0.8; });
    for (int j = 0; j < kSmall.ny; ++j)
        for (int i = 0; i < kSmall.nx; ++i)
            if (strict.valid(i, j)) CHECK(w3.valid(i, j));

    // guard excluding cos 2x = 0 for the second golden field
    const GridSpec wide{-1.2, 1.2, -0.3, 0.3, 25, 9};
    auto w5 = mask_singular(
        [](double x, double y) {
            return 2.0 * std::atanh(std::sqrt(0.5) * std::cosh(2.0 * std::sqrt(2.0) * y) /
                                    std::cos(2.0 * x));
        },
        wide,
        [](double x, double y) {
            const double t = std::sqrt(0.5) * std::cosh(2.0 * std::sqrt(2.0) * y) /
                             std::cos(2.0 * x);
            return std::cos(2.0 * x) != 0.0 && std::abs(t) < 1.0 - 1e-6;
        });
    CHECK(w5.valid_count() > 0);

    // empty field error
    CHECK_THROWS_AS(mask_singular([](double, double) { return 0.0; }, kSmall,
                                  [](double, double) { return false; }),
                    EmptyFieldError);
}

TEST_CASE("csv round trip is bit exact") {
    const GridSpec g{-0.31, 0.47, -0.21, 0.57, 9, 11};
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.set(i, j, std::sin(1e3 * i + j) * 1e-7, (i + j) % 3 != 0);
    const std::string path = std::filesystem::temp_directory_path() / "hmap_test_scalar.csv";
    write_scalar_csv(f, path);
    const ScalarField back = read_scalar_csv(path);
    REQUIRE(back.grid.nx == g.nx);
    REQUIRE(back.grid.ny == g.ny);
    for (long k = 0; k < g.nodes(); ++k) {
        CHECK(back.values[k] == f.values[k]); // 17 significant digits round-trip
        CHECK(back.mask[k] == f.mask[k]);
    }

    MapField u(g);
    u.base = {0.25, -1.75};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            u.R[u.idx(i, j)] = std::cos(i * 0.1 + j);
            u.S[u.idx(i, j)] = 1.0 + 0.01 * i;
            u.mask[u.idx(i, j)] = 1;
        }
    const std::string mpath = std::filesystem::temp_directory_path() / "hmap_test_map.csv";
    write_map_csv(u, mpath);
    const MapField uback = read_map_csv(mpath);
    CHECK(uback.base.R00 == u.base.R00);
    CHECK(uback.base.S00 == u.base.S00);
    for (long k = 0; k < g.nodes(); ++k) {
        CHECK(uback.R[k] == u.R[k]);
        CHECK(uback.S[k] == u.S[k]);
    }
    std::filesystem::remove(path);
    std::filesystem::remove(mpath);
}

TEST_CASE("pairwise sum") {
    std::vector<double> v(1000, 0.1);
    CHECK(std::abs(pairwise_sum(v) - 100.0) < 1e-12);
}

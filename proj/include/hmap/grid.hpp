#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hmap/errors.hpp"

namespace hmap {

struct GridSpec {
    double x_min = -1.0, x_max = 1.0;
    double y_min = -1.0, y_max = 1.0;
    int nx = 101, ny = 101;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dy() const { return (y_max - y_min) / (ny - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double y(int j) const { return y_min + j * dy(); }
    long nodes() const { return static_cast<long>(nx) * ny; }
    void validate() const;
};

/// Base point values of a map, u(0,0) = R00 + i S00.
struct BaseValues {
    double R00 = 0.0;
    double S00 = 1.0;
};

/// Scalar samples on a rectangular grid with a validity mask.
/// Storage is row-major in y-then-x order (y is the slow index).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& g)
        : grid(g), values(g.nodes(), 0.0), mask(g.nodes(), 0) {
        g.validate();
    }

    GridSpec grid;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * grid.nx + i; }
    bool valid(int i, int j) const { return mask[idx(i, j)] != 0; }
    double at(int i, int j) const { return values[idx(i, j)]; }
    void set(int i, int j, double v, bool ok = true) {
        values[idx(i, j)] = v;
        mask[idx(i, j)] = ok ? 1 : 0;
    }
    long valid_count() const;
};

/// Complex samples (e.g. Wirtinger derivatives) on a grid with a mask.
class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(const GridSpec& g)
        : grid(g), values(g.nodes(), {0.0, 0.0}), mask(g.nodes(), 0) {}

    GridSpec grid;
    std::vector<std::complex<double>> values;
    std::vector<std::uint8_t> mask;

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * grid.nx + i; }
    bool valid(int i, int j) const { return mask[idx(i, j)] != 0; }
    std::complex<double> at(int i, int j) const { return values[idx(i, j)]; }
};

/// Sampled map u = R + iS into the (upper or lower) half-plane.
class MapField {
public:
    MapField() = default;
    explicit MapField(const GridSpec& g)
        : grid(g), R(g.nodes(), 0.0), S(g.nodes(), 0.0), mask(g.nodes(), 0) {}

    GridSpec grid;
    std::vector<double> R, S;
    std::vector<std::uint8_t> mask;
    BaseValues base;

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * grid.nx + i; }
    bool valid(int i, int j) const { return mask[idx(i, j)] != 0; }
    long valid_count() const;
};

struct GradientFields {
    ScalarField fx, fy;
};

struct WirtingerFields {
    ComplexField uz, uzbar;
};

/// Central-difference gradient, O(h^2). A node is valid in the result only
/// when its full 3x3 neighborhood is valid in the input.
GradientFields fd_gradient(const ScalarField& f);

/// 5-point Laplacian, O(h^2), same masking rule as fd_gradient.
ScalarField fd_laplacian(const ScalarField& f);

/// Wirtinger derivatives of a map: uz = (ux - i uy)/2, uzbar = (ux + i uy)/2.
WirtingerFields wirtinger(const MapField& u);

/// Sample an evaluator on a grid, masking nodes where the guard fails and
/// dilating the failure set by one stencil radius. Throws EmptyFieldError
/// when nothing remains valid.
ScalarField mask_singular(const std::function<double(double, double)>& f, const GridSpec& grid,
                          const std::function<bool(double, double)>& guard);

/// Pairwise (cascade) summation; used for all residual-norm reductions so
/// results do not depend on evaluation order.
double pairwise_sum(std::span<const double> v);

// --- comma-delimited field files (17 significant digits) -------------------

void write_scalar_csv(const ScalarField& f, const std::string& path);
void write_map_csv(const MapField& u, const std::string& path);
ScalarField read_scalar_csv(const std::string& path);
MapField read_map_csv(const std::string& path);

} // namespace hmap

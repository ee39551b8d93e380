#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hmap/errors.hpp"

namespace hmap {

struct OdeSpec {
    double step_tol = 1e-10;
    double max_step = 0.1;
    bool dense_output = true;

    void validate() const {
        if (!(step_tol > 0.0) || !(max_step > 0.0))
            throw std::invalid_argument("OdeSpec: need step_tol>0 and max_step>0");
    }
};

using OdeRhs = std::function<void(double x, std::span<const double> y, std::span<double> dydx)>;

/// Continuous solution of an ODE system produced by ode_integrate.
/// Immutable after construction; concurrent reads are safe.
class DenseSolution {
public:
    int dimension() const { return dim_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }

    /// Interpolated state at x (within the integrated range, small slack allowed).
    void eval(double x, std::span<double> out) const;
    double eval(double x, int component) const;
    std::vector<double> eval(double x) const;

private:
    friend class Dopri5Stepper;
    friend DenseSolution merge_dense(DenseSolution left, const DenseSolution& right);

    struct Segment {
        double x_left; // min(x0, x0+h), the sort/lookup key
        double x0;     // step start (theta origin)
        double h;      // signed step
        // 5 interpolation coefficient blocks of dim_ values each
        std::vector<double> r;
    };

    int dim_ = 0;
    double x_min_ = 0.0, x_max_ = 0.0;
    std::vector<Segment> segments_; // sorted by x0 ascending, h may be negative
};

/// Integrate y' = rhs(x, y) from x0 to x1 (either direction) with an embedded
/// Dormand-Prince 5(4) pair; local error per step is held at step_tol.
/// Throws StiffnessError on step underflow.
DenseSolution ode_integrate(const OdeRhs& rhs, std::span<const double> y0, double x0, double x1,
                            const OdeSpec& spec = {});

/// Endpoint state only (no dense storage).
std::vector<double> ode_endpoint(const OdeRhs& rhs, std::span<const double> y0, double x0,
                                 double x1, const OdeSpec& spec = {});

/// Integrate outward from an anchor point to both range ends and merge the
/// dense solutions into one evaluator covering [xmin, xmax].
DenseSolution ode_integrate_bidirectional(const OdeRhs& rhs, std::span<const double> y0,
                                          double anchor, double xmin, double xmax,
                                          const OdeSpec& spec = {});

} // namespace hmap

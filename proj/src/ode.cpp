#include "hmap/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hmap {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-minus-4th order error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights (Hairer-Norsett-Wanner DOPRI5)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

} // namespace

class Dopri5Stepper {
public:
    Dopri5Stepper(const OdeRhs& rhs, std::span<const double> y0, double x0, double x1,
                  const OdeSpec& spec, bool keep_dense)
        : rhs_(rhs), spec_(spec), keep_dense_(keep_dense), n_(static_cast<int>(y0.size())),
          x_(x0), x_end_(x1) {
        spec.validate();
        for (double v : y0)
            if (!std::isfinite(v)) throw std::invalid_argument("ode_integrate: non-finite y0");
        if (!std::isfinite(x0) || !std::isfinite(x1))
            throw std::invalid_argument("ode_integrate: non-finite range");
        y_.assign(y0.begin(), y0.end());
        for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_, &err_})
            k->assign(n_, 0.0);
        rhs_(x_, y_, k1_);
    }

    DenseSolution run() {
        DenseSolution dense;
        dense.dim_ = n_;
        dense.x_min_ = std::min(x_, x_end_);
        dense.x_max_ = std::max(x_, x_end_);
        if (x_ == x_end_) {
            // degenerate range: single zero-length segment holding y0
            DenseSolution::Segment seg;
            seg.x_left = x_;
            seg.x0 = x_;
            seg.h = 0.0;
            seg.r.assign(static_cast<size_t>(5) * n_, 0.0);
            for (int i = 0; i < n_; ++i) seg.r[i] = y_[i];
            dense.segments_.push_back(std::move(seg));
            return dense;
        }

        const double dir = (x_end_ > x_) ? 1.0 : -1.0;
        double h = initial_step(dir);
        long step_count = 0;
        const long max_steps = 50'000'000L;

        while (dir * (x_end_ - x_) > 0.0) {
            if (++step_count > max_steps)
                throw AccuracyError("ode_integrate: step budget exhausted");
            if (dir * (x_ + h - x_end_) > 0.0) h = x_end_ - x_;
            if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(1.0, std::abs(x_)))
                throw StiffnessError("ode_integrate: step size underflow");

            const double err = attempt_step(h);
            if (std::isfinite(err) && err <= 1.0) {
                if (keep_dense_) dense.segments_.push_back(make_segment(h));
                x_ += h;
                y_.swap(ynew_);
                k1_.swap(k7_); // FSAL
                double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
                h *= std::clamp(fac, 0.2, 5.0);
            } else {
                double fac = std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.1;
                h *= std::clamp(fac, 0.1, 0.9);
            }
            if (std::abs(h) > spec_.max_step) h = dir * spec_.max_step;
        }
        if (!keep_dense_) {
            DenseSolution::Segment seg;
            seg.x_left = x_;
            seg.x0 = x_;
            seg.h = 0.0;
            seg.r.assign(static_cast<size_t>(5) * n_, 0.0);
            for (int i = 0; i < n_; ++i) seg.r[i] = y_[i];
            dense.segments_.push_back(std::move(seg));
            return dense;
        }
        std::sort(dense.segments_.begin(), dense.segments_.end(),
                  [](const auto& a, const auto& b) { return a.x_left < b.x_left; });
        return dense;
    }

    const std::vector<double>& state() const { return y_; }

private:
    double initial_step(double dir) const {
        double span = std::abs(x_end_ - x_);
        double h = std::min(spec_.max_step, span);
        // crude curvature probe keeps the first attempt sane; the controller
        // does the rest
        double scale = 0.0;
        for (int i = 0; i < n_; ++i)
            scale = std::max(scale, std::abs(k1_[i]) / (1.0 + std::abs(y_[i])));
        if (scale > 0.0) h = std::min(h, 0.1 / scale);
        return dir * std::max(h, 1e-12 * std::max(1.0, span));
    }

    double attempt_step(double h) {
        auto stage = [&](double xc, const std::vector<double>& yc, std::vector<double>& k) {
            rhs_(xc, yc, k);
        };
        for (int i = 0; i < n_; ++i) ytmp_[i] = y_[i] + h * a21 * k1_[i];
        stage(x_ + c2 * h, ytmp_, k2_);
        for (int i = 0; i < n_; ++i) ytmp_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        stage(x_ + c3 * h, ytmp_, k3_);
        for (int i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        stage(x_ + c4 * h, ytmp_, k4_);
        for (int i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        stage(x_ + c5 * h, ytmp_, k5_);
        for (int i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                    a65 * k5_[i]);
        stage(x_ + h, ytmp_, k6_);
        for (int i = 0; i < n_; ++i)
            ynew_[i] = y_[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] +
                                    b6 * k6_[i]);
        stage(x_ + h, ynew_, k7_);

        double err_norm = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                  e6 * k6_[i] + e7 * k7_[i]);
            const double sc =
                spec_.step_tol * (1.0 + std::max(std::abs(y_[i]), std::abs(ynew_[i])));
            err_norm += (e / sc) * (e / sc);
        }
        return std::sqrt(err_norm / n_);
    }

    DenseSolution::Segment make_segment(double h) const {
        DenseSolution::Segment seg;
        seg.x_left = std::min(x_, x_ + h);
        seg.x0 = x_;
        seg.h = h;
        seg.r.assign(static_cast<size_t>(5) * n_, 0.0);
        for (int i = 0; i < n_; ++i) {
            const double dy = ynew_[i] - y_[i];
            const double bspl = h * k1_[i] - dy;
            seg.r[i] = y_[i];
            seg.r[n_ + i] = dy;
            seg.r[2 * n_ + i] = bspl;
            seg.r[3 * n_ + i] = dy - h * k7_[i] - bspl;
            seg.r[4 * n_ + i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                                     d6 * k6_[i] + d7 * k7_[i]);
        }
        return seg;
    }

    const OdeRhs& rhs_;
    OdeSpec spec_;
    bool keep_dense_;
    int n_;
    double x_, x_end_;
    std::vector<double> y_, ynew_, ytmp_, err_;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_;
};

void DenseSolution::eval(double x, std::span<double> out) const {
    if (segments_.empty()) throw std::logic_error("DenseSolution: empty");
    const double slack = 1e-9 * std::max(1.0, std::max(std::abs(x_min_), std::abs(x_max_)));
    if (x < x_min_ - slack || x > x_max_ + slack)
        throw std::domain_error("DenseSolution: x outside integrated range");
    x = std::clamp(x, x_min_, x_max_);

    // find the segment whose [x_left, x_left+|h|] covers x
    auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                               [](double v, const Segment& s) { return v < s.x_left; });
    if (it != segments_.begin()) --it;
    const Segment& s = *it;
    const double theta = (s.h != 0.0) ? (x - s.x0) / s.h : 0.0;
    const double th1 = 1.0 - theta;
    for (int i = 0; i < dim_; ++i) {
        const double* r = s.r.data();
        out[i] = r[i] + theta * (r[dim_ + i] +
                                 th1 * (r[2 * dim_ + i] +
                                        theta * (r[3 * dim_ + i] + th1 * r[4 * dim_ + i])));
    }
}

double DenseSolution::eval(double x, int component) const {
    std::vector<double> buf(dim_);
    eval(x, buf);
    return buf[component];
}

std::vector<double> DenseSolution::eval(double x) const {
    std::vector<double> buf(dim_);
    eval(x, buf);
    return buf;
}

DenseSolution merge_dense(DenseSolution left, const DenseSolution& right) {
    if (left.dim_ != right.dim_) throw std::logic_error("merge_dense: dimension mismatch");
    left.segments_.insert(left.segments_.end(), right.segments_.begin(), right.segments_.end());
    std::sort(left.segments_.begin(), left.segments_.end(),
              [](const auto& a, const auto& b) { return a.x_left < b.x_left; });
    left.x_min_ = std::min(left.x_min_, right.x_min_);
    left.x_max_ = std::max(left.x_max_, right.x_max_);
    return left;
}

DenseSolution ode_integrate(const OdeRhs& rhs, std::span<const double> y0, double x0, double x1,
                            const OdeSpec& spec) {
    Dopri5Stepper stepper(rhs, y0, x0, x1, spec, spec.dense_output);
    return stepper.run();
}

std::vector<double> ode_endpoint(const OdeRhs& rhs, std::span<const double> y0, double x0,
                                 double x1, const OdeSpec& spec) {
    Dopri5Stepper stepper(rhs, y0, x0, x1, spec, false);
    stepper.run();
    return stepper.state();
}

DenseSolution ode_integrate_bidirectional(const OdeRhs& rhs, std::span<const double> y0,
                                          double anchor, double xmin, double xmax,
                                          const OdeSpec& spec) {
    if (!(xmin <= anchor && anchor <= xmax))
        throw std::invalid_argument("ode_integrate_bidirectional: anchor outside range");
    DenseSolution fwd = ode_integrate(rhs, y0, anchor, xmax, spec);
    if (anchor == xmin) return fwd;
    DenseSolution bwd = ode_integrate(rhs, y0, anchor, xmin, spec);
    return merge_dense(std::move(bwd), fwd);
}

} // namespace hmap

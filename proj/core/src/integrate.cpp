// integrate.cpp — Dormand-Prince 5(4) stepper specialised to dense linear systems

#include "blockade/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace blockade {

namespace {

// Dormand-Prince RK5(4)7M tableau.
constexpr double c2 = 1.0 / 5.0;
constexpr double c3 = 3.0 / 10.0;
constexpr double c4 = 4.0 / 5.0;
constexpr double c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;

// Fifth-order weights (also the seventh stage position: FSAL).
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;

// Difference between the fifth- and the embedded fourth-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

class Stepper {
public:
    Stepper(const Eigen::MatrixXcd& m, const IntegratorOptions& opts)
        : m_(m), opts_(opts)
    {
        const Eigen::Index n = m.rows();
        for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_}) k->resize(n);
        ytmp_.resize(n);
        yerr_.resize(n);
    }

    void start(const Eigen::VectorXcd& y0)
    {
        y_ = y0;
        t_ = 0.0;
        k1_.noalias() = m_ * y_;
        h_ = opts_.initial_step > 0.0 ? opts_.initial_step : estimate_initial_step();
        if (opts_.max_step > 0.0) h_ = std::min(h_, opts_.max_step);
    }

    // Advances the state exactly to t_target. A residual below the rounding
    // slack is snapped rather than stepped, so a clamped landing that falls
    // one ulp short cannot trip the underflow guard.
    void advance_to(double t_target)
    {
        const double slack = 32.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(t_target));
        while (t_ < t_target) {
            const double remaining = t_target - t_;
            if (remaining <= slack) break;
            double h = std::min(h_, remaining);
            if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
            step(h, remaining);
        }
        t_ = t_target;
    }

    double time() const { return t_; }
    const Eigen::VectorXcd& state() const { return y_; }

private:
    double estimate_initial_step() const
    {
        // Linear system: the fastest rate is bounded by a matrix norm.
        const double scale = m_.cwiseAbs().rowwise().sum().maxCoeff();
        if (!(scale > 0.0)) return 1.0;
        return 0.01 / scale;
    }

    void step(double h, double remaining)
    {
        const double underflow = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_));
        if (h < underflow) {
            std::ostringstream msg;
            msg << "integrate: step size underflow (h=" << h << ") at t=" << t_;
            throw std::runtime_error(msg.str());
        }

        k2_.noalias() = m_ * (ytmp_ = y_ + h * (a21 * k1_));
        k3_.noalias() = m_ * (ytmp_ = y_ + h * (a31 * k1_ + a32 * k2_));
        k4_.noalias() = m_ * (ytmp_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_));
        k5_.noalias() = m_ * (ytmp_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_));
        k6_.noalias() = m_ * (ytmp_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_));
        ytmp_ = y_ + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        k7_.noalias() = m_ * ytmp_;
        yerr_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

        double err = 0.0;
        for (Eigen::Index i = 0; i < y_.size(); ++i) {
            const double sc = opts_.abs_tol +
                              opts_.rel_tol * std::max(std::abs(y_[i]), std::abs(ytmp_[i]));
            const double r = std::abs(yerr_[i]) / sc;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(y_.size()));

        if (err <= 1.0) {
            t_ += h;
            y_.swap(ytmp_);
            k1_.swap(k7_); // first-same-as-last
            const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            double h_next = h * std::clamp(grow, 0.2, 5.0);
            // A step clamped to the output grid must not poison the controller.
            if (h >= remaining) h_next = std::max(h_next, h_);
            h_ = h_next;
        } else {
            h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }

    const Eigen::MatrixXcd& m_;
    IntegratorOptions opts_;
    Eigen::VectorXcd y_, ytmp_, yerr_;
    Eigen::VectorXcd k1_, k2_, k3_, k4_, k5_, k6_, k7_;
    double t_ = 0.0;
    double h_ = 0.0;
};

void check_grid(std::span<const double> t_grid)
{
    if (t_grid.empty()) throw std::invalid_argument("integrate: empty time grid");
    if (t_grid[0] != 0.0) throw std::invalid_argument("integrate: time grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw std::invalid_argument("integrate: time grid must be strictly ascending");
        }
    }
}

} // namespace

ExpectationTrajectory integrate(const Generator& gen, const Eigen::VectorXcd& y0,
                                std::span<const double> t_grid, const IntegratorOptions& opts)
{
    validate_generator(gen);
    check_grid(t_grid);
    if (y0.size() != static_cast<Eigen::Index>(gen.dim())) {
        throw std::invalid_argument("integrate: initial vector dimension does not match basis");
    }
    if (!y0.allFinite()) {
        throw std::invalid_argument("integrate: initial vector contains non-finite entries");
    }

    ExpectationTrajectory traj;
    traj.t.assign(t_grid.begin(), t_grid.end());
    traj.values.resize(y0.size(), static_cast<Eigen::Index>(t_grid.size()));
    traj.values.col(0) = y0;

    Stepper stepper(gen.matrix, opts);
    stepper.start(y0);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        stepper.advance_to(t_grid[i]);
        traj.values.col(static_cast<Eigen::Index>(i)) = stepper.state();
    }
    return traj;
}

Eigen::VectorXcd propagate_to(const Generator& gen, const Eigen::VectorXcd& y0, double t,
                              const IntegratorOptions& opts)
{
    if (t < 0.0) throw std::invalid_argument("propagate_to: negative time");
    if (t == 0.0) return y0;
    const double grid[] = {0.0, t};
    return integrate(gen, y0, grid, opts).back();
}

} // namespace blockade

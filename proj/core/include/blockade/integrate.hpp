// integrate.hpp — Adaptive Runge-Kutta propagation of expectation vectors

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blockade/generator.hpp"

namespace blockade {

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = 0.0;     // 0 means unlimited
    double initial_step = 0.0; // 0 means automatic
};

// Sampled solution of dy/dt = M y. Column i of values holds the expectation
// vector at t[i], ordered as the generator basis.
struct ExpectationTrajectory {
    std::vector<double> t;
    Eigen::MatrixXcd values;

    Eigen::VectorXcd at(std::size_t i) const { return values.col(static_cast<Eigen::Index>(i)); }
    Eigen::VectorXcd back() const { return values.col(values.cols() - 1); }
};

// Integrates from y0 at t_grid[0] = 0, landing on every grid point exactly
// (steps are clamped, never interpolated). Dormand-Prince 5(4) pair with PI
// step-size control. Throws std::invalid_argument on bad input and
// std::runtime_error on step-size underflow, reporting the offending time.
ExpectationTrajectory integrate(const Generator& gen, const Eigen::VectorXcd& y0,
                                std::span<const double> t_grid,
                                const IntegratorOptions& opts = {});

// Convenience: the solution vector at a single time t >= 0.
Eigen::VectorXcd propagate_to(const Generator& gen, const Eigen::VectorXcd& y0, double t,
                              const IntegratorOptions& opts = {});

} // namespace blockade

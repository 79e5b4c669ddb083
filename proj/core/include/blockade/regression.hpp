// regression.hpp — Two-time correlation functions via the quantum regression theorem

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blockade/generator.hpp"
#include "blockade/integrate.hpp"

namespace blockade {

// Sampled two-time correlation C(tau) = <A(t) B(t+tau)>, seeded at the
// absolute time t_anchor from a one-time expectation vector.
struct CorrelationFunction {
    std::vector<double> tau;
    Eigen::VectorXcd values;
    double t_anchor{0.0};
};

// Initial condition of the regression dynamics: y_k(0) = <A sigma_k>(t),
// obtained from the equal-time product rule. Products outside the basis
// contribute zero.
Eigen::VectorXcd seed_regression(const Generator& gen, TransitionLabel a,
                                 const Eigen::VectorXcd& state);

// Two-sided variant for sandwiched correlations: y_k(0) = <L sigma_k R>(t).
Eigen::VectorXcd seed_sandwich(const Generator& gen, TransitionLabel left, TransitionLabel right,
                               const Eigen::VectorXcd& state);

// C(tau) = <A(t) B(t+tau)> on tau_grid (ascending, starting at 0). C(0) is the
// seed component of B exactly; later samples evolve under the generator.
CorrelationFunction correlation(const Generator& gen, TransitionLabel a, TransitionLabel b,
                                const Eigen::VectorXcd& state_at_t, std::span<const double> tau_grid,
                                double t_anchor = 0.0, const IntegratorOptions& opts = {});

} // namespace blockade

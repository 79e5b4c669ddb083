// regression.cpp — Regression seeds and correlation propagation

#include "blockade/regression.hpp"

#include <stdexcept>

namespace blockade {

namespace {

std::size_t require_label(const OperatorBasis& basis, TransitionLabel l, const char* what)
{
    const auto k = basis.find(l);
    if (!k) throw std::invalid_argument(std::string(what) + ": label not in basis");
    return *k;
}

void check_state(const Generator& gen, const Eigen::VectorXcd& state)
{
    if (state.size() != static_cast<Eigen::Index>(gen.dim())) {
        throw std::invalid_argument("regression: state dimension does not match basis");
    }
}

} // namespace

Eigen::VectorXcd seed_regression(const Generator& gen, TransitionLabel a,
                                 const Eigen::VectorXcd& state)
{
    require_label(gen.basis, a, "seed_regression");
    check_state(gen, state);

    Eigen::VectorXcd seed = Eigen::VectorXcd::Zero(state.size());
    for (std::size_t k = 0; k < gen.dim(); ++k) {
        const TransitionLabel& s = gen.basis.label(k);
        if (a.to != s.from) continue;
        if (const auto p = gen.basis.find({a.from, s.to})) {
            seed[static_cast<Eigen::Index>(k)] = state[static_cast<Eigen::Index>(*p)];
        }
    }
    return seed;
}

Eigen::VectorXcd seed_sandwich(const Generator& gen, TransitionLabel left, TransitionLabel right,
                               const Eigen::VectorXcd& state)
{
    require_label(gen.basis, left, "seed_sandwich");
    require_label(gen.basis, right, "seed_sandwich");
    check_state(gen, state);

    Eigen::VectorXcd seed = Eigen::VectorXcd::Zero(state.size());
    for (std::size_t k = 0; k < gen.dim(); ++k) {
        const TransitionLabel& s = gen.basis.label(k);
        if (left.to != s.from || s.to != right.from) continue;
        if (const auto p = gen.basis.find({left.from, right.to})) {
            seed[static_cast<Eigen::Index>(k)] = state[static_cast<Eigen::Index>(*p)];
        }
    }
    return seed;
}

CorrelationFunction correlation(const Generator& gen, TransitionLabel a, TransitionLabel b,
                                const Eigen::VectorXcd& state_at_t, std::span<const double> tau_grid,
                                double t_anchor, const IntegratorOptions& opts)
{
    const std::size_t kb = require_label(gen.basis, b, "correlation");
    const Eigen::VectorXcd seed = seed_regression(gen, a, state_at_t);
    const ExpectationTrajectory traj = integrate(gen, seed, tau_grid, opts);

    CorrelationFunction c;
    c.tau.assign(tau_grid.begin(), tau_grid.end());
    c.values = traj.values.row(static_cast<Eigen::Index>(kb)).transpose();
    c.t_anchor = t_anchor;
    return c;
}

} // namespace blockade

// test_integrate.cpp — Adaptive integrator against closed forms and properties

#include <doctest.h>

#include <cmath>
#include <random>

#include "blockade/integrate.hpp"
#include "blockade/spectrum.hpp"

using namespace blockade;

namespace {

Generator scalar_decay(double rate)
{
    OperatorBasis basis({{0, 0}});
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = -rate;
    return {std::move(basis), std::move(m)};
}

// Random strictly stable complex matrix with unit-scale rates.
Generator random_stable(std::mt19937& rng, int dim)
{
    std::vector<TransitionLabel> labels;
    for (int i = 0; i < dim; ++i) labels.push_back({i, i});
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) m(r, c) = std::complex<double>(u(rng), u(rng));
    }
    m -= 2.0 * static_cast<double>(dim) * Eigen::MatrixXcd::Identity(dim, dim);
    return {OperatorBasis(std::move(labels)), std::move(m)};
}

Eigen::VectorXcd random_vector(std::mt19937& rng, int dim)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXcd y(dim);
    for (int i = 0; i < dim; ++i) y[i] = std::complex<double>(u(rng), u(rng));
    return y;
}

} // namespace

TEST_CASE("zero generator keeps the state constant")
{
    OperatorBasis basis({{0, 0}, {1, 1}, {0, 1}});
    Generator gen{basis, Eigen::MatrixXcd::Zero(3, 3)};
    Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(3);
    y0[0] = 1.0;

    const auto traj = integrate(gen, y0, uniform_grid(5.0, 11));
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        CHECK((traj.at(i) - y0).norm() == 0.0);
    }
}

TEST_CASE("scalar decay hits exp(-1) at t = 1/rate")
{
    const double rate = 3.7;
    const Generator gen = scalar_decay(rate);
    Eigen::VectorXcd y0(1);
    y0[0] = 1.0;

    const double grid[] = {0.0, 1.0 / rate};
    const auto traj = integrate(gen, y0, grid);
    CHECK(traj.values(0, 0) == std::complex<double>(1.0, 0.0)); // y(0) bitwise
    CHECK(std::abs(traj.values(0, 1).real() - std::exp(-1.0)) < 1e-9);
    CHECK(std::abs(traj.values(0, 1).real() - 0.3679) < 1e-4);
}

TEST_CASE("max_step cap still lands on the grid")
{
    const double rate = 3.7;
    const Generator gen = scalar_decay(rate);
    Eigen::VectorXcd y0(1);
    y0[0] = 1.0;
    IntegratorOptions opts;
    opts.max_step = 1e-3;
    const double grid[] = {0.0, 1.0 / rate};
    const auto traj = integrate(gen, y0, grid, opts);
    CHECK(std::abs(traj.values(0, 1).real() - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("input validation")
{
    const Generator gen = scalar_decay(1.0);
    Eigen::VectorXcd y0(1);
    y0[0] = 1.0;
    const double good[] = {0.0, 1.0};

    Eigen::VectorXcd wrong_dim(2);
    wrong_dim.setZero();
    CHECK_THROWS_AS(integrate(gen, wrong_dim, good), std::invalid_argument);

    Eigen::VectorXcd non_finite(1);
    non_finite[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(integrate(gen, non_finite, good), std::invalid_argument);

    const double not_from_zero[] = {1.0, 2.0};
    CHECK_THROWS_AS(integrate(gen, y0, not_from_zero), std::invalid_argument);
    const double not_ascending[] = {0.0, 2.0, 1.0};
    CHECK_THROWS_AS(integrate(gen, y0, not_ascending), std::invalid_argument);
}

TEST_CASE("step-size underflow is reported with the offending time")
{
    const Generator gen = scalar_decay(1e308);
    Eigen::VectorXcd y0(1);
    y0[0] = 1.0;
    const double grid[] = {0.0, 1.0};
    CHECK_THROWS_WITH_AS(integrate(gen, y0, grid),
                         doctest::Contains("underflow"), std::runtime_error);
}

TEST_CASE("linearity of the flow")
{
    std::mt19937 rng(12345);
    const Generator gen = random_stable(rng, 6);
    const Eigen::VectorXcd y0 = random_vector(rng, 6);
    const Eigen::VectorXcd z0 = random_vector(rng, 6);
    const std::complex<double> alpha{0.7, -0.3};
    const std::complex<double> beta{-1.1, 0.4};

    const auto grid = uniform_grid(2.0, 9);
    const auto a = integrate(gen, y0, grid);
    const auto b = integrate(gen, z0, grid);
    const auto c = integrate(gen, (alpha * y0 + beta * z0).eval(), grid);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXcd combined = alpha * a.at(i) + beta * b.at(i);
        CHECK((combined - c.at(i)).norm() < 1e-8);
    }
}

TEST_CASE("semigroup property: stepwise equals direct")
{
    std::mt19937 rng(98765);
    const Generator gen = random_stable(rng, 5);
    const Eigen::VectorXcd y0 = random_vector(rng, 5);
    const double t1 = 0.6, t2 = 1.1;

    const Eigen::VectorXcd mid = propagate_to(gen, y0, t1);
    const Eigen::VectorXcd stepwise = propagate_to(gen, mid, t2);
    const Eigen::VectorXcd direct = propagate_to(gen, y0, t1 + t2);
    CHECK((stepwise - direct).norm() < 1e-8);
}

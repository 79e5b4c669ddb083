// generator.cpp — Generator validation and population functionals

#include "blockade/generator.hpp"

#include <stdexcept>

namespace blockade {

void validate_generator(const Generator& gen)
{
    const auto n = static_cast<Eigen::Index>(gen.basis.size());
    if (gen.matrix.rows() != n || gen.matrix.cols() != n) {
        throw std::invalid_argument("Generator: matrix dimension does not match basis size");
    }
    if (!gen.matrix.allFinite()) {
        throw std::invalid_argument("Generator: matrix contains non-finite entries");
    }
}

Eigen::VectorXd population_sum_residual(const Generator& gen)
{
    Eigen::RowVectorXcd functional = Eigen::RowVectorXcd::Zero(gen.matrix.cols());
    for (std::size_t k : gen.basis.population_indices()) {
        functional += gen.matrix.row(static_cast<Eigen::Index>(k));
    }
    return functional.cwiseAbs().transpose();
}

double population_sum(const Generator& gen, const Eigen::VectorXcd& state)
{
    double total = 0.0;
    for (std::size_t k : gen.basis.population_indices()) {
        total += state[static_cast<Eigen::Index>(k)].real();
    }
    return total;
}

} // namespace blockade

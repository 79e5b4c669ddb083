// generator.hpp — Linear generator of expectation-value dynamics

#pragma once

#include <Eigen/Dense>

#include "blockade/basis.hpp"

namespace blockade {

// d<sigma_k>/dt = sum_l matrix(k, l) <sigma_l>, with rows/columns ordered as
// the basis. Units of matrix entries are rates (1/time). Immutable after
// construction; all operations on it are pure.
struct Generator {
    OperatorBasis basis;
    Eigen::MatrixXcd matrix;

    std::size_t dim() const { return basis.size(); }
};

// Throws std::invalid_argument on shape mismatch or non-finite entries.
void validate_generator(const Generator& gen);

// Per-column absolute value of the population-row sum functional applied to
// the generator, |1_pop^T M|. A conservative model annihilates every column.
Eigen::VectorXd population_sum_residual(const Generator& gen);

// Sum of the population components of an expectation vector (the trace of the
// underlying state when the populations partition it).
double population_sum(const Generator& gen, const Eigen::VectorXcd& state);

} // namespace blockade

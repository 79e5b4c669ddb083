// spectrum.hpp — Power spectra of two-time correlations

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blockade/regression.hpp"

namespace blockade {

// S(delta) sampled on a detuning grid, delta = omega - omega_0 of the driven
// transition, in the same rate units as the generator.
struct Spectrum {
    std::vector<double> delta;
    Eigen::VectorXd values;

    Spectrum& operator+=(const Spectrum& other);
};

enum class SpectrumMethod { quadrature, resolvent };

struct QuadratureOptions {
    // |C(tau_max)| must not exceed this fraction of max |C|.
    double residual_cutoff = 1e-3;
};

// S(delta) = prefactor * Re \int_0^{tau_max} C(tau) e^{-i delta tau} dtau via
// composite quadrature on the tau grid (Simpson on uniform odd-count grids,
// trapezoid otherwise). Throws std::runtime_error when C has not decayed at
// tau_max, reporting the residual fraction.
Spectrum spectrum_quadrature(const CorrelationFunction& c, double prefactor,
                             std::span<const double> delta_grid,
                             const QuadratureOptions& opts = {});

struct ResolventOptions {
    // Largest admissible read-component amplitude of a non-decaying mode,
    // relative to the seed's largest entry.
    double nondecaying_tolerance = 1e-3;
};

// Spectral decomposition of a generator, reusable across resolvent
// evaluations with different seeds and read labels.
class GeneratorModes {
public:
    explicit GeneratorModes(const Generator& gen);

    const Generator& generator() const { return *gen_; }
    const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }

    // Mode amplitudes a with V a = seed. Throws std::runtime_error when the
    // eigenvector matrix is too ill-conditioned to reconstruct the seed.
    Eigen::VectorXcd mode_amplitudes(const Eigen::VectorXcd& seed) const;

    const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }
    double decay_threshold() const { return decay_threshold_; }

private:
    const Generator* gen_;
    Eigen::MatrixXcd eigenvectors_;
    Eigen::VectorXcd eigenvalues_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double decay_threshold_{0.0};
};

// S(delta) = prefactor * Re[e_B^T (i delta I - M)^{-1} y(0)] with y(0) the
// regression seed for (A, B). Evaluated mode-by-mode from the spectral
// decomposition, which makes the infinite-time integral exact and lets the
// seed's non-decaying content be checked: modes with Re(lambda) ~ 0 must not
// contribute to the read component beyond opts.nondecaying_tolerance
// (std::runtime_error otherwise); validated contributions are dropped.
Spectrum spectrum_resolvent(const GeneratorModes& modes, TransitionLabel a, TransitionLabel b,
                            const Eigen::VectorXcd& state_at_t, double prefactor,
                            std::span<const double> delta_grid, const ResolventOptions& opts = {});

Spectrum spectrum_resolvent(const Generator& gen, TransitionLabel a, TransitionLabel b,
                            const Eigen::VectorXcd& state_at_t, double prefactor,
                            std::span<const double> delta_grid, const ResolventOptions& opts = {});

// Uniform grid of n points spanning [-half_span, +half_span]; odd n lands a
// point on delta = 0.
std::vector<double> symmetric_grid(double half_span, std::size_t n);

// Uniform grid of n points over [0, upper].
std::vector<double> uniform_grid(double upper, std::size_t n);

// Correlation sample count for a window tau_max and the largest angular
// frequency present: >= 64 samples per cycle, rounded up to 2^k + 1 so the
// quadrature runs composite Simpson. Never below `minimum`.
std::size_t auto_tau_samples(double tau_max, double frequency_scale, std::size_t minimum = 4097);

} // namespace blockade

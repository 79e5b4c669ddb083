// spectrum.cpp — Quadrature and resolvent spectrum evaluation

#include "blockade/spectrum.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "blockade/parallel.hpp"

namespace blockade {

using std::complex;

Spectrum& Spectrum::operator+=(const Spectrum& other)
{
    if (delta.size() != other.delta.size()) {
        throw std::invalid_argument("Spectrum: mismatched detuning grids");
    }
    values += other.values;
    return *this;
}

namespace {

bool grid_is_uniform(std::span<const double> g)
{
    if (g.size() < 3) return false;
    const double h = g[1] - g[0];
    for (std::size_t i = 2; i < g.size(); ++i) {
        if (std::abs((g[i] - g[i - 1]) - h) > 1e-9 * std::abs(h)) return false;
    }
    return true;
}

} // namespace

Spectrum spectrum_quadrature(const CorrelationFunction& c, double prefactor,
                             std::span<const double> delta_grid, const QuadratureOptions& opts)
{
    const std::size_t n = c.tau.size();
    if (n < 2 || static_cast<std::size_t>(c.values.size()) != n) {
        throw std::invalid_argument("spectrum_quadrature: correlation needs >= 2 samples");
    }
    if (delta_grid.empty()) throw std::invalid_argument("spectrum_quadrature: empty detuning grid");

    const double peak = c.values.cwiseAbs().maxCoeff();
    const double tail = std::abs(c.values[static_cast<Eigen::Index>(n - 1)]);
    if (peak > 0.0 && tail > opts.residual_cutoff * peak) {
        std::ostringstream msg;
        msg << "spectrum_quadrature: correlation has not decayed at tau_max="
            << c.tau.back() << " (residual fraction " << tail / peak << ", cutoff "
            << opts.residual_cutoff << ")";
        throw std::runtime_error(msg.str());
    }

    const bool simpson = grid_is_uniform(c.tau) && (n % 2 == 1);

    Spectrum s;
    s.delta.assign(delta_grid.begin(), delta_grid.end());
    s.values.resize(static_cast<Eigen::Index>(delta_grid.size()));

    parallel_for(delta_grid.size(), [&](std::size_t di) {
        const double delta = delta_grid[di];
        complex<double> acc{0.0, 0.0};
        auto phased = [&](std::size_t i) {
            const double phi = -delta * c.tau[i];
            return c.values[static_cast<Eigen::Index>(i)] * complex<double>(std::cos(phi), std::sin(phi));
        };
        if (simpson) {
            const double h = c.tau[1] - c.tau[0];
            acc = phased(0) + phased(n - 1);
            for (std::size_t i = 1; i + 1 < n; i += 2) acc += 4.0 * phased(i);
            for (std::size_t i = 2; i + 1 < n; i += 2) acc += 2.0 * phased(i);
            acc *= h / 3.0;
        } else {
            complex<double> prev = phased(0);
            for (std::size_t i = 1; i < n; ++i) {
                const complex<double> cur = phased(i);
                acc += 0.5 * (prev + cur) * (c.tau[i] - c.tau[i - 1]);
                prev = cur;
            }
        }
        s.values[static_cast<Eigen::Index>(di)] = prefactor * acc.real();
    });
    return s;
}

GeneratorModes::GeneratorModes(const Generator& gen) : gen_(&gen)
{
    validate_generator(gen);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(gen.matrix, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("GeneratorModes: eigendecomposition failed");
    }
    eigenvectors_ = solver.eigenvectors();
    eigenvalues_ = solver.eigenvalues();
    lu_ = Eigen::PartialPivLU<Eigen::MatrixXcd>(eigenvectors_);

    const double rate_scale = std::max(eigenvalues_.cwiseAbs().maxCoeff(),
                                       gen.matrix.cwiseAbs().maxCoeff());
    decay_threshold_ = 1e-10 * std::max(rate_scale, 1e-300);
}

Eigen::VectorXcd GeneratorModes::mode_amplitudes(const Eigen::VectorXcd& seed) const
{
    Eigen::VectorXcd a = lu_.solve(seed);
    const double seed_norm = seed.norm();
    if (seed_norm > 0.0) {
        const double residual = (eigenvectors_ * a - seed).norm() / seed_norm;
        if (!(residual < 1e-7)) {
            std::ostringstream msg;
            msg << "GeneratorModes: near-singular eigenvector matrix "
                   "(seed reconstruction residual " << residual << ")";
            throw std::runtime_error(msg.str());
        }
    }
    return a;
}

Spectrum spectrum_resolvent(const GeneratorModes& modes, TransitionLabel a, TransitionLabel b,
                            const Eigen::VectorXcd& state_at_t, double prefactor,
                            std::span<const double> delta_grid, const ResolventOptions& opts)
{
    if (delta_grid.empty()) throw std::invalid_argument("spectrum_resolvent: empty detuning grid");
    const Generator& gen = modes.generator();
    const auto kb = gen.basis.find(b);
    if (!kb) throw std::invalid_argument("spectrum_resolvent: read label not in basis");

    const Eigen::VectorXcd seed = seed_regression(gen, a, state_at_t);
    const double seed_scale = seed.cwiseAbs().maxCoeff();

    Spectrum s;
    s.delta.assign(delta_grid.begin(), delta_grid.end());
    s.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(delta_grid.size()));
    if (seed_scale == 0.0) return s;

    const Eigen::VectorXcd amplitudes = modes.mode_amplitudes(seed);
    const Eigen::VectorXcd& lambda = modes.eigenvalues();

    // Read-component weight of each mode; split off the non-decaying ones.
    std::vector<complex<double>> weights;
    std::vector<complex<double>> poles;
    weights.reserve(static_cast<std::size_t>(lambda.size()));
    poles.reserve(static_cast<std::size_t>(lambda.size()));
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const complex<double> w =
            amplitudes[i] * modes.eigenvectors()(static_cast<Eigen::Index>(*kb), i);
        if (lambda[i].real() >= -modes.decay_threshold()) {
            if (std::abs(w) > opts.nondecaying_tolerance * seed_scale) {
                std::ostringstream msg;
                msg << "spectrum_resolvent: seed has a non-decaying component of relative "
                       "amplitude " << std::abs(w) / seed_scale << " at the read label "
                       "(Re lambda = " << lambda[i].real() << ")";
                throw std::runtime_error(msg.str());
            }
            continue; // validated small; drop from the integral
        }
        if (std::abs(w) == 0.0) continue;
        weights.push_back(w);
        poles.push_back(lambda[i]);
    }

    parallel_for(delta_grid.size(), [&](std::size_t di) {
        const complex<double> i_delta{0.0, delta_grid[di]};
        complex<double> acc{0.0, 0.0};
        for (std::size_t m = 0; m < weights.size(); ++m) {
            acc += weights[m] / (i_delta - poles[m]);
        }
        s.values[static_cast<Eigen::Index>(di)] = prefactor * acc.real();
    });
    return s;
}

Spectrum spectrum_resolvent(const Generator& gen, TransitionLabel a, TransitionLabel b,
                            const Eigen::VectorXcd& state_at_t, double prefactor,
                            std::span<const double> delta_grid, const ResolventOptions& opts)
{
    return spectrum_resolvent(GeneratorModes(gen), a, b, state_at_t, prefactor, delta_grid, opts);
}

std::vector<double> symmetric_grid(double half_span, std::size_t n)
{
    if (n < 2 || !(half_span > 0.0)) {
        throw std::invalid_argument("symmetric_grid: need n >= 2 and a positive span");
    }
    std::vector<double> g(n);
    const double step = 2.0 * half_span / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = -half_span + step * static_cast<double>(i);
    if (n % 2 == 1) g[n / 2] = 0.0;
    return g;
}

std::vector<double> uniform_grid(double upper, std::size_t n)
{
    if (n < 2 || !(upper > 0.0)) {
        throw std::invalid_argument("uniform_grid: need n >= 2 and a positive upper bound");
    }
    std::vector<double> g(n);
    const double step = upper / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = step * static_cast<double>(i);
    g.back() = upper;
    return g;
}

std::size_t auto_tau_samples(double tau_max, double frequency_scale, std::size_t minimum)
{
    const double cycles = tau_max * std::max(frequency_scale, 0.0) / (2.0 * M_PI);
    const double wanted = std::max(static_cast<double>(minimum), 64.0 * cycles);
    std::size_t n = 4096;
    while (static_cast<double>(n) + 1.0 < wanted && n < (1u << 24)) n *= 2;
    return n + 1;
}

} // namespace blockade

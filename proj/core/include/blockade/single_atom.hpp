// single_atom.hpp — Driven three-level atom with a metastable pooling state

#pragma once

#include <span>

#include "blockade/generator.hpp"
#include "blockade/spectrum.hpp"

namespace blockade::single_atom {

// State ids of the level scheme: ground |g>, Rydberg |r> and the pooling
// state |d> that collects population leaking out of the driven transition.
inline constexpr std::int32_t kGround = 0;
inline constexpr std::int32_t kRydberg = 1;
inline constexpr std::int32_t kPooled = 2;

inline constexpr TransitionLabel kSigmaGG{kGround, kGround};
inline constexpr TransitionLabel kSigmaRR{kRydberg, kRydberg};
inline constexpr TransitionLabel kSigmaGR{kGround, kRydberg};
inline constexpr TransitionLabel kSigmaRG{kRydberg, kGround};
inline constexpr TransitionLabel kSigmaDD{kPooled, kPooled};

// Rates of one atom: gamma is emission into the probe mode, gamma_rg the
// remaining |r> -> |g> decay, gamma_rd the |r> -> |d> decay, omega the Rabi
// frequency of the drive. All in the same rate unit.
struct RateParams {
    double gamma{0.0};
    double gamma_rg{0.0};
    double gamma_rd{0.0};
    double omega{0.0};

    // Total Rydberg decay rate Gamma = gamma + gamma_rg + gamma_rd.
    double total_decay() const { return gamma + gamma_rg + gamma_rd; }

    // Steady excited fraction of the driven two-level subsystem,
    // x = Omega^2 / (Gamma^2 + 2 Omega^2).
    double steady_excited_fraction() const;

    void validate() const; // throws std::invalid_argument
};

enum class Regime { strong_field, intermediate, weak_field };

struct RegimeThresholds {
    double strong = 10.0; // strong field for omega/Gamma >= strong
    double weak = 0.1;    // weak field for omega/Gamma <= weak
};

Regime classify_regime(const RateParams& p, const RegimeThresholds& thresholds = {});
const char* regime_name(Regime r);

// Omega = 2 sqrt(f gamma) for a constant input photon rate f.
double rabi_from_photon_rate(double photon_rate, double gamma);

// Equations of motion over the 5-label basis
// {sigma_gg, sigma_rr, sigma_gr, sigma_rg, sigma_dd}; the sigma_dd row keeps
// the trace closed. Population is conserved exactly.
Generator generator(const RateParams& p);

// Expectation vector of the pure ground state.
Eigen::VectorXcd ground_state();

// Strong-drive lineshape behind the analytic spectra: a central Lorentzian of
// half-width Gamma/2 at delta = 0 plus two sidebands of half-width
// (3 Gamma - gamma_rd)/4 at delta = +-omega, scaled by gamma. With
// gamma_rd = 0 this is the Mollow triplet with 3:1 peak ratio.
double triplet_lineshape(double delta, double omega, double total_decay, double gamma_rd,
                         double gamma);

// Quasi-steady-state spectrum in the strong-field regime at seed time t:
// exp(-x gamma_rd t) * triplet_lineshape. Warns (does not fail) outside the
// regime or for t below the quasi-steady threshold 8/Gamma.
Spectrum sfl_spectrum_analytic(const RateParams& p, double t, std::span<const double> delta_grid);

// Weak-field single-peak spectrum, half-width gamma_rd omega^2 / Gamma^2.
// Throws std::invalid_argument for gamma_rd = 0 (degenerate zero-width peak).
Spectrum wfl_spectrum_analytic(const RateParams& p, double t, std::span<const double> delta_grid);

// Quasi-steady threshold used by the analytic spectra.
inline double quasi_steady_time(const RateParams& p) { return 8.0 / p.total_decay(); }

struct NumericSpectrumOptions {
    SpectrumMethod method = SpectrumMethod::quadrature;
    double tau_max = 0.0;        // 0: 12 / slowest relevant rate
    std::size_t tau_samples = 0; // 0: resolution-matched to the frequency scale
    double residual_cutoff = 1e-3;
    double nondecaying_tolerance = 1e-3;
    IntegratorOptions ode{};
};

// Spectrum of the regression correlation <sigma_rg(t) sigma_gr(t+tau)> with
// prefactor gamma, seeded from the ground state evolved to t. Works in any
// regime; warns below the quasi-steady threshold.
Spectrum numeric_spectrum(const RateParams& p, double t, std::span<const double> delta_grid,
                          const NumericSpectrumOptions& opts = {});

// Default correlation window: 12 / (slowest decay rate of the regression
// dynamics). In the weak-field regime the optical-pumping rate
// x gamma_rd, not Gamma/2, is the slow scale.
double default_correlation_window(const RateParams& p);

} // namespace blockade::single_atom

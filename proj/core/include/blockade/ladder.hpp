// ladder.hpp — Collective rung ladder of a fully blockaded N-atom ensemble

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "blockade/single_atom.hpp"

namespace blockade::ladder {

// Incoherent flipping through the unsymmetrical collective states, folded
// into per-rung extra decay rates D_rg^j, D_rd^j. A single remaining ground
// atom has no unsymmetrical partners, so D^1 = 0 in every model.
class FlippingModel {
public:
    static FlippingModel none();
    // D_rg^j = (j-1) c_rg, D_rd^j = (j-1) c_rd.
    static FlippingModel proportional(double c_rg, double c_rd);
    // Explicit per-rung tables for j = 1..N (index j-1); entry 0 must be 0.
    static FlippingModel table(std::vector<double> d_rg, std::vector<double> d_rd);

    double d_rg(int j) const;
    double d_rd(int j) const;
    bool is_none() const { return std::holds_alternative<None>(model_); }

    std::string describe() const;

private:
    struct None {};
    struct Proportional {
        double c_rg;
        double c_rd;
    };
    struct Table {
        std::vector<double> d_rg;
        std::vector<double> d_rd;
    };

    std::variant<None, Proportional, Table> model_;
};

// Effective rates of rung j = 1..N (stored at index j-1):
//   omega_j    = sqrt(j) Omega
//   gamma_rg_j = gamma_rg + j gamma + D_rg^j
//   gamma_rd_j = gamma_rd + D_rd^j
//   total_j    = gamma_rg_j + gamma_rd_j
struct CollectiveRates {
    std::vector<double> omega;
    std::vector<double> gamma_rg;
    std::vector<double> gamma_rd;
    std::vector<double> total;

    double min_total() const;
    double max_total() const;
};

struct LadderParams {
    int n_atoms{1};
    single_atom::RateParams rates{};
    FlippingModel flipping = FlippingModel::none();

    void validate() const;
    CollectiveRates collective_rates() const;

    // Per-rung strong-field ratios sqrt(j) Omega / Gamma_j.
    std::vector<double> sfl_ratios() const;
};

// Expectations of one time sample, per rung j = 1..N at index j-1, plus the
// population of the fully pooled sink state.
struct LadderState {
    std::vector<double> g_pop;                   // <sigma_{G_j G_j}>
    std::vector<double> w_pop;                   // <sigma_{W_j W_j}>
    std::vector<std::complex<double>> coherence; // <sigma_{G_j W_j}>
    double dark_pop{0.0};                        // <sigma_{G_0 G_0}>
};

// Number of ground configurations with j of n atoms still in |g> (binomial
// coefficient). Throws std::out_of_range for j outside 0..n and
// std::overflow_error beyond 64-bit range.
std::uint64_t multiplicity(int n, int j);

// Number of decay paths from one excited state of rung j+1 into the rung-j
// ground manifold.
inline int feed_path_count(int j_plus_1) { return j_plus_1; }

// Basis label helpers. Rung state ids: G_j -> 2j, W_j -> 2j+1, sink G_0 -> 0.
TransitionLabel label_gg(int j);
TransitionLabel label_ww(int j);
TransitionLabel label_gw(int j);
TransitionLabel label_wg(int j);
TransitionLabel label_sink();

// Equations of motion over the 4N+1 labels
// {GG_j, WW_j, GW_j, WG_j}_{j=1..N} + {G0 G0}. Rung j is driven at sqrt(j)
// Omega, decays at its collective rates and is fed by the rung-(j+1) pooling
// decay; the sink row collects the rung-1 pooling decay. The feeding
// coefficient gamma_rd^{j+1} is already the aggregate over the j+1 decay
// paths out of one excited state (per-path rate gamma_rd^{j+1}/(j+1) times
// feed_path_count), so no multiplicity appears in the matrix. The dimension
// is linear in N: no exponential state enumeration anywhere.
Generator generator(const LadderParams& p);

// Everything in the symmetric ground state of the full ensemble.
Eigen::VectorXcd initial_state_vector(const LadderParams& p);

Eigen::VectorXcd state_to_vector(const LadderParams& p, const LadderState& s);
LadderState state_from_vector(const LadderParams& p, const Eigen::VectorXcd& y);

// Integrates from the standard initial state (or a custom one) over t_grid.
std::vector<LadderState> evolve(const LadderParams& p, std::span<const double> t_grid,
                                const std::optional<LadderState>& initial = std::nullopt,
                                const IntegratorOptions& opts = {});

// Rung populations p_j = g_pop_j + w_pop_j for j >= 1 and p_0 = dark_pop,
// returned as (p_0, ..., p_N).
std::vector<double> rung_populations(const LadderState& s);

// Quasi-steady seeding threshold 8 / min_j Gamma_j.
double default_seed_time(const LadderParams& p);

// Correlation window 12 / (min_j Gamma_j / 2).
double default_tau_max(const LadderParams& p);

// Detuning half-span 1.5 sqrt(N) Omega covering every sideband.
double default_delta_span(const LadderParams& p);

struct SpectrumOptions {
    SpectrumMethod method = SpectrumMethod::quadrature;
    double tau_max = 0.0;        // 0: default_tau_max
    std::size_t tau_samples = 0; // 0: resolution-matched
    double residual_cutoff = 1e-3;
    double nondecaying_tolerance = 1e-3;
    double sfl_warning_ratio = 5.0; // warn when a rung falls below this ratio
    IntegratorOptions ode{};
};

// Quasi-steady-state power spectrum of the scattered field at seed time t:
// the sum over rungs of j gamma times the spectrum of
// <sigma_{G_j W_j}(t) sigma_{W_j G_j}(t+tau)>, each computed by regression
// over the full ladder generator. Warns when t is below the quasi-steady
// threshold or a rung is outside the strong-field regime.
Spectrum scattered_spectrum(const LadderParams& p, double t, std::span<const double> delta_grid,
                            const SpectrumOptions& opts = {});

// Scattered intensity sum_j j gamma <sigma_{W_j W_j}> of one sample.
double scattered_intensity(const LadderParams& p, const LadderState& s);

struct G2Result {
    std::vector<double> tau;
    Eigen::VectorXd unnormalized; // sum_j gamma^2 j^2 <GW(t1) GW WG(t1+tau) WG(t1)>
    Eigen::VectorXd normalized;   // divided by I(t1) I(t1+tau)
};

// Second-order correlation of the scattered field, per-rung sandwich
// regression seeded at t1 from the standard initial state.
G2Result g2(const LadderParams& p, double t1, std::span<const double> tau_grid,
            const IntegratorOptions& opts = {});

} // namespace blockade::ladder

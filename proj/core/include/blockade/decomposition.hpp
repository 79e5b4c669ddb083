// decomposition.hpp — Reduced rung-population model and closed-form analytics

#pragma once

#include <span>
#include <vector>

#include "blockade/ladder.hpp"

namespace blockade::decomposition {

using ladder::CollectiveRates;
using ladder::LadderParams;

// Rung populations <p_j>(t); row j of p holds p_j for j = 0..N.
struct PjTrajectory {
    std::vector<double> t;
    Eigen::MatrixXd p;

    int n_atoms() const { return static_cast<int>(p.rows()) - 1; }
    std::vector<double> at(std::size_t i) const;
};

// Linear cascade dp_j/dt = -(gamma_rd^j p_j - gamma_rd^{j+1} p_{j+1}) / 2 with
// p_{N+1} = 0, integrated with the same engine as the full ladder (the sink
// row p_0 is carried along, keeping the sum a conserved linear invariant).
// Starts from p_N(0) = 1.
PjTrajectory evolve_pj(const LadderParams& p, std::span<const double> t_grid,
                       const IntegratorOptions& opts = {});

// The same trajectory extracted from a full-ladder integration, so fractions
// and downstream reports can be produced from either source.
PjTrajectory pj_from_ladder(const LadderParams& p, std::span<const double> t_grid,
                            const IntegratorOptions& opts = {});

// Generator of the cascade over the population pseudo-basis (p_0, ..., p_N).
Generator pj_generator(const LadderParams& p);

// Uniform-rate closed form, evaluated in log space:
//   p_j = (gamma_rd t)^{N-j} / (2^{N-j} (N-j)!) exp(-gamma_rd t / 2), j >= 1
// and p_0 = 1 - sum_{j>=1} p_j. Returns (p_0, ..., p_N).
std::vector<double> pj_closed_form(int n, double gamma_rd, double t);

// Quasi-steady-state spectrum sum_j j <p_j>(t) A[Omega_j, Gamma_j](delta)
// with the strong-drive lineshape of the single-atom module per rung; the
// time dependence enters only through the populations.
Spectrum spectrum_analytic(const LadderParams& p, double t, std::span<const double> delta_grid,
                           const IntegratorOptions& opts = {});

// Atomic state fractions along a population trajectory:
//   pooled     P_d  = 1 - sum_j (j/N) p_j
//   all_pooled P_G0 = 1 - sum_{j>=1} p_j
//   rydberg    P_r  = sum_{j>=1} p_j / (2N)            (smooth part)
// rydberg_oscillatory adds the damped drive oscillation of the top rung.
// pooled_rate_fd differentiates P_d on the grid; pooled_rate_identity is
// (gamma_rd / 2N)(1 - P_G0), exact for uniform rates. Both are returned so
// the residual under flipping can be inspected rather than asserted away.
struct FractionReport {
    std::vector<double> t;
    std::vector<double> pooled;
    std::vector<double> all_pooled;
    std::vector<double> rydberg;
    std::vector<double> rydberg_oscillatory;
    std::vector<double> pooled_rate_fd;
    std::vector<double> pooled_rate_identity;
};

FractionReport fractions(const PjTrajectory& traj, const LadderParams& p);

// Relaxation time of the uniform-rate cascade,
//   t_r = (2N / gamma_rd) (2 pi N)^{1/(2N)} (1 - 2/sqrt(N)).
// Rejects N <= 4, where the onset factor is non-positive (the numeric route
// below still evaluates).
double relaxation_time_closed_form(int n, double gamma_rd);

struct RelaxationDiagnostics {
    double relaxation_time;  // (e - 2e/sqrt(N)) * onset_time
    double onset_time;       // t_c solving (gamma_rd t / 2)^N / N! = 1
    double eta_at_max_slope; // e - e/sqrt(N)
};

// Onset-of-divergence route: t_c from exact-factorial bisection in log space,
// then the maximum-slope criterion of the scaled tail profile.
RelaxationDiagnostics relaxation_time_numeric(int n, double gamma_rd);

// Scaled leading tail term f[N, eta] = eta^N exp(-N eta / e); rises
// monotonically to 1 at eta = e, steepest at eta_at_max_slope.
double relaxation_onset_profile(int n, double eta);

// Rydberg fraction after the drive is switched back on over a decayed
// diagonal state with rung populations pj = (p_0, ..., p_N):
//   P_r(dt) = (1 / 2N) sum_j p_j (1 - cos(sqrt(j) Omega dt)).
// Valid for dt well inside 1/Gamma_j; warns when the grid extends beyond
// 0.1 / max_j Gamma_j.
std::vector<double> rabi_revival(std::span<const double> pj, const LadderParams& p,
                                 std::span<const double> dt_grid);

} // namespace blockade::decomposition

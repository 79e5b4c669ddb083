// decomposition.cpp — Population cascade, fractions and relaxation analytics

#include "blockade/decomposition.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "blockade/warnings.hpp"

namespace blockade::decomposition {

std::vector<double> PjTrajectory::at(std::size_t i) const
{
    std::vector<double> out(static_cast<std::size_t>(p.rows()));
    for (Eigen::Index j = 0; j < p.rows(); ++j) out[static_cast<std::size_t>(j)] = p(j, static_cast<Eigen::Index>(i));
    return out;
}

Generator pj_generator(const LadderParams& p)
{
    const CollectiveRates rates = p.collective_rates();
    const int n = p.n_atoms;

    std::vector<TransitionLabel> labels;
    labels.reserve(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) labels.push_back({j, j});

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (int j = 1; j <= n; ++j) {
        m(j, j) -= rates.gamma_rd[static_cast<std::size_t>(j - 1)] / 2.0;
        if (j < n) m(j, j + 1) += rates.gamma_rd[static_cast<std::size_t>(j)] / 2.0;
    }
    m(0, 1) += rates.gamma_rd[0] / 2.0;

    return Generator{OperatorBasis(std::move(labels)), std::move(m)};
}

PjTrajectory evolve_pj(const LadderParams& p, std::span<const double> t_grid,
                       const IntegratorOptions& opts)
{
    const Generator gen = pj_generator(p);
    Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(p.n_atoms + 1);
    y0[p.n_atoms] = 1.0;

    const ExpectationTrajectory traj = integrate(gen, y0, t_grid, opts);

    PjTrajectory out;
    out.t = traj.t;
    out.p = traj.values.real();
    return out;
}

PjTrajectory pj_from_ladder(const LadderParams& p, std::span<const double> t_grid,
                            const IntegratorOptions& opts)
{
    const auto states = ladder::evolve(p, t_grid, std::nullopt, opts);
    PjTrajectory traj;
    traj.t.assign(t_grid.begin(), t_grid.end());
    traj.p.resize(p.n_atoms + 1, static_cast<Eigen::Index>(t_grid.size()));
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const auto rp = ladder::rung_populations(states[i]);
        for (int j = 0; j <= p.n_atoms; ++j) {
            traj.p(j, static_cast<Eigen::Index>(i)) = rp[static_cast<std::size_t>(j)];
        }
    }
    return traj;
}

std::vector<double> pj_closed_form(int n, double gamma_rd, double t)
{
    if (n < 1) throw std::invalid_argument("pj_closed_form: need n >= 1");
    if (gamma_rd < 0.0 || t < 0.0) throw std::invalid_argument("pj_closed_form: negative input");

    std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
    const double half_phase = gamma_rd * t / 2.0;
    if (half_phase == 0.0) {
        p[static_cast<std::size_t>(n)] = 1.0;
        return p;
    }

    const double log_phase = std::log(half_phase);
    double tail = 0.0;
    for (int j = 1; j <= n; ++j) {
        const int k = n - j;
        const double log_pj = k * log_phase - std::lgamma(k + 1.0) - half_phase;
        const double pj = std::exp(log_pj);
        p[static_cast<std::size_t>(j)] = pj;
        tail += pj;
    }
    p[0] = 1.0 - tail;
    return p;
}

Spectrum spectrum_analytic(const LadderParams& p, double t, std::span<const double> delta_grid,
                           const IntegratorOptions& opts)
{
    const CollectiveRates rates = p.collective_rates();
    if (t < ladder::default_seed_time(p)) {
        std::ostringstream msg;
        msg << "spectrum_analytic: seed time t=" << t << " is below the quasi-steady threshold "
            << ladder::default_seed_time(p);
        emit_warning(msg.str());
    }
    const std::vector<double> ratios = p.sfl_ratios();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (ratios[i] < 5.0) {
            std::ostringstream msg;
            msg << "spectrum_analytic: rung " << i + 1 << " drive ratio " << ratios[i]
                << " is below 5; the per-rung lineshape degrades outside the strong-field regime";
            emit_warning(msg.str());
            break;
        }
    }

    std::vector<double> pj(static_cast<std::size_t>(p.n_atoms + 1), 0.0);
    if (t == 0.0) {
        pj[static_cast<std::size_t>(p.n_atoms)] = 1.0;
    } else {
        const double grid[] = {0.0, t};
        const PjTrajectory traj = evolve_pj(p, grid, opts);
        pj = traj.at(1);
    }

    Spectrum s;
    s.delta.assign(delta_grid.begin(), delta_grid.end());
    s.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(delta_grid.size()));
    for (int j = 1; j <= p.n_atoms; ++j) {
        const std::size_t i = static_cast<std::size_t>(j - 1);
        const double weight = j * pj[static_cast<std::size_t>(j)];
        if (weight == 0.0) continue;
        for (std::size_t d = 0; d < delta_grid.size(); ++d) {
            s.values[static_cast<Eigen::Index>(d)] +=
                weight * single_atom::triplet_lineshape(delta_grid[d], rates.omega[i],
                                                        rates.total[i], rates.gamma_rd[i],
                                                        p.rates.gamma);
        }
    }
    return s;
}

FractionReport fractions(const PjTrajectory& traj, const LadderParams& p)
{
    const int n = p.n_atoms;
    if (traj.n_atoms() != n) {
        throw std::invalid_argument("fractions: trajectory does not match n_atoms");
    }
    const std::size_t samples = traj.t.size();
    const double omega_top = std::sqrt(static_cast<double>(n)) * p.rates.omega;
    const double gamma_rg_top = p.collective_rates().gamma_rg.back();

    FractionReport r;
    r.t = traj.t;
    r.pooled.resize(samples);
    r.all_pooled.resize(samples);
    r.rydberg.resize(samples);
    r.rydberg_oscillatory.resize(samples);
    r.pooled_rate_fd.resize(samples);
    r.pooled_rate_identity.resize(samples);

    for (std::size_t i = 0; i < samples; ++i) {
        double weighted = 0.0;
        double survival = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double pj = traj.p(j, static_cast<Eigen::Index>(i));
            weighted += static_cast<double>(j) / n * pj;
            survival += pj;
        }
        const double t = traj.t[i];
        const double p_top = traj.p(n, static_cast<Eigen::Index>(i));
        r.pooled[i] = 1.0 - weighted;
        r.all_pooled[i] = 1.0 - survival;
        r.rydberg[i] = survival / (2.0 * n);
        r.rydberg_oscillatory[i] =
            r.rydberg[i] -
            p_top / (2.0 * n) * std::cos(omega_top * t) * std::exp(-0.75 * gamma_rg_top * t);
        r.pooled_rate_identity[i] = p.rates.gamma_rd / (2.0 * n) * (1.0 - r.all_pooled[i]);
    }

    for (std::size_t i = 0; i < samples; ++i) {
        if (i == 0) {
            r.pooled_rate_fd[i] = (r.pooled[1] - r.pooled[0]) / (r.t[1] - r.t[0]);
        } else if (i + 1 == samples) {
            r.pooled_rate_fd[i] = (r.pooled[i] - r.pooled[i - 1]) / (r.t[i] - r.t[i - 1]);
        } else {
            r.pooled_rate_fd[i] = (r.pooled[i + 1] - r.pooled[i - 1]) / (r.t[i + 1] - r.t[i - 1]);
        }
    }
    return r;
}

double relaxation_time_closed_form(int n, double gamma_rd)
{
    if (!(gamma_rd > 0.0)) throw std::invalid_argument("relaxation_time_closed_form: need gamma_rd > 0");
    const double onset = 1.0 - 2.0 / std::sqrt(static_cast<double>(n));
    if (n < 1 || onset <= 0.0) {
        throw std::invalid_argument(
            "relaxation_time_closed_form: onset factor non-positive for n <= 4; "
            "use relaxation_time_numeric");
    }
    const double root = std::pow(2.0 * std::numbers::pi * n, 1.0 / (2.0 * n));
    return 2.0 * n / gamma_rd * root * onset;
}

RelaxationDiagnostics relaxation_time_numeric(int n, double gamma_rd)
{
    if (n < 2) throw std::invalid_argument("relaxation_time_numeric: need n >= 2");
    if (!(gamma_rd > 0.0)) throw std::invalid_argument("relaxation_time_numeric: need gamma_rd > 0");

    // Root of N log(gamma_rd t / 2) - log(N!) in t, bisected in log space.
    const double target = std::lgamma(n + 1.0);
    auto excess = [&](double log_half_phase) { return n * log_half_phase - target; };
    double lo = 0.0;                                  // gamma_rd t / 2 = 1
    double hi = std::log(static_cast<double>(n)) + 1.0; // gamma_rd t / 2 = N e
    if (excess(lo) > 0.0 || excess(hi) < 0.0) {
        throw std::runtime_error("relaxation_time_numeric: bisection bracket failed");
    }
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    const double onset_time = 2.0 * std::exp(0.5 * (lo + hi)) / gamma_rd;

    const double e = std::numbers::e;
    const double root_n = std::sqrt(static_cast<double>(n));
    return RelaxationDiagnostics{
        .relaxation_time = (e - 2.0 * e / root_n) * onset_time,
        .onset_time = onset_time,
        .eta_at_max_slope = e - e / root_n,
    };
}

double relaxation_onset_profile(int n, double eta)
{
    if (n < 1) throw std::invalid_argument("relaxation_onset_profile: need n >= 1");
    if (eta < 0.0) throw std::invalid_argument("relaxation_onset_profile: need eta >= 0");
    if (eta == 0.0) return 0.0;
    return std::exp(n * std::log(eta) - n * eta / std::numbers::e);
}

std::vector<double> rabi_revival(std::span<const double> pj, const LadderParams& p,
                                 std::span<const double> dt_grid)
{
    const int n = p.n_atoms;
    if (pj.size() != static_cast<std::size_t>(n + 1)) {
        throw std::invalid_argument("rabi_revival: populations must run j = 0..N");
    }

    const double max_total = p.collective_rates().max_total();
    double dt_max = 0.0;
    for (double dt : dt_grid) dt_max = std::max(dt_max, dt);
    if (max_total > 0.0 && dt_max > 0.1 / max_total) {
        std::ostringstream msg;
        msg << "rabi_revival: dt window " << dt_max << " extends beyond 0.1/max Gamma_j = "
            << 0.1 / max_total << "; the frozen-population picture degrades there";
        emit_warning(msg.str());
    }

    std::vector<double> out(dt_grid.size(), 0.0);
    for (std::size_t i = 0; i < dt_grid.size(); ++i) {
        double acc = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double omega_j = std::sqrt(static_cast<double>(j)) * p.rates.omega;
            acc += pj[static_cast<std::size_t>(j)] * (1.0 - std::cos(omega_j * dt_grid[i]));
        }
        out[i] = acc / (2.0 * n);
    }
    return out;
}

} // namespace blockade::decomposition

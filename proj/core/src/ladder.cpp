// ladder.cpp — Collective ladder generator, observables and field correlations

#include "blockade/ladder.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blockade/warnings.hpp"

namespace blockade::ladder {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Positions inside the state vector; rung blocks first, sink last.
inline Eigen::Index idx_gg(int j) { return 4 * (j - 1); }
inline Eigen::Index idx_ww(int j) { return 4 * (j - 1) + 1; }
inline Eigen::Index idx_gw(int j) { return 4 * (j - 1) + 2; }
inline Eigen::Index idx_wg(int j) { return 4 * (j - 1) + 3; }
inline Eigen::Index idx_sink(int n) { return 4 * n; }

} // namespace

FlippingModel FlippingModel::none()
{
    FlippingModel m;
    m.model_ = None{};
    return m;
}

FlippingModel FlippingModel::proportional(double c_rg, double c_rd)
{
    if (c_rg < 0.0 || c_rd < 0.0) {
        throw std::invalid_argument("FlippingModel: negative proportional rate");
    }
    FlippingModel m;
    m.model_ = Proportional{c_rg, c_rd};
    return m;
}

FlippingModel FlippingModel::table(std::vector<double> d_rg, std::vector<double> d_rd)
{
    if (d_rg.size() != d_rd.size() || d_rg.empty()) {
        throw std::invalid_argument("FlippingModel: tables must be non-empty and equal-sized");
    }
    for (std::size_t i = 0; i < d_rg.size(); ++i) {
        if (d_rg[i] < 0.0 || d_rd[i] < 0.0) {
            throw std::invalid_argument("FlippingModel: negative table entry");
        }
    }
    if (d_rg.front() != 0.0 || d_rd.front() != 0.0) {
        throw std::invalid_argument("FlippingModel: rung 1 has no unsymmetrical states, D^1 must be 0");
    }
    FlippingModel m;
    m.model_ = Table{std::move(d_rg), std::move(d_rd)};
    return m;
}

double FlippingModel::d_rg(int j) const
{
    if (j < 1) throw std::out_of_range("FlippingModel: rung index must be >= 1");
    if (const auto* p = std::get_if<Proportional>(&model_)) return (j - 1) * p->c_rg;
    if (const auto* t = std::get_if<Table>(&model_)) {
        if (static_cast<std::size_t>(j) > t->d_rg.size()) {
            throw std::out_of_range("FlippingModel: rung index beyond table");
        }
        return t->d_rg[static_cast<std::size_t>(j - 1)];
    }
    return 0.0;
}

double FlippingModel::d_rd(int j) const
{
    if (j < 1) throw std::out_of_range("FlippingModel: rung index must be >= 1");
    if (const auto* p = std::get_if<Proportional>(&model_)) return (j - 1) * p->c_rd;
    if (const auto* t = std::get_if<Table>(&model_)) {
        if (static_cast<std::size_t>(j) > t->d_rd.size()) {
            throw std::out_of_range("FlippingModel: rung index beyond table");
        }
        return t->d_rd[static_cast<std::size_t>(j - 1)];
    }
    return 0.0;
}

std::string FlippingModel::describe() const
{
    std::ostringstream out;
    if (std::holds_alternative<None>(model_)) {
        out << "none";
    } else if (const auto* p = std::get_if<Proportional>(&model_)) {
        out << "prop:" << p->c_rg << "," << p->c_rd;
    } else if (const auto* t = std::get_if<Table>(&model_)) {
        out << "table[" << t->d_rg.size() << "]";
    }
    return out.str();
}

double CollectiveRates::min_total() const
{
    double m = total.front();
    for (double v : total) m = std::min(m, v);
    return m;
}

double CollectiveRates::max_total() const
{
    double m = total.front();
    for (double v : total) m = std::max(m, v);
    return m;
}

void LadderParams::validate() const
{
    if (n_atoms < 1) throw std::invalid_argument("LadderParams: need at least one atom");
    rates.validate();
    // Probes the flipping tables across the full rung range.
    for (int j = 1; j <= n_atoms; ++j) {
        (void)flipping.d_rg(j);
        (void)flipping.d_rd(j);
    }
}

CollectiveRates LadderParams::collective_rates() const
{
    validate();
    CollectiveRates c;
    c.omega.reserve(static_cast<std::size_t>(n_atoms));
    for (int j = 1; j <= n_atoms; ++j) {
        const double rg = rates.gamma_rg + j * rates.gamma + flipping.d_rg(j);
        const double rd = rates.gamma_rd + flipping.d_rd(j);
        c.omega.push_back(std::sqrt(static_cast<double>(j)) * rates.omega);
        c.gamma_rg.push_back(rg);
        c.gamma_rd.push_back(rd);
        c.total.push_back(rg + rd);
    }
    return c;
}

std::vector<double> LadderParams::sfl_ratios() const
{
    const CollectiveRates c = collective_rates();
    std::vector<double> r(c.omega.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = c.omega[i] / c.total[i];
    return r;
}

std::uint64_t multiplicity(int n, int j)
{
    if (n < 0 || j < 0 || j > n) throw std::out_of_range("multiplicity: need 0 <= j <= n");
    std::uint64_t result = 1;
    // C(n, j) with the smaller cofactor; exact integer arithmetic.
    const int k = std::min(j, n - j);
    for (int i = 1; i <= k; ++i) {
        const auto factor = static_cast<std::uint64_t>(n - k + i);
        std::uint64_t scaled = 0;
        if (__builtin_mul_overflow(result, factor, &scaled)) {
            throw std::overflow_error("multiplicity: binomial exceeds 64-bit range");
        }
        result = scaled / static_cast<std::uint64_t>(i);
    }
    return result;
}

TransitionLabel label_gg(int j) { return {2 * j, 2 * j}; }
TransitionLabel label_ww(int j) { return {2 * j + 1, 2 * j + 1}; }
TransitionLabel label_gw(int j) { return {2 * j, 2 * j + 1}; }
TransitionLabel label_wg(int j) { return {2 * j + 1, 2 * j}; }
TransitionLabel label_sink() { return {0, 0}; }

Generator generator(const LadderParams& p)
{
    const CollectiveRates rates = p.collective_rates();
    const int n = p.n_atoms;

    std::vector<TransitionLabel> labels;
    labels.reserve(static_cast<std::size_t>(4 * n + 1));
    for (int j = 1; j <= n; ++j) {
        labels.push_back(label_gg(j));
        labels.push_back(label_ww(j));
        labels.push_back(label_gw(j));
        labels.push_back(label_wg(j));
    }
    labels.push_back(label_sink());

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4 * n + 1, 4 * n + 1);
    for (int j = 1; j <= n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j - 1);
        const std::complex<double> drive = kI * (rates.omega[i] / 2.0);
        const double total = rates.total[i];

        m(idx_gg(j), idx_gw(j)) += drive;
        m(idx_gg(j), idx_wg(j)) -= drive;
        m(idx_gg(j), idx_ww(j)) += rates.gamma_rg[i];
        if (j < n) m(idx_gg(j), idx_ww(j + 1)) += rates.gamma_rd[i + 1];

        m(idx_ww(j), idx_wg(j)) += drive;
        m(idx_ww(j), idx_gw(j)) -= drive;
        m(idx_ww(j), idx_ww(j)) -= total;

        m(idx_gw(j), idx_gg(j)) += drive;
        m(idx_gw(j), idx_ww(j)) -= drive;
        m(idx_gw(j), idx_gw(j)) -= total / 2.0;

        m(idx_wg(j), idx_gg(j)) -= drive;
        m(idx_wg(j), idx_ww(j)) += drive;
        m(idx_wg(j), idx_wg(j)) -= total / 2.0;
    }
    m(idx_sink(n), idx_ww(1)) += rates.gamma_rd[0];

    return Generator{OperatorBasis(std::move(labels)), std::move(m)};
}

Eigen::VectorXcd initial_state_vector(const LadderParams& p)
{
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(4 * p.n_atoms + 1);
    y[idx_gg(p.n_atoms)] = 1.0;
    return y;
}

Eigen::VectorXcd state_to_vector(const LadderParams& p, const LadderState& s)
{
    const auto n = static_cast<std::size_t>(p.n_atoms);
    if (s.g_pop.size() != n || s.w_pop.size() != n || s.coherence.size() != n) {
        throw std::invalid_argument("state_to_vector: state size does not match n_atoms");
    }
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(4 * p.n_atoms + 1);
    for (int j = 1; j <= p.n_atoms; ++j) {
        const std::size_t i = static_cast<std::size_t>(j - 1);
        y[idx_gg(j)] = s.g_pop[i];
        y[idx_ww(j)] = s.w_pop[i];
        y[idx_gw(j)] = s.coherence[i];
        y[idx_wg(j)] = std::conj(s.coherence[i]);
    }
    y[idx_sink(p.n_atoms)] = s.dark_pop;
    return y;
}

LadderState state_from_vector(const LadderParams& p, const Eigen::VectorXcd& y)
{
    if (y.size() != 4 * p.n_atoms + 1) {
        throw std::invalid_argument("state_from_vector: vector size does not match n_atoms");
    }
    LadderState s;
    const auto n = static_cast<std::size_t>(p.n_atoms);
    s.g_pop.resize(n);
    s.w_pop.resize(n);
    s.coherence.resize(n);
    for (int j = 1; j <= p.n_atoms; ++j) {
        const std::size_t i = static_cast<std::size_t>(j - 1);
        s.g_pop[i] = y[idx_gg(j)].real();
        s.w_pop[i] = y[idx_ww(j)].real();
        s.coherence[i] = y[idx_gw(j)];
    }
    s.dark_pop = y[idx_sink(p.n_atoms)].real();
    return s;
}

std::vector<LadderState> evolve(const LadderParams& p, std::span<const double> t_grid,
                                const std::optional<LadderState>& initial,
                                const IntegratorOptions& opts)
{
    const Generator gen = generator(p);
    const Eigen::VectorXcd y0 = initial ? state_to_vector(p, *initial) : initial_state_vector(p);
    const ExpectationTrajectory traj = integrate(gen, y0, t_grid, opts);

    std::vector<LadderState> states;
    states.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        states.push_back(state_from_vector(p, traj.at(i)));
    }
    return states;
}

std::vector<double> rung_populations(const LadderState& s)
{
    std::vector<double> p(s.g_pop.size() + 1);
    p[0] = s.dark_pop;
    for (std::size_t i = 0; i < s.g_pop.size(); ++i) p[i + 1] = s.g_pop[i] + s.w_pop[i];
    return p;
}

double default_seed_time(const LadderParams& p)
{
    return 8.0 / p.collective_rates().min_total();
}

double default_tau_max(const LadderParams& p)
{
    return 12.0 / (p.collective_rates().min_total() / 2.0);
}

double default_delta_span(const LadderParams& p)
{
    return 1.5 * std::sqrt(static_cast<double>(p.n_atoms)) * p.rates.omega;
}

namespace {

void warn_spectrum_preconditions(const LadderParams& p, double t, double sfl_warning_ratio)
{
    const double threshold = default_seed_time(p);
    if (t < threshold) {
        std::ostringstream msg;
        msg << "scattered_spectrum: seed time t=" << t
            << " is below the quasi-steady threshold " << threshold;
        emit_warning(msg.str());
    }
    const std::vector<double> ratios = p.sfl_ratios();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (ratios[i] < sfl_warning_ratio) {
            std::ostringstream msg;
            msg << "scattered_spectrum: rung " << i + 1 << " drive ratio "
                << ratios[i] << " is below " << sfl_warning_ratio;
            emit_warning(msg.str());
            break;
        }
    }
}

} // namespace

Spectrum scattered_spectrum(const LadderParams& p, double t, std::span<const double> delta_grid,
                            const SpectrumOptions& opts)
{
    warn_spectrum_preconditions(p, t, opts.sfl_warning_ratio);

    const Generator gen = generator(p);
    const Eigen::VectorXcd state = propagate_to(gen, initial_state_vector(p), t, opts.ode);
    const CollectiveRates rates = p.collective_rates();

    Spectrum total;
    total.delta.assign(delta_grid.begin(), delta_grid.end());
    total.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(delta_grid.size()));

    if (opts.method == SpectrumMethod::resolvent) {
        const GeneratorModes modes(gen);
        for (int j = 1; j <= p.n_atoms; ++j) {
            total += spectrum_resolvent(modes, label_gw(j), label_wg(j), state,
                                        j * p.rates.gamma, delta_grid,
                                        {.nondecaying_tolerance = opts.nondecaying_tolerance});
        }
        return total;
    }

    const double tau_max = opts.tau_max > 0.0 ? opts.tau_max : default_tau_max(p);
    double delta_span = 0.0;
    for (double d : delta_grid) delta_span = std::max(delta_span, std::abs(d));
    const std::size_t n_tau =
        opts.tau_samples > 0
            ? opts.tau_samples
            : auto_tau_samples(tau_max, rates.omega.back() + rates.max_total() + delta_span);
    const std::vector<double> tau_grid = uniform_grid(tau_max, n_tau);

    for (int j = 1; j <= p.n_atoms; ++j) {
        const CorrelationFunction c =
            correlation(gen, label_gw(j), label_wg(j), state, tau_grid, t, opts.ode);
        total += spectrum_quadrature(c, j * p.rates.gamma, delta_grid,
                                     {.residual_cutoff = opts.residual_cutoff});
    }
    return total;
}

double scattered_intensity(const LadderParams& p, const LadderState& s)
{
    double intensity = 0.0;
    for (int j = 1; j <= p.n_atoms; ++j) {
        intensity += j * p.rates.gamma * s.w_pop[static_cast<std::size_t>(j - 1)];
    }
    return intensity;
}

G2Result g2(const LadderParams& p, double t1, std::span<const double> tau_grid,
            const IntegratorOptions& opts)
{
    const Generator gen = generator(p);
    const Eigen::VectorXcd state_t1 = propagate_to(gen, initial_state_vector(p), t1, opts);

    // One-time evolution past t1 for the normalisation intensities.
    const ExpectationTrajectory onward = integrate(gen, state_t1, tau_grid, opts);

    G2Result result;
    result.tau.assign(tau_grid.begin(), tau_grid.end());
    result.unnormalized = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tau_grid.size()));

    for (int j = 1; j <= p.n_atoms; ++j) {
        const Eigen::VectorXcd seed = seed_sandwich(gen, label_gw(j), label_wg(j), state_t1);
        const auto read = gen.basis.find(label_gg(j));
        const ExpectationTrajectory traj = integrate(gen, seed, tau_grid, opts);
        const double weight = p.rates.gamma * p.rates.gamma * j * j;
        for (std::size_t i = 0; i < tau_grid.size(); ++i) {
            result.unnormalized[static_cast<Eigen::Index>(i)] +=
                weight * traj.values(static_cast<Eigen::Index>(*read),
                                     static_cast<Eigen::Index>(i)).real();
        }
    }

    const double intensity_t1 = scattered_intensity(p, state_from_vector(p, state_t1));
    result.normalized.resize(result.unnormalized.size());
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        const double intensity_t2 =
            scattered_intensity(p, state_from_vector(p, onward.at(i)));
        result.normalized[static_cast<Eigen::Index>(i)] =
            result.unnormalized[static_cast<Eigen::Index>(i)] / (intensity_t1 * intensity_t2);
    }
    return result;
}

} // namespace blockade::ladder

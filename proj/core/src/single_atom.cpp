// single_atom.cpp — Single-atom generator and analytic spectra

#include "blockade/single_atom.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blockade/warnings.hpp"

namespace blockade::single_atom {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

double RateParams::steady_excited_fraction() const
{
    const double g = total_decay();
    const double denom = g * g + 2.0 * omega * omega;
    return denom > 0.0 ? omega * omega / denom : 0.0;
}

void RateParams::validate() const
{
    if (gamma < 0.0 || gamma_rg < 0.0 || gamma_rd < 0.0) {
        throw std::invalid_argument("RateParams: negative decay rate");
    }
    if (omega < 0.0) throw std::invalid_argument("RateParams: negative Rabi frequency");
    if (!(total_decay() > 0.0)) {
        throw std::invalid_argument("RateParams: total decay rate must be positive");
    }
}

Regime classify_regime(const RateParams& p, const RegimeThresholds& thresholds)
{
    const double ratio = p.omega / p.total_decay();
    if (ratio >= thresholds.strong) return Regime::strong_field;
    if (ratio <= thresholds.weak) return Regime::weak_field;
    return Regime::intermediate;
}

const char* regime_name(Regime r)
{
    switch (r) {
        case Regime::strong_field: return "strong_field";
        case Regime::weak_field: return "weak_field";
        case Regime::intermediate: return "intermediate";
    }
    return "unknown";
}

double rabi_from_photon_rate(double photon_rate, double gamma)
{
    if (photon_rate < 0.0 || gamma < 0.0) {
        throw std::invalid_argument("rabi_from_photon_rate: negative input");
    }
    return 2.0 * std::sqrt(photon_rate * gamma);
}

Generator generator(const RateParams& p)
{
    p.validate();

    OperatorBasis basis({kSigmaGG, kSigmaRR, kSigmaGR, kSigmaRG, kSigmaDD});
    const auto gg = static_cast<Eigen::Index>(*basis.find(kSigmaGG));
    const auto rr = static_cast<Eigen::Index>(*basis.find(kSigmaRR));
    const auto gr = static_cast<Eigen::Index>(*basis.find(kSigmaGR));
    const auto rg = static_cast<Eigen::Index>(*basis.find(kSigmaRG));
    const auto dd = static_cast<Eigen::Index>(*basis.find(kSigmaDD));

    const double big_gamma = p.total_decay();
    const std::complex<double> drive = kI * (p.omega / 2.0);

    // Drive phase fixed so the same Hermitian drive produces every row; the
    // N = 1 rung of the collective ladder reduces to exactly this matrix.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(5, 5);
    m(gg, gr) += drive;
    m(gg, rg) -= drive;
    m(gg, rr) += p.gamma + p.gamma_rg;

    m(rr, rg) += drive;
    m(rr, gr) -= drive;
    m(rr, rr) -= big_gamma;

    m(gr, gg) += drive;
    m(gr, rr) -= drive;
    m(gr, gr) -= big_gamma / 2.0;

    m(rg, gg) -= drive;
    m(rg, rr) += drive;
    m(rg, rg) -= big_gamma / 2.0;

    m(dd, rr) += p.gamma_rd;

    return Generator{std::move(basis), std::move(m)};
}

Eigen::VectorXcd ground_state()
{
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(5);
    y[0] = 1.0; // sigma_gg leads the basis order
    return y;
}

double triplet_lineshape(double delta, double omega, double total_decay, double gamma_rd,
                         double gamma)
{
    const double g = total_decay;
    const double side = 3.0 * g - gamma_rd;
    const double center = (g / 8.0) / (delta * delta + (g / 2.0) * (g / 2.0));
    const double lower = (side / 8.0) /
                         (4.0 * (delta - omega) * (delta - omega) + side * side / 4.0);
    const double upper = (side / 8.0) /
                         (4.0 * (delta + omega) * (delta + omega) + side * side / 4.0);
    return gamma * (center + lower + upper);
}

namespace {

void warn_if_not_quasi_steady(const RateParams& p, double t, const char* where)
{
    if (t < quasi_steady_time(p)) {
        std::ostringstream msg;
        msg << where << ": seed time t=" << t << " is below the quasi-steady threshold "
            << quasi_steady_time(p);
        emit_warning(msg.str());
    }
}

} // namespace

Spectrum sfl_spectrum_analytic(const RateParams& p, double t, std::span<const double> delta_grid)
{
    p.validate();
    if (classify_regime(p) != Regime::strong_field) {
        std::ostringstream msg;
        msg << "sfl_spectrum_analytic: omega/Gamma=" << p.omega / p.total_decay()
            << " is outside the strong-field regime";
        emit_warning(msg.str());
    }
    warn_if_not_quasi_steady(p, t, "sfl_spectrum_analytic");

    const double envelope = std::exp(-p.steady_excited_fraction() * p.gamma_rd * t);
    Spectrum s;
    s.delta.assign(delta_grid.begin(), delta_grid.end());
    s.values.resize(static_cast<Eigen::Index>(delta_grid.size()));
    for (std::size_t i = 0; i < delta_grid.size(); ++i) {
        s.values[static_cast<Eigen::Index>(i)] =
            envelope *
            triplet_lineshape(delta_grid[i], p.omega, p.total_decay(), p.gamma_rd, p.gamma);
    }
    return s;
}

Spectrum wfl_spectrum_analytic(const RateParams& p, double t, std::span<const double> delta_grid)
{
    p.validate();
    if (p.gamma_rd == 0.0) {
        throw std::invalid_argument(
            "wfl_spectrum_analytic: gamma_rd = 0 gives a degenerate zero-width peak");
    }
    if (classify_regime(p) != Regime::weak_field) {
        std::ostringstream msg;
        msg << "wfl_spectrum_analytic: omega/Gamma=" << p.omega / p.total_decay()
            << " is outside the weak-field regime";
        emit_warning(msg.str());
    }
    warn_if_not_quasi_steady(p, t, "wfl_spectrum_analytic");

    const double g2 = p.total_decay() * p.total_decay();
    const double width = p.gamma_rd * p.omega * p.omega / g2; // half-width at half-maximum
    const double weight = width * p.omega * p.omega / g2;     // gamma_rd omega^4 / Gamma^4
    const double envelope = std::exp(-p.steady_excited_fraction() * p.gamma_rd * t);

    Spectrum s;
    s.delta.assign(delta_grid.begin(), delta_grid.end());
    s.values.resize(static_cast<Eigen::Index>(delta_grid.size()));
    for (std::size_t i = 0; i < delta_grid.size(); ++i) {
        const double d = delta_grid[i];
        s.values[static_cast<Eigen::Index>(i)] =
            envelope * p.gamma * weight / (d * d + width * width);
    }
    return s;
}

double default_correlation_window(const RateParams& p)
{
    double slowest = p.total_decay() / 2.0;
    const double pumping = p.steady_excited_fraction() * p.gamma_rd;
    if (pumping > 0.0) slowest = std::min(slowest, pumping);
    return 12.0 / slowest;
}

Spectrum numeric_spectrum(const RateParams& p, double t, std::span<const double> delta_grid,
                          const NumericSpectrumOptions& opts)
{
    p.validate();
    warn_if_not_quasi_steady(p, t, "numeric_spectrum");

    const Generator gen = generator(p);
    const Eigen::VectorXcd state = propagate_to(gen, ground_state(), t, opts.ode);

    if (opts.method == SpectrumMethod::resolvent) {
        return spectrum_resolvent(gen, kSigmaRG, kSigmaGR, state, p.gamma, delta_grid,
                                  {.nondecaying_tolerance = opts.nondecaying_tolerance});
    }

    const double tau_max = opts.tau_max > 0.0 ? opts.tau_max : default_correlation_window(p);
    double delta_span = 0.0;
    for (double d : delta_grid) delta_span = std::max(delta_span, std::abs(d));
    const std::size_t n_tau =
        opts.tau_samples > 0 ? opts.tau_samples
                             : auto_tau_samples(tau_max, p.omega + p.total_decay() + delta_span);
    const std::vector<double> tau_grid = uniform_grid(tau_max, n_tau);

    const CorrelationFunction c =
        correlation(gen, kSigmaRG, kSigmaGR, state, tau_grid, t, opts.ode);
    return spectrum_quadrature(c, p.gamma, delta_grid, {.residual_cutoff = opts.residual_cutoff});
}

} // namespace blockade::single_atom

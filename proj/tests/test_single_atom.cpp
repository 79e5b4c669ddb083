// test_single_atom.cpp — Driven three-level atom: generator, regimes, spectra

#include <doctest.h>

#include <cmath>

#include "blockade/single_atom.hpp"
#include "blockade/warnings.hpp"
#include "support/measure.hpp"
#include "support/oracles.hpp"

using namespace blockade;
namespace sa = blockade::single_atom;

namespace {

struct SilenceWarnings {
    SilenceWarnings() { previous = set_warning_handler([](const std::string&) {}); }
    ~SilenceWarnings() { set_warning_handler(previous); }
    WarningHandler previous;
};

std::vector<double> as_vector(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

} // namespace

TEST_CASE("rate params validation and derived quantities")
{
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0};
    CHECK(p.total_decay() == 3.0);
    CHECK(p.steady_excited_fraction() == doctest::Approx(900.0 / 1809.0));

    CHECK_THROWS_AS((sa::RateParams{-1.0, 0.0, 0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((sa::RateParams{0.0, 0.0, 0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((sa::RateParams{1.0, 0.0, 0.0, -1.0}.validate()), std::invalid_argument);
}

TEST_CASE("regime classification thresholds")
{
    auto with_omega = [](double omega) {
        return sa::RateParams{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = omega};
    };
    CHECK(sa::classify_regime(with_omega(30.0)) == sa::Regime::strong_field);
    CHECK(sa::classify_regime(with_omega(30.0 + 1e-9)) == sa::Regime::strong_field);
    CHECK(sa::classify_regime(with_omega(0.3)) == sa::Regime::weak_field);
    CHECK(sa::classify_regime(with_omega(3.0)) == sa::Regime::intermediate);
    CHECK(sa::classify_regime(with_omega(0.0)) == sa::Regime::weak_field);
}

TEST_CASE("Rabi frequency from the input photon rate")
{
    CHECK(sa::rabi_from_photon_rate(0.0, 1.0) == 0.0);
    CHECK(sa::rabi_from_photon_rate(25.0, 1.0) == doctest::Approx(10.0));
    CHECK(sa::rabi_from_photon_rate(0.25, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(sa::rabi_from_photon_rate(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("population functional annihilates the generator")
{
    const auto gen =
        sa::generator({.gamma = 0.7, .gamma_rg = 1.3, .gamma_rd = 0.4, .omega = 11.0});
    CHECK(population_sum_residual(gen).maxCoeff() < 1e-14);
}

TEST_CASE("undriven decay from |r> follows the branching closed form")
{
    sa::RateParams p{.gamma = 0.5, .gamma_rg = 1.0, .gamma_rd = 2.0, .omega = 0.0};
    const double big_gamma = p.total_decay();
    const auto gen = sa::generator(p);
    Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(5);
    y0[*gen.basis.find(sa::kSigmaRR)] = 1.0;

    const auto grid = uniform_grid(6.0 / big_gamma, 61);
    const auto traj = integrate(gen, y0, grid);
    const auto gg = static_cast<Eigen::Index>(*gen.basis.find(sa::kSigmaGG));
    const auto rr = static_cast<Eigen::Index>(*gen.basis.find(sa::kSigmaRR));
    const auto dd = static_cast<Eigen::Index>(*gen.basis.find(sa::kSigmaDD));

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double decayed = 1.0 - std::exp(-big_gamma * grid[i]);
        CHECK(std::abs(traj.values(rr, static_cast<Eigen::Index>(i)).real() -
                       std::exp(-big_gamma * grid[i])) < 1e-9);
        CHECK(std::abs(traj.values(gg, static_cast<Eigen::Index>(i)).real() -
                       (p.gamma + p.gamma_rg) / big_gamma * decayed) < 1e-9);
        CHECK(std::abs(traj.values(dd, static_cast<Eigen::Index>(i)).real() -
                       p.gamma_rd / big_gamma * decayed) < 1e-9);
    }
}

TEST_CASE("saturation of the driven transition without pooling")
{
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 0.0, .omega = 30.0};
    const auto gen = sa::generator(p);
    const auto y = propagate_to(gen, sa::ground_state(), 10.0);
    CHECK(std::abs(y[1].real() - p.steady_excited_fraction()) < 1e-6);
    CHECK(p.steady_excited_fraction() == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("trace is conserved along driven evolution")
{
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0};
    const auto gen = sa::generator(p);
    const auto traj = integrate(gen, sa::ground_state(), uniform_grid(12.0, 241));
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        CHECK(std::abs(population_sum(gen, traj.at(i)) - 1.0) < 1e-9);
        // population rows stay real and inside [0, 1] up to tolerance
        for (Eigen::Index k : {0, 1, 4}) {
            CHECK(std::abs(traj.values(k, static_cast<Eigen::Index>(i)).imag()) < 1e-10);
            CHECK(traj.values(k, static_cast<Eigen::Index>(i)).real() > -1e-9);
            CHECK(traj.values(k, static_cast<Eigen::Index>(i)).real() < 1.0 + 1e-9);
        }
    }
}

TEST_CASE("driven survival follows the halved pooling rate after transients")
{
    // Independent fixed-step integration of the reduced cascade with one
    // rung: p' = -gamma_rd p / 2. The residual after the Rabi transients is
    // the gap between the saturated excited fraction x and 1/2, about
    // 2 (1/2 - x) / e = 1.8e-3 at Omega = 30 Gamma/3; measured 1.6e-3.
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0};
    const auto gen = sa::generator(p);
    const auto grid = uniform_grid(12.0, 481);
    const auto traj = integrate(gen, sa::ground_state(), grid);
    const auto cascade = oracle::cascade_solve({p.gamma_rd}, {grid.begin(), grid.end()}, 1e-4);

    double dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 8.0 / p.total_decay()) continue;
        const double survival = traj.values(0, static_cast<Eigen::Index>(i)).real() +
                                traj.values(1, static_cast<Eigen::Index>(i)).real();
        dev = std::max(dev, std::abs(survival - cascade[i][1]));
    }
    CHECK(dev < 2.5e-3);
    CHECK(dev > 1e-4); // the coefficient gap is real, not integrator noise
}

TEST_CASE("trajectory agrees with the density-matrix oracle")
{
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 0.5, .gamma_rd = 2.0, .omega = 12.0};
    const auto gen = sa::generator(p);
    const auto grid = uniform_grid(3.0, 31);
    const auto traj = integrate(gen, sa::ground_state(), grid);

    const oracle::ThreeLevelMaster master(p.gamma, p.gamma_rg, p.gamma_rd, p.omega);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const auto rho = master.evolve(oracle::ThreeLevelMaster::ground(), grid[i], 5e-5);
        CHECK(std::abs(traj.values(0, static_cast<Eigen::Index>(i)).real() - rho(0, 0).real()) < 1e-7);
        CHECK(std::abs(traj.values(1, static_cast<Eigen::Index>(i)).real() - rho(1, 1).real()) < 1e-7);
        CHECK(std::abs(traj.values(4, static_cast<Eigen::Index>(i)).real() - rho(2, 2).real()) < 1e-7);
    }
}

TEST_CASE("strong-drive lineshape peak structure")
{
    // Without pooling decay the center-to-sideband peak ratio is the textbook 3:1.
    const double gamma = 1.0, big_gamma = 2.0, omega = 60.0;
    const double center = sa::triplet_lineshape(0.0, omega, big_gamma, 0.0, gamma);
    const double side = sa::triplet_lineshape(omega, omega, big_gamma, 0.0, gamma);
    CHECK(center == doctest::Approx(gamma / (2.0 * big_gamma)).epsilon(1e-3));
    CHECK(center / side == doctest::Approx(3.0).epsilon(2e-3));

    // Pooling decay narrows the sidebands, not the center: half value at
    // delta = omega +- (3 Gamma - gamma_rd)/4 up to the small center tail.
    const double gamma_rd = 1.0, g3 = 3.0;
    const double side_width = (3.0 * g3 - gamma_rd) / 4.0;
    const double side_peak = sa::triplet_lineshape(omega, omega, g3, gamma_rd, gamma);
    const double at_half = sa::triplet_lineshape(omega + side_width, omega, g3, gamma_rd, gamma);
    CHECK(at_half == doctest::Approx(side_peak / 2.0).epsilon(0.01));
    CHECK(side_width < 3.0 * g3 / 4.0);

    // Even in detuning.
    for (double d : {1.0, 7.3, 40.0}) {
        CHECK(sa::triplet_lineshape(d, omega, g3, gamma_rd, gamma) ==
              doctest::Approx(sa::triplet_lineshape(-d, omega, g3, gamma_rd, gamma)));
    }
}

TEST_CASE("analytic strong-field spectrum: envelope and total weight")
{
    SilenceWarnings quiet;
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0};
    const double x = p.steady_excited_fraction();

    const auto grid = symmetric_grid(1.5 * p.omega, 257);
    const auto s1 = sa::sfl_spectrum_analytic(p, 3.0, grid);
    const auto s2 = sa::sfl_spectrum_analytic(p, 6.0, grid);
    for (Eigen::Index i = 0; i < s1.values.size(); ++i) {
        CHECK(s2.values[i] == doctest::Approx(s1.values[i] * std::exp(-x * 3.0)).epsilon(1e-9));
    }

    // The three Lorentzians carry weights pi/4 and pi/8 + pi/8 of gamma.
    const auto wide = symmetric_grid(400.0 * p.total_decay(), 2'000'001);
    const auto s = sa::sfl_spectrum_analytic(p, 0.0, wide); // t=0: unit envelope
    double integral = 0.0;
    for (std::size_t i = 1; i < wide.size(); ++i) {
        integral += 0.5 * (s.values[static_cast<Eigen::Index>(i)] +
                           s.values[static_cast<Eigen::Index>(i - 1)]) *
                    (wide[i] - wide[i - 1]);
    }
    CHECK(integral == doctest::Approx(M_PI / 2.0 * p.gamma).epsilon(0.01));
}

TEST_CASE("numeric strong-field spectrum matches the analytic triplet")
{
    SilenceWarnings quiet;
    for (double ratio : {10.0, 30.0}) {
        sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 3.0 * ratio};
        const double t = 3.0;
        const auto grid = symmetric_grid(1.5 * p.omega, 2049);
        const auto numeric = sa::numeric_spectrum(p, t, grid);
        const auto analytic = sa::sfl_spectrum_analytic(p, t, grid);
        const double peak = numeric.values.maxCoeff();
        for (Eigen::Index i = 0; i < numeric.values.size(); ++i) {
            CHECK(std::abs(numeric.values[i] - analytic.values[i]) < 0.05 * peak);
        }
        CHECK(numeric.values.minCoeff() > -1e-9 * peak);
    }
}

TEST_CASE("numeric sideband widths narrow with pooling decay")
{
    SilenceWarnings quiet;
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 90.0};
    const double g = p.total_decay();
    const auto grid = symmetric_grid(1.5 * p.omega, 8193);
    const auto s = sa::numeric_spectrum(p, 3.0, grid);

    const auto sv = as_vector(s.values);
    const auto center = measure::highest_in_window(grid, sv, -g, g);
    const auto side = measure::highest_in_window(grid, sv, p.omega - 4.0 * g, p.omega + 4.0 * g);
    CHECK(measure::half_width(grid, sv, center) == doctest::Approx(g / 2.0).epsilon(0.03));
    CHECK(measure::half_width(grid, sv, side) ==
          doctest::Approx((3.0 * g - p.gamma_rd) / 4.0).epsilon(0.03));
}

TEST_CASE("no pooling decay: dark state stays empty and the spectrum is stationary")
{
    SilenceWarnings quiet;
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 0.0, .omega = 60.0};
    const auto gen = sa::generator(p);
    const auto traj = integrate(gen, sa::ground_state(), uniform_grid(20.0, 201));
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        CHECK(std::abs(traj.values(4, static_cast<Eigen::Index>(i))) < 1e-12);
    }

    const auto grid = symmetric_grid(1.5 * p.omega, 1025);
    const auto s1 = sa::numeric_spectrum(p, 4.0, grid);
    const auto s2 = sa::numeric_spectrum(p, 16.0, grid);
    const double peak = s1.values.maxCoeff();
    for (Eigen::Index i = 0; i < s1.values.size(); ++i) {
        CHECK(std::abs(s1.values[i] - s2.values[i]) < 5e-3 * peak);
    }
}

TEST_CASE("weak-field spectrum: peak, width and numeric agreement")
{
    SilenceWarnings quiet;
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 0.3};
    const double g2 = p.total_decay() * p.total_decay();
    const double width = p.gamma_rd * p.omega * p.omega / g2;
    const double t = 3.0;

    const auto grid = symmetric_grid(10.0 * width, 801);
    const auto analytic = sa::wfl_spectrum_analytic(p, t, grid);

    // Peak value: envelope times gamma / gamma_rd (gamma_rd = 1 here).
    const double x = p.steady_excited_fraction();
    CHECK(analytic.values[400] ==
          doctest::Approx(std::exp(-x * p.gamma_rd * t) * p.gamma / p.gamma_rd).epsilon(1e-9));

    const auto numeric = sa::numeric_spectrum(p, t, grid);
    const auto nv = as_vector(numeric.values);
    const auto peak = measure::highest_in_window(grid, nv, -width, width);
    CHECK(measure::half_width(grid, nv, peak) == doctest::Approx(width).epsilon(0.1));
    CHECK(peak.value == doctest::Approx(analytic.values[400]).epsilon(0.1));

    // Tighter drive: the half-width tracks gamma_rd omega^2 / Gamma^2.
    sa::RateParams q = p;
    q.omega = p.total_decay() / 20.0;
    const double width_q = q.gamma_rd * q.omega * q.omega / g2;
    const auto grid_q = symmetric_grid(10.0 * width_q, 801);
    const auto numeric_q = sa::numeric_spectrum(q, t, grid_q);
    const auto nq = as_vector(numeric_q.values);
    const auto peak_q = measure::highest_in_window(grid_q, nq, -width_q, width_q);
    CHECK(measure::half_width(grid_q, nq, peak_q) == doctest::Approx(width_q).epsilon(0.1));
}

TEST_CASE("weak-field formula rejects the degenerate zero-width limit")
{
    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 0.0, .omega = 0.1};
    CHECK_THROWS_AS(sa::wfl_spectrum_analytic(p, 10.0, symmetric_grid(1.0, 11)),
                    std::invalid_argument);
}

TEST_CASE("warnings fire outside the quasi-steady window or regime")
{
    std::vector<std::string> seen;
    auto previous = set_warning_handler([&](const std::string& msg) { seen.push_back(msg); });

    sa::RateParams p{.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0};
    (void)sa::sfl_spectrum_analytic(p, 0.1, symmetric_grid(45.0, 11)); // below 8/Gamma
    CHECK(seen.size() == 1);

    p.omega = 3.0; // intermediate regime
    (void)sa::sfl_spectrum_analytic(p, 100.0, symmetric_grid(5.0, 11));
    CHECK(seen.size() == 2);

    set_warning_handler(previous);
}

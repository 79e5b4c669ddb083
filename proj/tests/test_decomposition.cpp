// test_decomposition.cpp — Reduced cascade, fractions, relaxation times, revivals

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blockade/decomposition.hpp"
#include "blockade/warnings.hpp"
#include "support/measure.hpp"
#include "support/oracles.hpp"

using namespace blockade;
namespace sa = blockade::single_atom;
namespace la = blockade::ladder;
namespace de = blockade::decomposition;

namespace {

struct SilenceWarnings {
    SilenceWarnings() { previous = set_warning_handler([](const std::string&) {}); }
    ~SilenceWarnings() { set_warning_handler(previous); }
    WarningHandler previous;
};

la::LadderParams uniform_params(int n)
{
    return {.n_atoms = n,
            .rates = {.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0},
            .flipping = la::FlippingModel::none()};
}

la::LadderParams flipping_params()
{
    return {.n_atoms = 3,
            .rates = {.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0},
            .flipping = la::FlippingModel::proportional(0.5, 0.5)};
}

} // namespace

TEST_CASE("cascade starts on the top rung and conserves the sum")
{
    const auto p = flipping_params();
    const auto traj = de::evolve_pj(p, uniform_grid(10.0, 401));
    CHECK(traj.p(3, 0) == 1.0);
    CHECK(traj.p(0, 0) == 0.0);

    double drift = 0.0;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        double sum = 0.0;
        for (int j = 0; j <= 3; ++j) sum += traj.p(j, static_cast<Eigen::Index>(i));
        drift = std::max(drift, std::abs(sum - 1.0));
    }
    CHECK(drift < 1e-10);
    CHECK(population_sum_residual(de::pj_generator(p)).maxCoeff() < 1e-14);
}

TEST_CASE("cascade matches an independent fixed-step integration")
{
    const auto p = flipping_params();
    const auto grid = uniform_grid(10.0, 101);
    const auto traj = de::evolve_pj(p, grid);
    const auto reference = oracle::cascade_solve({1.0, 1.5, 2.0}, grid, 1e-4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int j = 0; j <= 3; ++j) {
            CHECK(std::abs(traj.p(j, static_cast<Eigen::Index>(i)) - reference[i][j]) < 1e-9);
        }
    }
}

TEST_CASE("closed form at gamma_rd t = 2 for three atoms")
{
    const auto p = de::pj_closed_form(3, 1.0, 2.0);
    CHECK(p[3] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(p[0] == doctest::Approx(1.0 - 2.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(p[3] == doctest::Approx(0.36788).epsilon(1e-4));
    CHECK(p[1] == doctest::Approx(0.18394).epsilon(1e-4));
    CHECK(p[0] == doctest::Approx(0.08030).epsilon(1e-3));

    const auto at_zero = de::pj_closed_form(5, 1.0, 0.0);
    CHECK(at_zero[5] == 1.0);
    CHECK(at_zero[0] == 0.0);
}

TEST_CASE("closed-form survival obeys the truncated-Poisson tail identity")
{
    for (int n : {2, 7, 40}) {
        for (double t : {0.3, 2.0, 15.0, 60.0}) {
            const auto p = de::pj_closed_form(n, 1.0, t);
            double survival = 0.0;
            for (int j = 1; j <= n; ++j) survival += p[static_cast<std::size_t>(j)];

            double poisson_cdf = 0.0;
            const double lambda = t / 2.0;
            for (int k = 0; k < n; ++k) {
                poisson_cdf += std::exp(k * std::log(lambda) - std::lgamma(k + 1.0) - lambda);
            }
            CHECK(survival == doctest::Approx(poisson_cdf).epsilon(1e-10));
        }
    }
}

TEST_CASE("closed form is stable for large atom number and late times")
{
    const auto p = de::pj_closed_form(100, 1.0, 300.0);
    for (double v : p) {
        CHECK(std::isfinite(v));
        CHECK(v > -1e-12);
        CHECK(v < 1.0 + 1e-12);
    }
}

TEST_CASE("uniform-rate cascade integrates to the closed form")
{
    for (int n : {3, 10, 50}) {
        const auto p = uniform_params(n);
        const auto grid = uniform_grid(4.0 * n, 801);
        const auto traj = de::evolve_pj(p, grid);
        double dev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto cf = de::pj_closed_form(n, 1.0, grid[i]);
            for (int j = 0; j <= n; ++j) {
                dev = std::max(dev, std::abs(cf[static_cast<std::size_t>(j)] -
                                             traj.p(j, static_cast<Eigen::Index>(i))));
            }
        }
        CHECK(dev < 1e-8);
    }
}

TEST_CASE("analytic spectrum reduces to the single-atom triplet for one closed rung")
{
    SilenceWarnings quiet;
    la::LadderParams p{.n_atoms = 1,
                       .rates = {.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 0.0, .omega = 60.0},
                       .flipping = la::FlippingModel::none()};
    const auto grid = symmetric_grid(90.0, 513);
    const auto s = de::spectrum_analytic(p, 10.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // p_1 = 1 without pooling decay; gamma_rg^1 = 2.
        const double expected = sa::triplet_lineshape(grid[i], 60.0, 2.0, 0.0, 1.0);
        CHECK(s.values[static_cast<Eigen::Index>(i)] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("relative sideband heights reorder as the ladder relaxes")
{
    SilenceWarnings quiet;
    const auto p = flipping_params();
    auto ratio_at = [&](double t, bool analytic) {
        const auto grid = symmetric_grid(la::default_delta_span(p), 2049);
        Spectrum s;
        if (analytic) {
            s = de::spectrum_analytic(p, t, grid);
        } else {
            la::SpectrumOptions opts;
            opts.method = SpectrumMethod::resolvent;
            s = la::scattered_spectrum(p, t, grid, opts);
        }
        const std::vector<double> sv(s.values.data(), s.values.data() + s.values.size());
        const double top = measure::highest_in_window(grid, sv, 45.0, 60.0).value;
        const double bottom = measure::highest_in_window(grid, sv, 25.0, 36.0).value;
        return top / bottom;
    };

    // Early: the top-rung sideband dominates; late: the order flips. The
    // numeric route shows the same reordering.
    CHECK(ratio_at(1.0, true) > 1.5);
    CHECK(ratio_at(4.0, true) < 0.5);
    CHECK(ratio_at(1.0, false) > 1.5);
    CHECK(ratio_at(4.0, false) < 0.5);
}

TEST_CASE("analytic spectral power drains monotonically into the sink")
{
    SilenceWarnings quiet;
    const auto p = uniform_params(3);
    const auto grid = symmetric_grid(8.0 * la::default_delta_span(p), 16385);
    double previous = std::numeric_limits<double>::infinity();
    for (double t : {3.0, 5.0, 8.0, 12.0}) {
        const auto s = de::spectrum_analytic(p, t, grid);
        double power = 0.0;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            power += 0.5 * (s.values[static_cast<Eigen::Index>(i)] +
                            s.values[static_cast<Eigen::Index>(i - 1)]) *
                     (grid[i] - grid[i - 1]);
        }
        CHECK(power < previous);
        previous = power;
    }
}

TEST_CASE("fraction report: initial values, steady state and the rate identity")
{
    SilenceWarnings quiet;
    const int n = 10;
    const auto p = uniform_params(n);
    const auto traj = de::evolve_pj(p, uniform_grid(120.0, 4801));
    const auto rep = de::fractions(traj, p);

    CHECK(rep.pooled[0] == doctest::Approx(0.0));
    CHECK(rep.all_pooled[0] == doctest::Approx(0.0));
    CHECK(rep.rydberg[0] == doctest::Approx(1.0 / (2.0 * n)));
    CHECK(rep.rydberg_oscillatory[0] == doctest::Approx(0.0));

    CHECK(rep.pooled.back() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.all_pooled.back() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.rydberg.back() == doctest::Approx(0.0).epsilon(1e-6));

    // P_G0 never exceeds P_d.
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        CHECK(rep.all_pooled[i] <= rep.pooled[i] + 1e-12);
    }

    // With uniform rates the finite-difference rate matches the identity to
    // the finite-difference error of the grid.
    double dev = 0.0;
    for (std::size_t i = 1; i + 1 < rep.t.size(); ++i) {
        dev = std::max(dev, std::abs(rep.pooled_rate_fd[i] - rep.pooled_rate_identity[i]));
    }
    CHECK(dev < 1e-5);
}

TEST_CASE("rate identity from closed forms with high-order differences")
{
    for (int n : {3, 10, 100}) {
        const double h = 1e-2;
        auto pooled = [&](double t) {
            const auto p = de::pj_closed_form(n, 1.0, t);
            double weighted = 0.0;
            for (int j = 1; j <= n; ++j) weighted += static_cast<double>(j) / n * p[static_cast<std::size_t>(j)];
            return 1.0 - weighted;
        };
        auto all_pooled = [&](double t) {
            const auto p = de::pj_closed_form(n, 1.0, t);
            double survival = 0.0;
            for (int j = 1; j <= n; ++j) survival += p[static_cast<std::size_t>(j)];
            return 1.0 - survival;
        };
        double dev = 0.0;
        for (double t = 1.0; t <= 2.0 * n; t += 0.25 * n) {
            const double fd =
                (-pooled(t + 2 * h) + 8 * pooled(t + h) - 8 * pooled(t - h) + pooled(t - 2 * h)) /
                (12 * h);
            const double identity = 0.5 / n * (1.0 - all_pooled(t));
            dev = std::max(dev, std::abs(fd - identity));
        }
        CHECK(dev < 1e-6);
    }
}

TEST_CASE("dissipative flipping accelerates pooling")
{
    SilenceWarnings quiet;
    auto crossing_time = [&](const la::FlippingModel& fm) {
        la::LadderParams p{.n_atoms = 3,
                           .rates = {.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0},
                           .flipping = fm};
        const auto grid = uniform_grid(20.0, 4001);
        const auto rep = de::fractions(de::evolve_pj(p, grid), p);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (rep.pooled[i] >= 0.5) return grid[i];
        }
        return -1.0;
    };
    const double plain = crossing_time(la::FlippingModel::none());
    const double flipped = crossing_time(la::FlippingModel::proportional(0.5, 0.5));
    CHECK(plain > 0.0);
    CHECK(flipped > 0.0);
    CHECK(flipped < plain);
}

TEST_CASE("relaxation time closed form")
{
    CHECK(de::relaxation_time_closed_form(10, 1.0) == doctest::Approx(9.0417).epsilon(1e-3));
    CHECK(de::relaxation_time_closed_form(100, 1.0) == doctest::Approx(165.24).epsilon(1e-3));
    CHECK(de::relaxation_time_closed_form(10, 2.0) ==
          doctest::Approx(de::relaxation_time_closed_form(10, 1.0) / 2.0));

    for (int n = 5; n <= 1000; n = n * 3 + 1) {
        CHECK(de::relaxation_time_closed_form(n, 1.0) < 2.0 * n);
    }

    CHECK_THROWS_AS(de::relaxation_time_closed_form(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(de::relaxation_time_closed_form(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(de::relaxation_time_closed_form(10, 0.0), std::invalid_argument);
}

TEST_CASE("relaxation time numeric route and its diagnostics")
{
    const auto d10 = de::relaxation_time_numeric(10, 1.0);
    CHECK(d10.relaxation_time == doctest::Approx(9.0492).epsilon(1e-3));
    CHECK(std::abs(d10.relaxation_time - de::relaxation_time_closed_form(10, 1.0)) <
          0.05 * d10.relaxation_time);

    const auto d100 = de::relaxation_time_numeric(100, 1.0);
    CHECK(std::abs(d100.relaxation_time - de::relaxation_time_closed_form(100, 1.0)) <
          0.05 * d100.relaxation_time);

    // Exact-factorial onset time vs Stirling's approximation: within 1%.
    for (int n : {10, 30, 100}) {
        const auto d = de::relaxation_time_numeric(n, 1.0);
        const double stirling = 2.0 * n / std::numbers::e *
                                std::pow(2.0 * std::numbers::pi * n, 1.0 / (2.0 * n));
        CHECK(std::abs(d.onset_time - stirling) < 0.01 * d.onset_time);
        CHECK(d.eta_at_max_slope ==
              doctest::Approx(std::numbers::e * (1.0 - 1.0 / std::sqrt(static_cast<double>(n)))));
    }

    CHECK_THROWS_AS(de::relaxation_time_numeric(1, 1.0), std::invalid_argument);
}

TEST_CASE("onset profile: monotone rise to 1 at eta = e, steepest before")
{
    const int n = 10;
    CHECK(de::relaxation_onset_profile(n, 0.0) == 0.0);
    CHECK(de::relaxation_onset_profile(n, std::numbers::e) == doctest::Approx(1.0));

    double previous = -1.0;
    for (double eta = 0.0; eta <= std::numbers::e + 1e-12; eta += std::numbers::e / 512.0) {
        const double f = de::relaxation_onset_profile(n, eta);
        CHECK(f >= previous);
        previous = f;
    }

    // Numeric argmax of the slope sits at e - e/sqrt(N) within grid resolution.
    const double step = 1e-4;
    double best_eta = 0.0, best_slope = -1.0;
    for (double eta = step; eta < std::numbers::e; eta += step) {
        const double slope = (de::relaxation_onset_profile(n, eta + step) -
                              de::relaxation_onset_profile(n, eta - step)) /
                             (2.0 * step);
        if (slope > best_slope) {
            best_slope = slope;
            best_eta = eta;
        }
    }
    const double expected = std::numbers::e * (1.0 - 1.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(best_eta - expected) < 2.0 * step);
}

TEST_CASE("revival predictor: degenerate cases")
{
    SilenceWarnings quiet;
    const auto p = uniform_params(3);

    std::vector<double> pj{0.1, 0.2, 0.3, 0.4};
    const double zero[] = {0.0};
    CHECK(de::rabi_revival(pj, p, zero)[0] == 0.0);

    // A single surviving rung gives a pure cosine at sqrt(N) Omega.
    std::vector<double> top_only{0.0, 0.0, 0.0, 1.0};
    const auto dt = uniform_grid(0.01, 65);
    const auto revival = de::rabi_revival(top_only, p, dt);
    for (std::size_t i = 0; i < dt.size(); ++i) {
        const double expected =
            (1.0 - std::cos(std::sqrt(3.0) * 30.0 * dt[i])) / 6.0;
        CHECK(revival[i] == doctest::Approx(expected).epsilon(1e-12));
    }

    CHECK_THROWS_AS(de::rabi_revival(std::vector<double>{1.0}, p, dt), std::invalid_argument);
}

TEST_CASE("revival predictor matches a restarted ladder integration")
{
    SilenceWarnings quiet;
    const auto p = flipping_params();
    const auto pj_traj = de::evolve_pj(p, uniform_grid(2.0, 201));
    const auto pj = pj_traj.at(200);

    const double window = 0.1 / p.collective_rates().max_total();
    const auto dt = uniform_grid(window, 101);
    const auto predicted = de::rabi_revival(pj, p, dt);

    la::LadderState diagonal;
    diagonal.g_pop = {pj[1], pj[2], pj[3]};
    diagonal.w_pop = {0.0, 0.0, 0.0};
    diagonal.coherence = {0.0, 0.0, 0.0};
    diagonal.dark_pop = pj[0];
    const auto states = la::evolve(p, dt, diagonal);

    double oracle_max = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < dt.size(); ++i) {
        double rydberg = 0.0;
        for (double w : states[i].w_pop) rydberg += w;
        rydberg /= 3.0;
        oracle_max = std::max(oracle_max, rydberg);
        dev = std::max(dev, std::abs(rydberg - predicted[i]));
    }
    CHECK(dev < 0.05 * oracle_max);
}

TEST_CASE("revival warns beyond the frozen-population window")
{
    std::vector<std::string> seen;
    auto previous = set_warning_handler([&](const std::string& msg) { seen.push_back(msg); });
    const auto p = uniform_params(3);
    std::vector<double> pj{0.0, 0.0, 0.0, 1.0};
    (void)de::rabi_revival(pj, p, uniform_grid(1.0, 11));
    CHECK(seen.size() == 1);
    set_warning_handler(previous);
}

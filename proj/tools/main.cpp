// main.cpp — Command-line front end

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scenario.hpp"

#ifndef BLOCKADE_VERSION
#define BLOCKADE_VERSION "0.0.0"
#endif

namespace {

using blockade::cli::CompareOptions;
using blockade::cli::ScenarioConfig;

std::vector<int> parse_n_values(const std::string& csv)
{
    std::vector<int> out;
    std::stringstream cells(csv);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
        if (cell.empty()) continue;
        out.push_back(std::stoi(cell));
    }
    if (out.empty()) throw CLI::ValidationError("--n", "needs at least one value");
    return out;
}

int run_simulate(const ScenarioConfig& config)
{
    const auto result = blockade::cli::run_scenario(config);
    std::cout << "wrote " << result.data_path.string() << " ("
              << result.table.rows() << " rows, schema " << result.table.schema << ")\n";
    return 0;
}

int run_compare(const std::string& file_a, const std::string& file_b, const CompareOptions& opts)
{
    const auto a = blockade::cli::load_table(file_a);
    const auto b = blockade::cli::load_table(file_b);
    const auto report = blockade::cli::compare_tables(a, b, opts);

    std::printf("%-20s %14s %14s\n", "column", "max|dev|", "rms");
    for (const auto& dev : report.deviations) {
        std::printf("%-20s %14.6e %14.6e\n", dev.column.c_str(), dev.max_abs / dev.scale,
                    dev.rms / dev.scale);
    }
    if (!report.within_tolerance) {
        std::cerr << "comparison exceeds tolerance " << opts.tolerance << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dissipative dynamics and scattered-field spectra of fully "
                 "blockaded three-level ensembles"};
    app.set_version_flag("--version", BLOCKADE_VERSION);
    app.require_subcommand(1);

    // -- simulate ---------------------------------------------------------
    auto* simulate = app.add_subcommand(
        "simulate", "Integrate a model and write a data file plus run manifest");
    ScenarioConfig config;
    std::string n_values;
    std::string preset;
    bool want_spectrum = false, want_g2 = false, want_fractions = false;
    bool want_relaxation = false, want_revival = false;
    double photon_rate = -1.0;

    simulate->add_option("model", config.model, "single | ladder | decomposition")->required();
    simulate->add_option("--preset", preset, "fig3 | fig4 | fig5 parameter bundles");
    simulate->add_option("--n", n_values, "atom number (or comma list with --relaxation)");
    simulate->add_option("--omega", config.omega, "Rabi frequency of the drive");
    simulate->add_option("--photon-rate", photon_rate,
                         "input photon rate f; sets omega = 2 sqrt(f gamma)");
    simulate->add_option("--gamma", config.gamma, "emission rate into the probe mode");
    simulate->add_option("--gamma-rg", config.gamma_rg, "remaining |r> -> |g> decay rate");
    simulate->add_option("--gamma-rd", config.gamma_rd, "|r> -> |d> pooling decay rate");
    simulate->add_option("--flipping", config.flipping,
                         "none | prop:<c_rg>,<c_rd> | table:<file>");
    simulate->add_option("--t-max", config.t_max, "time window in 1/gamma_rd");
    simulate->add_option("--t-steps", config.t_steps, "time grid intervals");
    simulate->add_option("--delta-range", config.delta_range, "detuning half-span");
    simulate->add_option("--delta-steps", config.delta_steps, "detuning samples");
    simulate->add_option("--seed-time", config.seed_time,
                         "quasi-steady seeding time (spectra, g2, revival)");
    simulate->add_option("--tau-max", config.tau_max, "correlation window override");
    simulate->add_option("--tau-steps", config.tau_steps, "correlation samples override");
    simulate->add_option("--revival-window", config.revival_window,
                         "revival dt window (default 0.1 / max Gamma_j)");
    simulate->add_option("--method", config.method,
                         "spectrum route: quadrature | resolvent | analytic | both");
    simulate->add_option("--out", config.out, "output path");
    simulate->add_option("--format", config.format, "csv | json");
    simulate->add_flag("--spectrum", want_spectrum, "emit a power spectrum");
    simulate->add_flag("--g2", want_g2, "emit the second-order field correlation");
    simulate->add_flag("--fractions", want_fractions, "emit atomic state fractions");
    simulate->add_flag("--relaxation", want_relaxation, "emit a relaxation-time table");
    simulate->add_flag("--revival", want_revival, "emit the switch-on revival prediction");

    // -- compare ----------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "Column-wise comparison of two data files");
    std::string file_a, file_b;
    CompareOptions compare_opts;
    compare->add_option("fileA", file_a, "first data file")->required();
    compare->add_option("fileB", file_b, "second data file")->required();
    compare->add_option("--tolerance", compare_opts.tolerance,
                        "largest admissible per-column max deviation");
    compare->add_flag("--peak-relative", compare_opts.peak_relative,
                      "scale deviations by the per-column peak of fileA");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            // Preset first, then explicit flags on top.
            if (!preset.empty()) {
                ScenarioConfig preset_config;
                preset_config.model = config.model;
                blockade::cli::apply_preset(preset_config, preset);
                // carry preset values for everything the user left untouched
                auto keep = [&](auto member, auto ScenarioConfig::* field) {
                    if (simulate->count(member) == 0) config.*field = preset_config.*field;
                };
                keep("--n", &ScenarioConfig::n_atoms);
                keep("--omega", &ScenarioConfig::omega);
                keep("--gamma", &ScenarioConfig::gamma);
                keep("--gamma-rg", &ScenarioConfig::gamma_rg);
                keep("--gamma-rd", &ScenarioConfig::gamma_rd);
                keep("--flipping", &ScenarioConfig::flipping);
                keep("--t-max", &ScenarioConfig::t_max);
                keep("--t-steps", &ScenarioConfig::t_steps);
                keep("--delta-steps", &ScenarioConfig::delta_steps);
                keep("--seed-time", &ScenarioConfig::seed_time);
                config.preset = preset;
                if (preset_config.mode != "trajectory" && !want_spectrum && !want_g2 &&
                    !want_fractions && !want_relaxation && !want_revival) {
                    config.mode = preset_config.mode;
                }
            }
            if (simulate->count("--n") > 0) {
                const auto values = parse_n_values(n_values);
                if (values.size() == 1) {
                    config.n_atoms = values[0];
                } else {
                    config.n_list = values;
                }
            }
            if (simulate->count("--photon-rate") > 0) config.photon_rate = photon_rate;

            const int mode_flags = static_cast<int>(want_spectrum) + static_cast<int>(want_g2) +
                                   static_cast<int>(want_fractions) +
                                   static_cast<int>(want_relaxation) +
                                   static_cast<int>(want_revival);
            if (mode_flags > 1) {
                throw std::invalid_argument(
                    "choose one of --spectrum, --g2, --fractions, --relaxation, --revival");
            }
            if (want_spectrum) config.mode = "spectrum";
            if (want_g2) config.mode = "g2";
            if (want_fractions) config.mode = "fractions";
            if (want_relaxation) config.mode = "relaxation";
            if (want_revival) config.mode = "revival";
            if (!config.n_list.empty() && config.mode == "relaxation") {
                // sweep list only meaningful there; n_atoms keeps its default
            }
            return run_simulate(config);
        }
        return run_compare(file_a, file_b, compare_opts);
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::out_of_range& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return 2;
    }
}

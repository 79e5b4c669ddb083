// scenario.hpp — Resolved run configurations and scenario execution

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockade/ladder.hpp"
#include "data_io.hpp"

namespace blockade::cli {

// One simulation request, as assembled from the command line. Every physical
// quantity is dimensionless: rates in units of gamma_rd, times in 1/gamma_rd.
// Zero-valued grid fields mean "derive from the model defaults".
struct ScenarioConfig {
    std::string model = "ladder"; // single | ladder | decomposition
    std::string mode = "trajectory";
    // trajectory | spectrum | g2 | fractions | relaxation | revival

    std::string preset; // "", fig3, fig4, fig5

    int n_atoms = 3;
    double gamma = 1.0;
    double gamma_rg = 1.0;
    double gamma_rd = 1.0;
    double omega = 30.0;
    std::optional<double> photon_rate; // overrides omega via 2 sqrt(f gamma)
    std::string flipping = "none";     // none | prop:<c_rg>,<c_rd> | table:<file>

    double t_max = 10.0;
    int t_steps = 1000;
    double delta_range = 0.0; // half-span; 0: 1.5 sqrt(N) Omega
    int delta_steps = 2049;
    double seed_time = 0.0;  // 0: quasi-steady default 8 / min Gamma_j
    double tau_max = 0.0;    // 0: model default
    int tau_steps = 0;       // 0: resolution-matched
    double revival_window = 0.0; // 0: 0.1 / max Gamma_j

    std::string method = "both"; // spectrum: quadrature | resolvent | analytic | both
    std::vector<int> n_list;     // relaxation sweep

    std::string out;             // output path; "" derives <model>_<mode>.<format>
    std::string format = "csv";  // csv | json

    std::string tolerance_note; // free-form, recorded in the manifest
};

// Applies a named preset onto a config (parameters only; explicitly set
// command-line flags are re-applied afterwards by the caller).
void apply_preset(ScenarioConfig& config, const std::string& preset);

// Validation + unit normalisation (gamma_rd scaled to 1 when positive).
// Throws std::invalid_argument on contract violations.
void resolve(ScenarioConfig& config);

// Ladder parameters of a resolved config (models single via n_atoms = 1
// semantics are NOT implied; single uses rates directly).
ladder::LadderParams ladder_params(const ScenarioConfig& config);
single_atom::RateParams atom_params(const ScenarioConfig& config);

struct ScenarioResult {
    DataTable table;
    std::filesystem::path data_path;
    nlohmann::json manifest;
};

// Runs a resolved scenario, writes the data file plus its manifest and
// returns both. Throws std::invalid_argument for config-level errors and
// std::runtime_error for numerical failures.
ScenarioResult run_scenario(ScenarioConfig config);

struct CompareOptions {
    double tolerance = std::numeric_limits<double>::infinity();
    bool peak_relative = false; // deviations divided by max|column of A|
};

struct ColumnDeviation {
    std::string column;
    double max_abs = 0.0;
    double rms = 0.0;
    double scale = 1.0; // divisor applied under peak_relative
};

struct CompareReport {
    std::vector<ColumnDeviation> deviations;
    bool within_tolerance = true;
};

// Schema-checked per-column comparison of two data files.
CompareReport compare_tables(const DataTable& a, const DataTable& b, const CompareOptions& opts);

} // namespace blockade::cli

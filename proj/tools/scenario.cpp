// scenario.cpp — Scenario resolution, execution and comparison

#include "scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "blockade/decomposition.hpp"
#include "blockade/warnings.hpp"

#ifndef BLOCKADE_VERSION
#define BLOCKADE_VERSION "0.0.0"
#endif

namespace blockade::cli {

namespace la = blockade::ladder;
namespace de = blockade::decomposition;
namespace sa = blockade::single_atom;

namespace {

const std::vector<std::string> kModels{"single", "ladder", "decomposition"};
const std::vector<std::string> kModes{"trajectory", "spectrum", "g2",
                                      "fractions", "relaxation", "revival"};
const std::vector<std::string> kMethods{"quadrature", "resolvent", "analytic", "both"};

bool contains(const std::vector<std::string>& haystack, const std::string& needle)
{
    return std::find(haystack.begin(), haystack.end(), needle) != haystack.end();
}

la::FlippingModel parse_flipping(const std::string& spec, int n_atoms)
{
    if (spec == "none") return la::FlippingModel::none();
    if (spec.rfind("prop:", 0) == 0) {
        const std::string args = spec.substr(5);
        const auto comma = args.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("flipping prop needs two rates: prop:<c_rg>,<c_rd>");
        }
        return la::FlippingModel::proportional(std::stod(args.substr(0, comma)),
                                               std::stod(args.substr(comma + 1)));
    }
    if (spec.rfind("table:", 0) == 0) {
        const std::string path = spec.substr(6);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open flipping table " + path);
        std::vector<double> d_rg, d_rd;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            for (char& ch : line) {
                if (ch == ',') ch = ' ';
            }
            std::istringstream cells(line);
            double rg = 0.0, rd = 0.0;
            if (!(cells >> rg >> rd)) {
                throw std::invalid_argument("flipping table rows need two numbers: D_rg D_rd");
            }
            d_rg.push_back(rg);
            d_rd.push_back(rd);
        }
        if (d_rg.size() != static_cast<std::size_t>(n_atoms)) {
            throw std::invalid_argument("flipping table must have one row per rung (n rows)");
        }
        return la::FlippingModel::table(std::move(d_rg), std::move(d_rd));
    }
    throw std::invalid_argument("unknown flipping spec: " + spec +
                                " (expected none | prop:<c_rg>,<c_rd> | table:<file>)");
}

std::size_t center_index(const std::vector<double>& delta)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < delta.size(); ++i) {
        if (std::abs(delta[i]) < std::abs(delta[best])) best = i;
    }
    return best;
}

std::vector<double> normalized_by_center(const Eigen::VectorXd& values, std::size_t center)
{
    const double reference = values[static_cast<Eigen::Index>(center)];
    std::vector<double> out(static_cast<std::size_t>(values.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = values[static_cast<Eigen::Index>(i)] / reference;
    }
    return out;
}

std::vector<double> to_std(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

// Scoped capture of core warnings into the manifest (still forwarded).
class WarningCapture {
public:
    WarningCapture()
    {
        previous_ = set_warning_handler([this](const std::string& msg) {
            messages_.push_back(msg);
            if (previous_) previous_(msg);
        });
    }
    ~WarningCapture() { set_warning_handler(previous_); }
    const std::vector<std::string>& messages() const { return messages_; }

private:
    WarningHandler previous_;
    std::vector<std::string> messages_;
};

} // namespace

void apply_preset(ScenarioConfig& config, const std::string& preset)
{
    config.preset = preset;
    if (preset.empty()) return;
    if (preset == "fig3") {
        config.n_atoms = 3;
        config.gamma = config.gamma_rg = config.gamma_rd = 1.0;
        config.omega = 30.0;
        config.flipping = "prop:0.5,0.5";
        config.t_max = 10.0;
        config.t_steps = 1000;
        config.seed_time = 2.5;
        config.delta_steps = 2049;
    } else if (preset == "fig4") {
        apply_preset(config, "fig3");
        config.preset = preset;
        config.mode = "spectrum";
    } else if (preset == "fig5") {
        config.n_atoms = 10;
        config.gamma = config.gamma_rg = config.gamma_rd = 1.0;
        config.omega = 30.0;
        config.flipping = "none";
        config.mode = "fractions";
        config.t_max = 0.0; // resolved to 1.3 t_r below
        config.t_steps = 2000;
    } else {
        throw std::invalid_argument("unknown preset: " + preset +
                                    " (expected fig3 | fig4 | fig5)");
    }
}

void resolve(ScenarioConfig& config)
{
    if (!contains(kModels, config.model)) {
        throw std::invalid_argument("unknown model: " + config.model);
    }
    if (!contains(kModes, config.mode)) {
        throw std::invalid_argument("unknown mode: " + config.mode);
    }
    if (!contains(kMethods, config.method)) {
        throw std::invalid_argument("unknown method: " + config.method);
    }
    if (config.format != "csv" && config.format != "json") {
        throw std::invalid_argument("unknown format: " + config.format);
    }
    if (config.n_atoms < 1) throw std::invalid_argument("need at least one atom");
    if (config.gamma < 0.0 || config.gamma_rg < 0.0 || config.gamma_rd < 0.0) {
        throw std::invalid_argument("negative rates are rejected");
    }
    if (config.omega < 0.0) throw std::invalid_argument("negative Rabi frequency");
    if (config.t_steps < 2 || config.delta_steps < 2) {
        throw std::invalid_argument("grids need at least two samples");
    }

    if (config.mode == "g2" && config.model != "ladder") {
        throw std::invalid_argument("g2 is a ladder observable (use model 'ladder')");
    }
    if (config.mode == "relaxation" && config.model != "decomposition") {
        throw std::invalid_argument("relaxation tables come from model 'decomposition'");
    }
    if (config.mode == "revival" && config.model != "decomposition") {
        throw std::invalid_argument("revival predictions come from model 'decomposition'");
    }
    if (config.mode == "fractions" && config.model == "single") {
        throw std::invalid_argument("fractions need a collective model");
    }
    if (!config.n_list.empty() && config.mode != "relaxation") {
        throw std::invalid_argument("an atom-number list is only valid with --relaxation");
    }

    // Everything is dimensionless in units of gamma_rd; rescale when the
    // caller insists on a different gamma_rd (impossible for gamma_rd = 0,
    // where the remaining rates set the scale).
    if (config.gamma_rd > 0.0 && config.gamma_rd != 1.0) {
        const double scale = config.gamma_rd;
        config.gamma /= scale;
        config.gamma_rg /= scale;
        config.omega /= scale;
        if (config.photon_rate) *config.photon_rate /= scale;
        config.gamma_rd = 1.0;
        emit_warning("rates rescaled to units of gamma_rd (divided by " +
                     std::to_string(scale) + "); time and detuning inputs are "
                     "interpreted in 1/gamma_rd as always");
    }
    if (config.photon_rate) {
        if (*config.photon_rate < 0.0) throw std::invalid_argument("negative photon rate");
        config.omega = sa::rabi_from_photon_rate(*config.photon_rate, config.gamma);
    }

    // Parameter-dependent defaults.
    if (config.mode == "relaxation" && config.n_list.empty()) {
        config.n_list = {10, 100};
    }
    if (config.t_max == 0.0) {
        if (config.n_atoms >= 2 && config.gamma_rd > 0.0) {
            config.t_max =
                1.3 * de::relaxation_time_numeric(config.n_atoms, config.gamma_rd).relaxation_time;
        } else {
            config.t_max = 12.0;
        }
    }
    if (config.t_max <= 0.0) throw std::invalid_argument("t_max must be positive");

    // Probe model parameters so contract violations surface as config errors.
    if (config.model == "single") {
        atom_params(config).validate();
    } else {
        ladder_params(config).validate();
    }
}

sa::RateParams atom_params(const ScenarioConfig& config)
{
    return {.gamma = config.gamma,
            .gamma_rg = config.gamma_rg,
            .gamma_rd = config.gamma_rd,
            .omega = config.omega};
}

la::LadderParams ladder_params(const ScenarioConfig& config)
{
    return {.n_atoms = config.n_atoms,
            .rates = atom_params(config),
            .flipping = parse_flipping(config.flipping, config.n_atoms)};
}

namespace {

DataTable run_single(const ScenarioConfig& config, nlohmann::json& derived)
{
    const sa::RateParams p = atom_params(config);
    DataTable table;

    derived["regime"] = sa::regime_name(sa::classify_regime(p));
    derived["total_decay"] = p.total_decay();

    if (config.mode == "trajectory") {
        const auto grid = uniform_grid(config.t_max, static_cast<std::size_t>(config.t_steps) + 1);
        const auto traj = integrate(sa::generator(p), sa::ground_state(), grid);
        table.schema = "single_trajectory";
        table.columns = {"t", "pop_g", "pop_r", "pop_d", "coh_gr_re", "coh_gr_im"};
        table.values.resize(6);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            table.values[0].push_back(grid[i]);
            const auto y = traj.at(i);
            table.values[1].push_back(y[0].real());
            table.values[2].push_back(y[1].real());
            table.values[3].push_back(y[4].real());
            table.values[4].push_back(y[2].real());
            table.values[5].push_back(y[2].imag());
        }
        return table;
    }

    if (config.mode != "spectrum") {
        throw std::invalid_argument("model 'single' supports trajectory and spectrum modes");
    }

    const sa::Regime regime = sa::classify_regime(p);
    const double seed_time =
        config.seed_time > 0.0 ? config.seed_time : sa::quasi_steady_time(p);
    double span = config.delta_range;
    if (span <= 0.0) {
        switch (regime) {
            case sa::Regime::strong_field: span = 1.5 * p.omega; break;
            case sa::Regime::weak_field: {
                const double g2 = p.total_decay() * p.total_decay();
                const double width = std::max(p.gamma_rd, 1e-3) * p.omega * p.omega / g2;
                span = 10.0 * width;
                break;
            }
            case sa::Regime::intermediate: span = 1.5 * (p.omega + p.total_decay()); break;
        }
    }
    const auto grid = symmetric_grid(span, static_cast<std::size_t>(config.delta_steps));
    derived["seed_time"] = seed_time;
    derived["delta_span"] = span;

    sa::NumericSpectrumOptions opts;
    if (config.method == "resolvent") opts.method = SpectrumMethod::resolvent;
    if (config.tau_max > 0.0) opts.tau_max = config.tau_max;
    if (config.tau_steps > 0) opts.tau_samples = static_cast<std::size_t>(config.tau_steps);
    const Spectrum numeric = sa::numeric_spectrum(p, seed_time, grid, opts);

    Eigen::VectorXd analytic(static_cast<Eigen::Index>(grid.size()));
    analytic.setConstant(std::numeric_limits<double>::quiet_NaN());
    if (regime == sa::Regime::strong_field) {
        analytic = sa::sfl_spectrum_analytic(p, seed_time, grid).values;
    } else if (regime == sa::Regime::weak_field && p.gamma_rd > 0.0) {
        analytic = sa::wfl_spectrum_analytic(p, seed_time, grid).values;
    } else {
        derived["analytic_spectrum"] = "unavailable in this regime";
    }

    table.schema = "single_spectrum";
    table.columns = {"delta", "S_numeric", "S_analytic", "S_normalized"};
    table.values.resize(4);
    table.values[0] = grid;
    table.values[1] = to_std(numeric.values);
    table.values[2] = to_std(analytic);
    table.values[3] = normalized_by_center(numeric.values, center_index(grid));
    return table;
}

DataTable trajectory_table(const std::string& schema, const std::vector<double>& t,
                           const std::vector<std::vector<double>>& pj_rows)
{
    DataTable table;
    table.schema = schema;
    table.columns = {"t"};
    const std::size_t n_plus_1 = pj_rows.front().size();
    for (std::size_t j = 0; j < n_plus_1; ++j) {
        table.columns.push_back("p_" + std::to_string(j));
    }
    table.values.assign(n_plus_1 + 1, {});
    for (std::size_t i = 0; i < t.size(); ++i) {
        table.values[0].push_back(t[i]);
        for (std::size_t j = 0; j < n_plus_1; ++j) {
            table.values[j + 1].push_back(pj_rows[i][j]);
        }
    }
    return table;
}

DataTable fractions_table(const std::string& schema, const de::FractionReport& report)
{
    DataTable table;
    table.schema = schema;
    table.columns = {"t",        "P_d",         "P_G0",           "P_r",
                     "P_r_osc",  "dPd_dt_fd",   "dPd_dt_identity"};
    table.values = {report.t,
                    report.pooled,
                    report.all_pooled,
                    report.rydberg,
                    report.rydberg_oscillatory,
                    report.pooled_rate_fd,
                    report.pooled_rate_identity};
    return table;
}

DataTable run_collective(const ScenarioConfig& config, nlohmann::json& derived)
{
    const la::LadderParams p = ladder_params(config);
    derived["sfl_ratios"] = p.sfl_ratios();
    derived["quasi_steady_threshold"] = la::default_seed_time(p);

    const bool from_ladder = config.model == "ladder";
    const auto t_grid = uniform_grid(config.t_max, static_cast<std::size_t>(config.t_steps) + 1);

    if (config.mode == "trajectory") {
        std::vector<std::vector<double>> rows;
        if (from_ladder) {
            const auto states = la::evolve(p, t_grid);
            for (const auto& s : states) rows.push_back(la::rung_populations(s));
        } else {
            const auto traj = de::evolve_pj(p, t_grid);
            for (std::size_t i = 0; i < t_grid.size(); ++i) rows.push_back(traj.at(i));
        }
        return trajectory_table(from_ladder ? "ladder_populations" : "cascade_populations",
                                t_grid, rows);
    }

    if (config.mode == "fractions") {
        const de::PjTrajectory traj =
            from_ladder ? de::pj_from_ladder(p, t_grid) : de::evolve_pj(p, t_grid);
        if (config.n_atoms >= 5 && p.flipping.is_none()) {
            derived["relaxation_time_closed_form"] =
                de::relaxation_time_closed_form(config.n_atoms, p.rates.gamma_rd);
        }
        if (config.n_atoms >= 2) {
            derived["relaxation_time_numeric"] =
                de::relaxation_time_numeric(config.n_atoms, p.rates.gamma_rd).relaxation_time;
        }
        return fractions_table(from_ladder ? "ladder_fractions" : "cascade_fractions",
                               de::fractions(traj, p));
    }

    if (config.mode == "spectrum") {
        const double seed_time =
            config.seed_time > 0.0 ? config.seed_time : la::default_seed_time(p);
        const double span =
            config.delta_range > 0.0 ? config.delta_range : la::default_delta_span(p);
        const auto grid = symmetric_grid(span, static_cast<std::size_t>(config.delta_steps));
        derived["seed_time"] = seed_time;
        derived["delta_span"] = span;

        la::SpectrumOptions opts;
        if (config.tau_max > 0.0) opts.tau_max = config.tau_max;
        if (config.tau_steps > 0) opts.tau_samples = static_cast<std::size_t>(config.tau_steps);

        DataTable table;
        table.values.resize(3);
        table.values[0] = grid;
        const std::size_t center = center_index(grid);

        const bool want_both = from_ladder && config.method == "both";
        if (want_both) {
            const Spectrum numeric = la::scattered_spectrum(p, seed_time, grid, opts);
            const Spectrum analytic = de::spectrum_analytic(p, seed_time, grid);
            table.schema = "ladder_spectrum";
            table.columns = {"delta", "S_numeric", "S_analytic", "S_normalized"};
            table.values.resize(4);
            table.values[1] = to_std(numeric.values);
            table.values[2] = to_std(analytic.values);
            table.values[3] = normalized_by_center(numeric.values, center);
            return table;
        }

        Spectrum s;
        if (!from_ladder || config.method == "analytic") {
            s = de::spectrum_analytic(p, seed_time, grid);
        } else {
            if (config.method == "resolvent") opts.method = SpectrumMethod::resolvent;
            s = la::scattered_spectrum(p, seed_time, grid, opts);
        }
        table.schema = "collective_spectrum";
        table.columns = {"delta", "S", "S_normalized"};
        table.values[1] = to_std(s.values);
        table.values[2] = normalized_by_center(s.values, center);
        return table;
    }

    if (config.mode == "g2") {
        const double t1 = config.seed_time > 0.0 ? config.seed_time : la::default_seed_time(p);
        const double window = config.tau_max > 0.0 ? config.tau_max : la::default_tau_max(p);
        const std::size_t samples =
            config.tau_steps > 0
                ? static_cast<std::size_t>(config.tau_steps)
                : auto_tau_samples(window, p.collective_rates().omega.back(), 2049);
        const auto tau = uniform_grid(window, samples);
        derived["seed_time"] = t1;
        const auto result = la::g2(p, t1, tau);

        DataTable table;
        table.schema = "ladder_g2";
        table.columns = {"tau", "g2_unnormalized", "g2_normalized"};
        table.values = {tau, to_std(result.unnormalized), to_std(result.normalized)};
        return table;
    }

    if (config.mode == "relaxation") {
        DataTable table;
        table.schema = "relaxation_times";
        table.columns = {"n", "t_r_closed", "t_r_numeric", "rel_diff"};
        table.values.resize(4);
        for (int n : config.n_list) {
            if (n < 2) throw std::invalid_argument("relaxation table needs n >= 2");
            const double numeric = de::relaxation_time_numeric(n, config.gamma_rd).relaxation_time;
            double closed = std::numeric_limits<double>::quiet_NaN();
            double diff = std::numeric_limits<double>::quiet_NaN();
            if (n >= 5) {
                closed = de::relaxation_time_closed_form(n, config.gamma_rd);
                diff = std::abs(closed - numeric) / closed;
            }
            table.values[0].push_back(n);
            table.values[1].push_back(closed);
            table.values[2].push_back(numeric);
            table.values[3].push_back(diff);
        }
        return table;
    }

    if (config.mode == "revival") {
        const double t_prime = config.seed_time > 0.0 ? config.seed_time : 2.0 / std::max(config.gamma_rd, 1e-12);
        const auto before = de::evolve_pj(p, uniform_grid(t_prime, 257));
        const auto pj = before.at(256);
        const double window = config.revival_window > 0.0
                                  ? config.revival_window
                                  : 0.1 / p.collective_rates().max_total();
        derived["restart_time"] = t_prime;
        derived["revival_window"] = window;
        const auto dt = uniform_grid(window, static_cast<std::size_t>(config.t_steps) + 1);
        const auto revived = de::rabi_revival(pj, p, dt);

        DataTable table;
        table.schema = "rabi_revival";
        table.columns = {"dt", "P_r"};
        table.values = {dt, revived};
        return table;
    }

    throw std::invalid_argument("unsupported mode for this model: " + config.mode);
}

} // namespace

ScenarioResult run_scenario(ScenarioConfig config)
{
    WarningCapture warnings;
    resolve(config);

    const auto started = std::chrono::steady_clock::now();
    nlohmann::json derived;
    DataTable table =
        config.model == "single" ? run_single(config, derived) : run_collective(config, derived);

    ScenarioResult result;
    result.table = std::move(table);
    result.data_path = config.out.empty()
                           ? std::filesystem::path(config.model + "_" + config.mode + "." +
                                                   config.format)
                           : std::filesystem::path(config.out);
    write_table(result.data_path, result.table, config.format);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    nlohmann::json& manifest = result.manifest;
    manifest["tool"] = "blockade";
    manifest["version"] = BLOCKADE_VERSION;
    manifest["config"] = {
        {"model", config.model},
        {"mode", config.mode},
        {"preset", config.preset},
        {"n_atoms", config.n_atoms},
        {"gamma", config.gamma},
        {"gamma_rg", config.gamma_rg},
        {"gamma_rd", config.gamma_rd},
        {"omega", config.omega},
        {"flipping", config.flipping},
        {"t_max", config.t_max},
        {"t_steps", config.t_steps},
        {"delta_range", config.delta_range},
        {"delta_steps", config.delta_steps},
        {"seed_time", config.seed_time},
        {"tau_max", config.tau_max},
        {"tau_steps", config.tau_steps},
        {"method", config.method},
        {"format", config.format},
        {"n_list", config.n_list},
    };
    if (config.photon_rate) manifest["config"]["photon_rate"] = *config.photon_rate;
    manifest["derived"] = derived;
    manifest["warnings"] = warnings.messages();
    manifest["wall_time_seconds"] = elapsed;
    manifest["output"] = {{"path", result.data_path.string()},
                          {"schema", result.table.schema},
                          {"columns", result.table.columns},
                          {"rows", result.table.rows()}};
    write_manifest(result.data_path, manifest);
    return result;
}

CompareReport compare_tables(const DataTable& a, const DataTable& b, const CompareOptions& opts)
{
    if (a.columns != b.columns) {
        throw std::invalid_argument("schema mismatch: column sets differ");
    }
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("schema mismatch: row counts differ");
    }

    CompareReport report;
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        ColumnDeviation dev;
        dev.column = a.columns[c];
        double sum_sq = 0.0;
        double peak = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            const double va = a.values[c][r];
            const double vb = b.values[c][r];
            peak = std::max(peak, std::abs(va));
            if (std::isnan(va) && std::isnan(vb)) continue;
            const double d = std::abs(va - vb);
            dev.max_abs = std::max(dev.max_abs, d);
            sum_sq += d * d;
        }
        dev.rms = a.rows() ? std::sqrt(sum_sq / static_cast<double>(a.rows())) : 0.0;
        dev.scale = opts.peak_relative && peak > 0.0 ? peak : 1.0;
        if (dev.max_abs / dev.scale > opts.tolerance) report.within_tolerance = false;
        report.deviations.push_back(dev);
    }
    return report;
}

} // namespace blockade::cli

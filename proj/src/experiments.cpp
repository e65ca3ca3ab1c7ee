#include "roadcov/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "roadcov/coverage.hpp"
#include "roadcov/csv.hpp"
#include "roadcov/simulator.hpp"
#include "roadcov/svg.hpp"

namespace roadcov {

using json = nlohmann::ordered_json;

namespace {

const char* kClassKeys[kNumClasses] = {"macro_los", "macro_nlos", "small_los_mu", "small_nlos",
                                       "small_los_mm"};

// ------------------------------------------------------------ human units

struct HumanParams {
    double lambda_m_per_km2 = 1.0;
    double lambda_r_per_km2 = 10.0;
    double lambda_s_per_km = 100.0;
    double lambda_ou_per_km = 10.0;
    double d_m_m = 200.0;
    double p_tx_macro_dbm = 45.0;
    double p_tx_small_dbm = 30.0;
    double g0_db = 30.0;
    double theta_deg = 10.0;
    double h_m = 10.0;
    double noise_figure_db = 7.0;
    double bandwidth_mu_hz = 20e6;
    double bandwidth_mm_hz = 1e9;
    int nakagami_m = 3;
    double window_radius_m = 0.0;
    double alpha[kNumClasses] = {2.0, 4.0, 2.0, 4.0, 2.0};
    double k_db[kNumClasses];

    HumanParams() {
        const double k_mu = linear_to_db(free_space_k(2e9));
        const double k_mm = linear_to_db(free_space_k(28e9));
        k_db[0] = k_mu;
        k_db[1] = k_mu;
        k_db[2] = k_mu;
        k_db[3] = k_mu;
        k_db[4] = k_mm;
    }

    SystemParams to_si() const {
        SystemParams p;
        p.lambda_m = lambda_m_per_km2 * 1e-6;
        p.lambda_r = lambda_r_per_km2 * 1e-6;
        p.lambda_s = lambda_s_per_km * 1e-3;
        p.lambda_ou = lambda_ou_per_km * 1e-3;
        p.d_m = d_m_m;
        p.p_tx_macro = dbm_to_watts(p_tx_macro_dbm);
        p.p_tx_small = dbm_to_watts(p_tx_small_dbm);
        p.g0 = db_to_linear(g0_db);
        p.theta = deg_to_rad(theta_deg);
        p.h = h_m;
        p.noise_mu = noise_power_watts(bandwidth_mu_hz, noise_figure_db);
        p.noise_mm = noise_power_watts(bandwidth_mm_hz, noise_figure_db);
        p.nakagami_m = nakagami_m;
        for (std::size_t i = 0; i < kNumClasses; ++i) {
            p.alpha[static_cast<ClassId>(i)] = alpha[i];
            p.k[static_cast<ClassId>(i)] = db_to_linear(k_db[i]);
        }
        return p;
    }

    json to_json() const {
        json j;
        j["lambda_m_per_km2"] = lambda_m_per_km2;
        j["lambda_r_per_km2"] = lambda_r_per_km2;
        j["lambda_s_per_km"] = lambda_s_per_km;
        j["lambda_ou_per_km"] = lambda_ou_per_km;
        j["d_m_m"] = d_m_m;
        j["p_tx_macro_dbm"] = p_tx_macro_dbm;
        j["p_tx_small_dbm"] = p_tx_small_dbm;
        j["g0_db"] = g0_db;
        j["theta_deg"] = theta_deg;
        j["h_m"] = h_m;
        j["noise_figure_db"] = noise_figure_db;
        j["bandwidth_mu_hz"] = bandwidth_mu_hz;
        j["bandwidth_mm_hz"] = bandwidth_mm_hz;
        j["nakagami_m"] = nakagami_m;
        j["window_radius_m"] = window_radius_m;
        json ja, jk;
        for (std::size_t i = 0; i < kNumClasses; ++i) {
            ja[kClassKeys[i]] = alpha[i];
            jk[kClassKeys[i]] = k_db[i];
        }
        j["alpha"] = ja;
        j["k_db"] = jk;
        return j;
    }
};

bool set_human_field(HumanParams& h, const std::string& key, double value) {
    if (key == "lambda_m_per_km2") h.lambda_m_per_km2 = value;
    else if (key == "lambda_r_per_km2") h.lambda_r_per_km2 = value;
    else if (key == "lambda_s_per_km") h.lambda_s_per_km = value;
    else if (key == "lambda_ou_per_km") h.lambda_ou_per_km = value;
    else if (key == "d_m_m") h.d_m_m = value;
    else if (key == "p_tx_macro_dbm") h.p_tx_macro_dbm = value;
    else if (key == "p_tx_small_dbm") h.p_tx_small_dbm = value;
    else if (key == "g0_db") h.g0_db = value;
    else if (key == "theta_deg") h.theta_deg = value;
    else if (key == "h_m") h.h_m = value;
    else if (key == "noise_figure_db") h.noise_figure_db = value;
    else if (key == "bandwidth_mu_hz") h.bandwidth_mu_hz = value;
    else if (key == "bandwidth_mm_hz") h.bandwidth_mm_hz = value;
    else if (key == "nakagami_m") h.nakagami_m = static_cast<int>(value);
    else if (key == "window_radius_m") h.window_radius_m = value;
    else return false;
    return true;
}

// ------------------------------------------------------- experiment table

struct ExperimentDefaults {
    HumanParams params;
    long trials = 10000;
    std::vector<double> gamma_db;
    std::vector<SweepAxis> sweep;
};

std::vector<double> gamma_range(double lo, double hi, double step) {
    std::vector<double> g;
    for (double v = lo; v <= hi + 1e-9; v += step) g.push_back(v);
    return g;
}

ExperimentDefaults defaults_for(ExperimentKind kind) {
    ExperimentDefaults d;
    switch (kind) {
        case ExperimentKind::Fig2Validation:
            d.trials = 20000;
            d.gamma_db = gamma_range(-20.0, 30.0, 2.0);
            break;
        case ExperimentKind::Fig3InterferenceModels:
            d.params.lambda_ou_per_km = 100.0; // busy streets show the contrast
            d.trials = 20000;
            d.gamma_db = gamma_range(-10.0, 30.0, 2.0);
            break;
        case ExperimentKind::Fig4AssociationSweep:
            d.trials = 10000;
            d.sweep = {{"lambda_s_per_km", {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}},
                       {"lambda_r_per_km2", {10.0, 50.0}}};
            break;
        case ExperimentKind::Fig5RatSelection:
            // Isolation of the band comparison: macros and other roads are
            // effectively removed, and the two LOS exponents must differ
            // for the switch distance to exist.
            d.params.lambda_m_per_km2 = 1e-6;
            d.params.lambda_r_per_km2 = 0.1;
            d.params.alpha[2] = 3.0;
            d.params.window_radius_m = 3000.0;
            d.trials = 6000;
            d.sweep = {{"lambda_s_per_km", {10.0, 20.0, 50.0, 100.0, 200.0, 300.0}},
                       {"g0_db", {20.0, 25.0, 26.0, 30.0}}};
            break;
        case ExperimentKind::Fig6CoverageSweep:
            d.trials = 20000;
            d.gamma_db = gamma_range(-20.0, 30.0, 2.0);
            d.sweep = {{"lambda_r_per_km2", {10.0, 20.0, 50.0}}};
            break;
        case ExperimentKind::Fig7MmGain:
            // Gain of the high-gain antenna configuration over the low-gain
            // one; dense macros realize the low-density collapse of the
            // small-cell share at desk scale.
            d.params.lambda_m_per_km2 = 30.0;
            d.params.lambda_r_per_km2 = 50.0;
            d.trials = 20000;
            d.gamma_db = {-10.0};
            d.sweep = {{"lambda_s_per_km", {2.0, 10.0, 30.0, 60.0, 100.0, 125.0, 150.0, 200.0}}};
            break;
        case ExperimentKind::Custom:
            d.trials = 10000;
            d.gamma_db = gamma_range(-10.0, 20.0, 5.0);
            break;
    }
    return d;
}

// --------------------------------------------------------------- parsing

struct Parser {
    std::vector<std::string>& errors;
    std::vector<std::string>& warnings;

    void check_keys(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where) {
        for (const auto& item : obj.items()) {
            bool known = false;
            for (const auto& k : allowed)
                if (item.key() == k) known = true;
            if (!known) errors.push_back(where + ": unknown key '" + item.key() + "'");
        }
    }

    double number(const json& obj, const std::string& key, const std::string& where,
                  double fallback) {
        if (!obj.contains(key)) return fallback;
        if (!obj[key].is_number()) {
            errors.push_back(where + "." + key + ": expected a number");
            return fallback;
        }
        return obj[key].get<double>();
    }

    bool boolean(const json& obj, const std::string& key, const std::string& where,
                 bool fallback) {
        if (!obj.contains(key)) return fallback;
        if (!obj[key].is_boolean()) {
            errors.push_back(where + "." + key + ": expected a boolean");
            return fallback;
        }
        return obj[key].get<bool>();
    }
};

const std::vector<std::string> kSweepableParams = {
    "lambda_m_per_km2", "lambda_r_per_km2", "lambda_s_per_km", "lambda_ou_per_km",
    "d_m_m",            "p_tx_macro_dbm",   "p_tx_small_dbm",  "g0_db",
    "theta_deg",        "h_m",              "nakagami_m"};

ValidationResult validate_json(const json& root);

ValidationResult validate_manifest_or_config(const json& root) {
    // A manifest written by run_experiment embeds the resolved config.
    if (root.is_object() && root.contains("config") && root.contains("tool")) {
        return validate_json(root["config"]);
    }
    return validate_json(root);
}

ValidationResult validate_json(const json& root) {
    ValidationResult result;
    Parser p{result.errors, result.warnings};

    if (!root.is_object()) {
        result.errors.push_back("top level: expected a JSON object");
        return result;
    }

    p.check_keys(root,
                 {"experiment", "trials", "seed", "output_dir", "gamma_db", "params", "sweep",
                  "no_sim", "no_analytic"},
                 "top level");

    ExperimentConfig cfg;
    if (!root.contains("experiment") || !root["experiment"].is_string()) {
        result.errors.push_back("top level: 'experiment' (string) is required");
        return result;
    }
    cfg.name = root["experiment"].get<std::string>();
    const auto kind = experiment_from_name(cfg.name);
    if (!kind) {
        std::string names;
        for (const auto& n : experiment_names()) names += n + " ";
        result.errors.push_back("experiment: unknown name '" + cfg.name + "' (expected one of: " +
                                names + ")");
        return result;
    }
    cfg.kind = *kind;

    ExperimentDefaults defaults = defaults_for(cfg.kind);
    HumanParams human = defaults.params;

    if (root.contains("params")) {
        const json& jp = root["params"];
        if (!jp.is_object()) {
            result.errors.push_back("params: expected an object");
        } else {
            std::vector<std::string> allowed = {
                "lambda_m_per_km2", "lambda_r_per_km2", "lambda_s_per_km", "lambda_ou_per_km",
                "d_m_m",            "p_tx_macro_dbm",   "p_tx_small_dbm",  "g0_db",
                "theta_deg",        "h_m",              "noise_figure_db", "bandwidth_mu_hz",
                "bandwidth_mm_hz",  "nakagami_m",       "window_radius_m", "alpha",
                "k_db"};
            p.check_keys(jp, allowed, "params");
            for (const auto& item : jp.items()) {
                if (item.key() == "alpha" || item.key() == "k_db") {
                    if (!item.value().is_object()) {
                        result.errors.push_back("params." + item.key() + ": expected an object");
                        continue;
                    }
                    std::vector<std::string> class_keys(kClassKeys, kClassKeys + kNumClasses);
                    p.check_keys(item.value(), class_keys, "params." + item.key());
                    for (std::size_t i = 0; i < kNumClasses; ++i) {
                        const double v = p.number(item.value(), kClassKeys[i],
                                                  "params." + item.key(),
                                                  item.key() == "alpha" ? human.alpha[i]
                                                                        : human.k_db[i]);
                        if (item.key() == "alpha") human.alpha[i] = v;
                        else human.k_db[i] = v;
                    }
                } else if (item.value().is_number()) {
                    set_human_field(human, item.key(), item.value().get<double>());
                } else {
                    result.errors.push_back("params." + item.key() + ": expected a number");
                }
            }
        }
    }

    cfg.trials = static_cast<long>(p.number(root, "trials", "top level",
                                            static_cast<double>(defaults.trials)));
    if (cfg.trials < 1) result.errors.push_back("trials: must be at least 1");
    cfg.seed = static_cast<std::uint64_t>(p.number(root, "seed", "top level", 1.0));
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string())
            result.errors.push_back("output_dir: expected a string");
        else
            cfg.output_dir = root["output_dir"].get<std::string>();
    }
    cfg.no_sim = p.boolean(root, "no_sim", "top level", false);
    cfg.no_analytic = p.boolean(root, "no_analytic", "top level", false);
    if (cfg.no_sim && cfg.no_analytic)
        result.errors.push_back("no_sim and no_analytic cannot both be set");

    // Threshold grid: either {min,max,step} or an explicit array.
    cfg.gamma_db = defaults.gamma_db;
    if (root.contains("gamma_db")) {
        const json& jg = root["gamma_db"];
        if (jg.is_array()) {
            cfg.gamma_db.clear();
            for (const auto& v : jg) {
                if (!v.is_number()) {
                    result.errors.push_back("gamma_db: expected numbers");
                    break;
                }
                cfg.gamma_db.push_back(v.get<double>());
            }
        } else if (jg.is_object()) {
            p.check_keys(jg, {"min", "max", "step"}, "gamma_db");
            const double lo = p.number(jg, "min", "gamma_db", -20.0);
            const double hi = p.number(jg, "max", "gamma_db", 30.0);
            const double step = p.number(jg, "step", "gamma_db", 2.0);
            if (step <= 0.0 || hi < lo)
                result.errors.push_back("gamma_db: need step > 0 and max >= min");
            else
                cfg.gamma_db = gamma_range(lo, hi, step);
        } else {
            result.errors.push_back("gamma_db: expected an array or {min,max,step}");
        }
    }
    const bool uses_gamma = cfg.kind != ExperimentKind::Fig4AssociationSweep &&
                            cfg.kind != ExperimentKind::Fig5RatSelection;
    if (uses_gamma && cfg.gamma_db.empty())
        result.errors.push_back("gamma_db: grid must not be empty");

    // Sweep axes.
    cfg.sweep = defaults.sweep;
    if (root.contains("sweep")) {
        const json& js = root["sweep"];
        if (!js.is_array()) {
            result.errors.push_back("sweep: expected an array of {param, grid}");
        } else {
            cfg.sweep.clear();
            for (const auto& axis : js) {
                if (!axis.is_object() || !axis.contains("param") || !axis.contains("grid")) {
                    result.errors.push_back("sweep: each axis needs 'param' and 'grid'");
                    continue;
                }
                p.check_keys(axis, {"param", "grid"}, "sweep axis");
                SweepAxis sa;
                if (!axis["param"].is_string()) {
                    result.errors.push_back("sweep.param: expected a string");
                    continue;
                }
                sa.param = axis["param"].get<std::string>();
                bool known = false;
                for (const auto& k : kSweepableParams)
                    if (k == sa.param) known = true;
                if (!known)
                    result.errors.push_back("sweep.param: '" + sa.param +
                                            "' is not a sweepable parameter");
                if (!axis["grid"].is_array() || axis["grid"].empty()) {
                    result.errors.push_back("sweep.grid: must be a nonempty array");
                    continue;
                }
                for (const auto& v : axis["grid"]) {
                    if (!v.is_number()) {
                        result.errors.push_back("sweep.grid: expected numbers");
                        break;
                    }
                    sa.grid.push_back(v.get<double>());
                }
                for (std::size_t i = 1; i < sa.grid.size(); ++i)
                    if (sa.grid[i] <= sa.grid[i - 1]) {
                        result.errors.push_back("sweep.grid: values must be strictly increasing");
                        break;
                    }
                cfg.sweep.push_back(std::move(sa));
            }
        }
    }
    if (cfg.kind == ExperimentKind::Custom && cfg.sweep.empty())
        result.errors.push_back("custom experiment: at least one sweep axis is required");
    auto require_axis = [&](const char* param) {
        for (const auto& axis : cfg.sweep)
            if (axis.param == param) return;
        result.errors.push_back(std::string("sweep: experiment '") + cfg.name +
                                "' needs an axis for " + param);
    };
    switch (cfg.kind) {
        case ExperimentKind::Fig4AssociationSweep:
            require_axis("lambda_s_per_km");
            require_axis("lambda_r_per_km2");
            break;
        case ExperimentKind::Fig5RatSelection:
            require_axis("lambda_s_per_km");
            require_axis("g0_db");
            break;
        case ExperimentKind::Fig6CoverageSweep: require_axis("lambda_r_per_km2"); break;
        case ExperimentKind::Fig7MmGain: require_axis("lambda_s_per_km"); break;
        default: break;
    }

    // Physical validation on the resolved parameters.
    cfg.params = human.to_si();
    cfg.window_radius = human.window_radius_m;
    for (const auto& e : cfg.params.validate()) result.errors.push_back("params: " + e);

    // Beamwidths beyond the commonly quoted spillover bound still run (the
    // geometry stays real up to tan(theta/2) = 1/(2 sqrt 2)) but deserve a
    // heads-up; past the real bound the spillover term is extrapolated.
    const double t = std::tan(0.5 * cfg.params.theta);
    if (t > 1.0 / (2.0 * std::sqrt(2.0))) {
        result.warnings.push_back(
            "theta exceeds the spillover feasibility bound tan(theta/2) <= 1/(2*sqrt(2)); "
            "the interference window is extrapolated");
    } else if (t > 0.125) {
        result.warnings.push_back(
            "theta exceeds the conservative spillover bound tan(theta/2) <= 1/8; "
            "results remain exact but the margin is thin");
    }

    if (!result.errors.empty()) return result;

    // Resolved echo in human units: the manifest payload.
    json echo;
    echo["experiment"] = cfg.name;
    echo["trials"] = cfg.trials;
    echo["seed"] = cfg.seed;
    echo["output_dir"] = cfg.output_dir;
    echo["gamma_db"] = cfg.gamma_db;
    echo["params"] = human.to_json();
    json jsweep = json::array();
    for (const auto& sa : cfg.sweep) jsweep.push_back({{"param", sa.param}, {"grid", sa.grid}});
    echo["sweep"] = jsweep;
    echo["no_sim"] = cfg.no_sim;
    echo["no_analytic"] = cfg.no_analytic;
    cfg.resolved_json = echo.dump(2);

    result.config = std::move(cfg);
    return result;
}

// ----------------------------------------------------------------- runs

struct Outputs {
    std::filesystem::path dir;
    std::vector<std::string> files;

    std::string path(const std::string& name) {
        files.push_back(name);
        return (dir / name).string();
    }
};

const SweepAxis* find_axis(const ExperimentConfig& cfg, const std::string& param) {
    for (const auto& axis : cfg.sweep)
        if (axis.param == param) return &axis;
    return nullptr;
}

SystemParams with_sweep_value(const SystemParams& base, const std::string& param, double value) {
    SystemParams p = base;
    if (param == "lambda_m_per_km2") p.lambda_m = value * 1e-6;
    else if (param == "lambda_r_per_km2") p.lambda_r = value * 1e-6;
    else if (param == "lambda_s_per_km") p.lambda_s = value * 1e-3;
    else if (param == "lambda_ou_per_km") p.lambda_ou = value * 1e-3;
    else if (param == "d_m_m") p.d_m = value;
    else if (param == "p_tx_macro_dbm") p.p_tx_macro = dbm_to_watts(value);
    else if (param == "p_tx_small_dbm") p.p_tx_small = dbm_to_watts(value);
    else if (param == "g0_db") p.g0 = db_to_linear(value);
    else if (param == "theta_deg") p.theta = deg_to_rad(value);
    else if (param == "h_m") p.h = value;
    else if (param == "nakagami_m") p.nakagami_m = static_cast<int>(value);
    else throw std::invalid_argument("unknown sweep parameter " + param);
    return p;
}

std::vector<double> to_linear_grid(const std::vector<double>& gamma_db) {
    std::vector<double> g;
    g.reserve(gamma_db.size());
    for (double v : gamma_db) g.push_back(db_to_linear(v));
    return g;
}

// Chart straight from the file just written: series defined by column name.
void chart_from_csv(const std::string& csv_path, const std::string& svg_path,
                    const ChartSpec& spec, const std::string& x_col,
                    const std::vector<std::string>& y_cols,
                    const std::string& group_col = "") {
    const CsvContent content = read_csv(csv_path);
    auto col_index = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < content.header.size(); ++i)
            if (content.header[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int xi = col_index(x_col);
    const int gi = group_col.empty() ? -1 : col_index(group_col);
    std::vector<ChartSeries> series;
    for (const auto& y_col : y_cols) {
        const int yi = col_index(y_col);
        if (yi < 0 || xi < 0) continue;
        // One series per group value (rows keep file order).
        std::vector<std::string> groups;
        if (gi < 0) groups.push_back("");
        else
            for (const auto& row : content.rows) {
                bool seen = false;
                for (const auto& g : groups)
                    if (g == row[gi]) seen = true;
                if (!seen) groups.push_back(row[gi]);
            }
        for (const auto& g : groups) {
            ChartSeries s;
            s.name = y_col + (g.empty() ? "" : (" [" + group_col + "=" + g + "]"));
            for (const auto& row : content.rows) {
                if (gi >= 0 && row[gi] != g) continue;
                if (row[xi].empty() || row[yi].empty()) continue;
                s.x.push_back(std::stod(row[xi]));
                s.y.push_back(std::stod(row[yi]));
            }
            if (!s.x.empty()) series.push_back(std::move(s));
        }
    }
    write_line_chart(svg_path, spec, series);
}

void run_fig2(const ExperimentConfig& cfg, Outputs& out) {
    CsvTable csv({"gamma_db", "analytic", "simulated", "std_error", "gap"});
    std::vector<double> analytic(cfg.gamma_db.size(), NAN);
    std::vector<double> simulated(cfg.gamma_db.size(), NAN);
    std::vector<double> se(cfg.gamma_db.size(), NAN);
    if (!cfg.no_analytic) {
        const CoverageCurve curve = overall_coverage(cfg.params, cfg.gamma_db);
        analytic = curve.overall;
    }
    if (!cfg.no_sim) {
        SimOptions opt;
        opt.window_radius = cfg.window_radius;
        const auto cov = coverage_estimate(cfg.params, opt, to_linear_grid(cfg.gamma_db),
                                           cfg.trials, cfg.seed);
        for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k) {
            simulated[k] = cov.overall[0][k].value;
            se[k] = cov.overall[0][k].std_error;
        }
    }
    for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k) {
        const bool both = !std::isnan(analytic[k]) && !std::isnan(simulated[k]);
        csv.add_row({CsvTable::number(cfg.gamma_db[k]),
                     std::isnan(analytic[k]) ? "" : CsvTable::number(analytic[k]),
                     std::isnan(simulated[k]) ? "" : CsvTable::number(simulated[k]),
                     std::isnan(se[k]) ? "" : CsvTable::number(se[k]),
                     both ? CsvTable::number(analytic[k] - simulated[k]) : ""});
    }
    const std::string csv_path = out.path(cfg.name + ".csv");
    csv.write(csv_path);
    chart_from_csv(csv_path, out.path(cfg.name + ".svg"),
                   {"Overall SINR coverage", "threshold (dB)", "coverage probability"},
                   "gamma_db", {"analytic", "simulated"});
}

void run_fig3(const ExperimentConfig& cfg, Outputs& out) {
    CsvTable csv({"gamma_db", "analytic_mm", "sim_full", "sim_dominant", "sim_noise_limited",
                  "se_full", "se_dominant", "se_noise_limited"});
    std::vector<std::string> ana(cfg.gamma_db.size(), "");
    if (!cfg.no_analytic) {
        const auto rep = tier_probabilities(cfg.params);
        const double pg = spillover_probability(cfg.params).p_g;
        for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k)
            ana[k] = CsvTable::number(
                sinr_coverage_mm(cfg.params, db_to_linear(cfg.gamma_db[k]), rep, pg));
    }
    std::vector<std::string> sim[3], sim_se[3];
    for (int m = 0; m < 3; ++m) {
        sim[m].assign(cfg.gamma_db.size(), "");
        sim_se[m].assign(cfg.gamma_db.size(), "");
    }
    if (!cfg.no_sim) {
        SimOptions opt;
        opt.window_radius = cfg.window_radius;
        const auto cov = coverage_estimate(cfg.params, opt, to_linear_grid(cfg.gamma_db),
                                           cfg.trials, cfg.seed);
        for (int m = 0; m < 3; ++m)
            for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k) {
                sim[m][k] = CsvTable::number(cov.mm_conditional[m][k].value);
                sim_se[m][k] = CsvTable::number(cov.mm_conditional[m][k].std_error);
            }
    }
    for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k) {
        csv.add_row({CsvTable::number(cfg.gamma_db[k]), ana[k], sim[0][k], sim[1][k], sim[2][k],
                     sim_se[0][k], sim_se[1][k], sim_se[2][k]});
    }
    const std::string csv_path = out.path(cfg.name + ".csv");
    csv.write(csv_path);
    chart_from_csv(csv_path, out.path(cfg.name + ".svg"),
                   {"mm-wave interference models", "threshold (dB)", "coverage probability"},
                   "gamma_db", {"analytic_mm", "sim_full", "sim_dominant", "sim_noise_limited"});
}

void run_fig4(const ExperimentConfig& cfg, Outputs& out) {
    CsvTable csv({"lambda_r_per_km2", "lambda_s_per_km", "p_ml", "p_mn", "p_sl", "p_sn",
                  "sim_p_ml", "sim_p_mn", "sim_p_sl", "sim_p_sn", "se_p_sl", "se_p_sn"});
    const auto& ls_axis = *find_axis(cfg, "lambda_s_per_km");
    const auto& lr_axis = *find_axis(cfg, "lambda_r_per_km2");
    for (double lr : lr_axis.grid) {
        for (double ls : ls_axis.grid) {
            SystemParams p = with_sweep_value(
                with_sweep_value(cfg.params, lr_axis.param, lr), ls_axis.param, ls);
            std::string a_ml, a_mn, a_sl, a_sn;
            if (!cfg.no_analytic) {
                const auto rep = tier_probabilities(p);
                a_ml = CsvTable::number(rep.p_ml);
                a_mn = CsvTable::number(rep.p_mn);
                a_sl = CsvTable::number(rep.p_sl);
                a_sn = CsvTable::number(rep.p_sn);
            }
            std::string s_ml, s_mn, s_sl, s_sn, e_sl, e_sn;
            if (!cfg.no_sim) {
                SimOptions opt;
                opt.window_radius = cfg.window_radius;
                const auto freq = association_frequencies(p, opt, cfg.trials, cfg.seed);
                const double sl = freq.freq[ClassId::SmallLosMu].value +
                                  freq.freq[ClassId::SmallLosMm].value;
                s_ml = CsvTable::number(freq.freq[ClassId::MacroLos].value);
                s_mn = CsvTable::number(freq.freq[ClassId::MacroNlos].value);
                s_sl = CsvTable::number(sl);
                s_sn = CsvTable::number(freq.freq[ClassId::SmallNlos].value);
                e_sl = CsvTable::number(std::sqrt(sl * (1.0 - sl) / cfg.trials));
                e_sn = CsvTable::number(freq.freq[ClassId::SmallNlos].std_error);
            }
            csv.add_row({CsvTable::number(lr), CsvTable::number(ls), a_ml, a_mn, a_sl, a_sn,
                         s_ml, s_mn, s_sl, s_sn, e_sl, e_sn});
        }
    }
    const std::string csv_path = out.path(cfg.name + ".csv");
    csv.write(csv_path);
    ChartSpec spec{"Association probabilities vs small-cell density", "SBS per km",
                   "probability"};
    spec.log_x = true;
    chart_from_csv(csv_path, out.path(cfg.name + ".svg"), spec, "lambda_s_per_km",
                   {"p_sl", "p_sn", "sim_p_sl", "sim_p_sn"}, "lambda_r_per_km2");
}

void run_fig5(const ExperimentConfig& cfg, Outputs& out) {
    CsvTable csv({"g0_db", "lambda_s_per_km", "p_m_analytic", "p_m_sim", "se"});
    const auto& ls_axis = *find_axis(cfg, "lambda_s_per_km");
    const auto& g0_axis = *find_axis(cfg, "g0_db");
    for (double g0 : g0_axis.grid) {
        for (double ls : ls_axis.grid) {
            SystemParams p = with_sweep_value(
                with_sweep_value(cfg.params, g0_axis.param, g0), ls_axis.param, ls);
            std::string ana;
            if (!cfg.no_analytic) ana = CsvTable::number(mmwave_selection_probability(p));
            std::string sim, se;
            if (!cfg.no_sim) {
                SimOptions opt;
                opt.window_radius = cfg.window_radius;
                const auto freq = association_frequencies(p, opt, cfg.trials, cfg.seed);
                const double mu = freq.freq[ClassId::SmallLosMu].value;
                const double mm = freq.freq[ClassId::SmallLosMm].value;
                if (mu + mm > 0.0) {
                    const double pm = mm / (mu + mm);
                    sim = CsvTable::number(pm);
                    se = CsvTable::number(
                        std::sqrt(pm * (1.0 - pm) / ((mu + mm) * cfg.trials)));
                }
            }
            csv.add_row({CsvTable::number(g0), CsvTable::number(ls), ana, sim, se});
        }
    }
    const std::string csv_path = out.path(cfg.name + ".csv");
    csv.write(csv_path);
    ChartSpec spec{"mm-wave band selection probability", "SBS per km", "P(mm-wave | LOS SBS)"};
    spec.log_x = true;
    chart_from_csv(csv_path, out.path(cfg.name + ".svg"), spec, "lambda_s_per_km",
                   {"p_m_analytic", "p_m_sim"}, "g0_db");
}

void run_fig6(const ExperimentConfig& cfg, Outputs& out) {
    CsvTable csv({"lambda_r_per_km2", "gamma_db", "analytic", "simulated", "std_error"});
    const auto& lr_axis = *find_axis(cfg, "lambda_r_per_km2");
    for (double lr : lr_axis.grid) {
        SystemParams p = with_sweep_value(cfg.params, lr_axis.param, lr);
        std::vector<std::string> ana(cfg.gamma_db.size(), "");
        if (!cfg.no_analytic) {
            const CoverageCurve curve = overall_coverage(p, cfg.gamma_db);
            for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k)
                ana[k] = CsvTable::number(curve.overall[k]);
        }
        std::vector<std::string> sim(cfg.gamma_db.size(), ""), se(cfg.gamma_db.size(), "");
        if (!cfg.no_sim) {
            SimOptions opt;
            opt.window_radius = cfg.window_radius;
            const auto cov =
                coverage_estimate(p, opt, to_linear_grid(cfg.gamma_db), cfg.trials, cfg.seed);
            for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k) {
                sim[k] = CsvTable::number(cov.overall[0][k].value);
                se[k] = CsvTable::number(cov.overall[0][k].std_error);
            }
        }
        for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k)
            csv.add_row({CsvTable::number(lr), CsvTable::number(cfg.gamma_db[k]), ana[k], sim[k],
                         se[k]});
    }
    const std::string csv_path = out.path(cfg.name + ".csv");
    csv.write(csv_path);
    chart_from_csv(csv_path, out.path(cfg.name + ".svg"),
                   {"Overall coverage vs road density", "threshold (dB)", "coverage probability"},
                   "gamma_db", {"analytic", "simulated"}, "lambda_r_per_km2");
}

void run_fig7(const ExperimentConfig& cfg, Outputs& out) {
    CsvTable csv({"lambda_s_per_km", "analytic_high", "analytic_low", "analytic_gain",
                  "sim_high", "sim_low", "sim_gain", "se_gain"});
    const auto& ls_axis = *find_axis(cfg, "lambda_s_per_km");
    const double g_eval = cfg.gamma_db.front();
    const std::vector<double> grid_db = {g_eval};
    const std::vector<double> grid_lin = {db_to_linear(g_eval)};
    for (double ls : ls_axis.grid) {
        SystemParams base = with_sweep_value(cfg.params, ls_axis.param, ls);
        SystemParams high = base;
        high.g0 = db_to_linear(30.0);
        SystemParams low = base;
        low.g0 = db_to_linear(20.0);
        std::string a_hi, a_lo, a_gain;
        if (!cfg.no_analytic) {
            const double hi = overall_coverage(high, grid_db).overall[0];
            const double lo = overall_coverage(low, grid_db).overall[0];
            a_hi = CsvTable::number(hi);
            a_lo = CsvTable::number(lo);
            a_gain = CsvTable::number(hi - lo);
        }
        std::string s_hi, s_lo, s_gain, s_se;
        if (!cfg.no_sim) {
            SimOptions opt;
            opt.window_radius = cfg.window_radius;
            const auto cov_hi = coverage_estimate(high, opt, grid_lin, cfg.trials, cfg.seed);
            const auto cov_lo = coverage_estimate(low, opt, grid_lin, cfg.trials, cfg.seed);
            const double hi = cov_hi.overall[0][0].value;
            const double lo = cov_lo.overall[0][0].value;
            s_hi = CsvTable::number(hi);
            s_lo = CsvTable::number(lo);
            s_gain = CsvTable::number(hi - lo);
            s_se = CsvTable::number(
                std::hypot(cov_hi.overall[0][0].std_error, cov_lo.overall[0][0].std_error));
        }
        csv.add_row({CsvTable::number(ls), a_hi, a_lo, a_gain, s_hi, s_lo, s_gain, s_se});
    }
    const std::string csv_path = out.path(cfg.name + ".csv");
    csv.write(csv_path);
    ChartSpec spec{"Coverage gain of the 30 dB beam over 20 dB", "SBS per km", "coverage gain"};
    spec.log_x = true;
    chart_from_csv(csv_path, out.path(cfg.name + ".svg"), spec, "lambda_s_per_km",
                   {"analytic_gain", "sim_gain"});
}

void run_custom(const ExperimentConfig& cfg, Outputs& out) {
    CsvTable csv({"param", "value", "gamma_db", "analytic", "simulated", "std_error"});
    const auto& axis = cfg.sweep.front();
    for (double v : axis.grid) {
        SystemParams p = with_sweep_value(cfg.params, axis.param, v);
        std::vector<std::string> ana(cfg.gamma_db.size(), "");
        if (!cfg.no_analytic) {
            const CoverageCurve curve = overall_coverage(p, cfg.gamma_db);
            for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k)
                ana[k] = CsvTable::number(curve.overall[k]);
        }
        std::vector<std::string> sim(cfg.gamma_db.size(), ""), se(cfg.gamma_db.size(), "");
        if (!cfg.no_sim) {
            SimOptions opt;
            opt.window_radius = cfg.window_radius;
            const auto cov =
                coverage_estimate(p, opt, to_linear_grid(cfg.gamma_db), cfg.trials, cfg.seed);
            for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k) {
                sim[k] = CsvTable::number(cov.overall[0][k].value);
                se[k] = CsvTable::number(cov.overall[0][k].std_error);
            }
        }
        for (std::size_t k = 0; k < cfg.gamma_db.size(); ++k)
            csv.add_row({axis.param, CsvTable::number(v), CsvTable::number(cfg.gamma_db[k]),
                         ana[k], sim[k], se[k]});
    }
    const std::string csv_path = out.path(cfg.name + ".csv");
    csv.write(csv_path);
    chart_from_csv(csv_path, out.path(cfg.name + ".svg"),
                   {"Overall coverage sweep", "threshold (dB)", "coverage probability"},
                   "gamma_db", {"analytic", "simulated"}, "value");
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "fig2_validation", "fig3_interference_models", "fig4_association_sweep",
        "fig5_rat_selection", "fig6_coverage_sweep", "fig7_mm_gain", "custom"};
    return names;
}

std::optional<ExperimentKind> experiment_from_name(const std::string& name) {
    const auto& names = experiment_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<ExperimentKind>(i);
    return std::nullopt;
}

ValidationResult validate_config_text(const std::string& json_text) {
    json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded()) {
        ValidationResult r;
        r.errors.push_back("top level: not valid JSON");
        return r;
    }
    return validate_manifest_or_config(root);
}

ValidationResult validate_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        ValidationResult r;
        r.errors.push_back("cannot open " + path);
        return r;
    }
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return validate_config_text(text);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    Outputs out;
    out.dir = cfg.output_dir;
    std::filesystem::create_directories(out.dir);

    switch (cfg.kind) {
        case ExperimentKind::Fig2Validation: run_fig2(cfg, out); break;
        case ExperimentKind::Fig3InterferenceModels: run_fig3(cfg, out); break;
        case ExperimentKind::Fig4AssociationSweep: run_fig4(cfg, out); break;
        case ExperimentKind::Fig5RatSelection: run_fig5(cfg, out); break;
        case ExperimentKind::Fig6CoverageSweep: run_fig6(cfg, out); break;
        case ExperimentKind::Fig7MmGain: run_fig7(cfg, out); break;
        case ExperimentKind::Custom: run_custom(cfg, out); break;
    }

    RunResult result;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest;
    manifest["tool"] = "roadcov";
    manifest["format"] = 1;
    manifest["config"] = json::parse(cfg.resolved_json);
    manifest["outputs"] = out.files;
    manifest["wall_time_s"] = result.wall_time_s;
    const std::string manifest_path = (out.dir / (cfg.name + "_manifest.json")).string();
    std::ofstream mf(manifest_path, std::ios::binary);
    mf << manifest.dump(2) << "\n";
    result.manifest_path = manifest_path;
    result.outputs = out.files;
    return result;
}

} // namespace roadcov

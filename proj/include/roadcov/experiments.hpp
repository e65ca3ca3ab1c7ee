#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roadcov/params.hpp"

namespace roadcov {

enum class ExperimentKind {
    Fig2Validation,
    Fig3InterferenceModels,
    Fig4AssociationSweep,
    Fig5RatSelection,
    Fig6CoverageSweep,
    Fig7MmGain,
    Custom,
};

const std::vector<std::string>& experiment_names();
std::optional<ExperimentKind> experiment_from_name(const std::string& name);

struct SweepAxis {
    std::string param;
    std::vector<double> grid;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Fig2Validation;
    std::string name = "fig2_validation";
    SystemParams params;
    double window_radius = 0.0; // 0 = automatic
    long trials = 10000;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    std::vector<double> gamma_db;
    std::vector<SweepAxis> sweep; // custom experiment only
    bool no_sim = false;
    bool no_analytic = false;
    std::string resolved_json; // full human-unit echo (manifest payload)
};

struct ValidationResult {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    std::optional<ExperimentConfig> config;

    bool ok() const { return errors.empty(); }
};

// Full parse of a configuration (or manifest) document: every problem is
// collected rather than stopping at the first, and unknown keys are errors.
ValidationResult validate_config_text(const std::string& json_text);
ValidationResult validate_config_file(const std::string& path);

struct RunResult {
    std::vector<std::string> outputs; // files written, relative to output_dir
    std::string manifest_path;
    double wall_time_s = 0.0;
};

// Executes the experiment: CSV table, SVG chart rendered from the CSV just
// written, and a JSON manifest that can be re-run to reproduce the outputs.
RunResult run_experiment(const ExperimentConfig& config);

} // namespace roadcov

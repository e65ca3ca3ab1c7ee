#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "roadcov/experiments.hpp"

using namespace roadcov;

namespace {

int do_validate(const std::string& path) {
    const auto result = validate_config_file(path);
    for (const auto& w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (!result.ok()) {
        for (const auto& e : result.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
        return 1;
    }
    std::printf("%s\n", result.config->resolved_json.c_str());
    return 0;
}

int do_run(const std::string& path, long trials_override, long seed_override,
           const std::string& out_override, bool no_sim, bool no_analytic) {
    std::ifstream f(path);
    if (!f) {
        std::fprintf(stderr, "error: cannot open %s\n", path.c_str());
        return 1;
    }
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    auto doc = nlohmann::ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        std::fprintf(stderr, "error: top level: not valid JSON\n");
        return 1;
    }
    // Manifests embed the config they ran from.
    nlohmann::ordered_json config =
        doc.is_object() && doc.contains("config") && doc.contains("tool") ? doc["config"] : doc;
    // Command-line overrides become part of the config before resolution,
    // so the manifest echo always matches the effective run.
    if (trials_override > 0) config["trials"] = trials_override;
    if (seed_override >= 0) config["seed"] = seed_override;
    if (!out_override.empty()) config["output_dir"] = out_override;
    if (no_sim) config["no_sim"] = true;
    if (no_analytic) config["no_analytic"] = true;

    const auto result = validate_config_text(config.dump());
    for (const auto& w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (!result.ok()) {
        for (const auto& e : result.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
        return 1;
    }
    try {
        const ExperimentConfig& cfg = *result.config;
        const auto run = run_experiment(cfg);
        std::printf("experiment: %s\n", cfg.name.c_str());
        for (const auto& out : run.outputs)
            std::printf("wrote %s/%s\n", cfg.output_dir.c_str(), out.c_str());
        std::printf("wrote %s\n", run.manifest_path.c_str());
        std::printf("wall time: %.1f s\n", run.wall_time_s);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: experiment %s aborted: %s\n",
                     result.config->name.c_str(), e.what());
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage evaluation for road-deployed multi-band small-cell networks"};
    app.require_subcommand(1);

    std::string config_path;
    long trials = -1;
    long seed = -1;
    std::string out_dir;
    bool no_sim = false, no_analytic = false;

    auto* run = app.add_subcommand("run", "run an experiment from a config or manifest");
    run->add_option("config", config_path, "JSON config or manifest path")->required();
    run->add_option("--trials", trials, "override the trial count");
    run->add_option("--seed", seed, "override the random seed");
    run->add_option("--out", out_dir, "override the output directory");
    run->add_flag("--no-sim", no_sim, "skip the Monte Carlo columns");
    run->add_flag("--no-analytic", no_analytic, "skip the analytic columns");

    auto* validate = app.add_subcommand("validate", "parse a config and report every problem");
    validate->add_option("config", config_path, "JSON config or manifest path")->required();

    auto* list = app.add_subcommand("list-experiments", "print the known experiment names");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& n : experiment_names()) std::printf("%s\n", n.c_str());
        return 0;
    }
    if (validate->parsed()) return do_validate(config_path);
    return do_run(config_path, trials, seed, out_dir, no_sim, no_analytic);
}

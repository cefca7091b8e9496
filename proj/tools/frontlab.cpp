// frontlab - reaction-diffusion front laboratory
//
// Runs the experiment catalog and ad-hoc configs: full PDE solves, reduced
// collective-variable models, PDE-vs-reduced comparisons, pinning threshold
// searches, parameter sweeps and defect reconstruction. Outputs are CSV
// files plus a summary.txt per run.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "frontlab/catalog.hpp"
#include "frontlab/config.hpp"
#include "frontlab/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw frontlab::ValidationError({"cannot open config file: " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

frontlab::ExperimentConfig load_config(const std::string& path) {
    const frontlab::ConfigResult result = frontlab::parse_config(read_file(path));
    if (!result.ok()) throw frontlab::ValidationError(result.violations);
    return *result.config;
}

frontlab::ExperimentConfig load_catalog(const std::string& name) {
    const frontlab::CatalogEntry* entry = frontlab::find_catalog_entry(name);
    if (!entry) throw frontlab::ValidationError({"no catalog entry named " + name});
    const frontlab::ConfigResult result = frontlab::parse_config(std::string(entry->text));
    if (!result.ok()) throw frontlab::ValidationError(result.violations);
    return *result.config;
}

void require_mode(const frontlab::ExperimentConfig& cfg, frontlab::RunMode mode,
                  const std::string& command) {
    if (cfg.mode != mode)
        throw frontlab::ValidationError({command + " requires mode = " +
                                         std::string(frontlab::run_mode_name(mode)) + ", config has mode = " +
                                         frontlab::run_mode_name(cfg.mode)});
}

int execute(const frontlab::ExperimentConfig& cfg, const frontlab::RunOverrides& ov) {
    const frontlab::ExperimentConfig final_cfg = frontlab::apply_overrides(cfg, ov);
    const frontlab::RunArtifacts art = frontlab::run_and_write(final_cfg);
    for (const auto& [key, value] : art.summary) std::cout << key << " = " << value << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frontlab: fronts of the heterogeneous bistable reaction-diffusion equation"};
    app.require_subcommand(1);

    std::string config_path, catalog_name;
    frontlab::RunOverrides ov;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--out", ov.out_dir, "Output directory (default out/<name>)");
        cmd->add_option("--n", ov.n, "Override the grid cell count");
        cmd->add_option("--tmax", ov.t_max, "Override the final time");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "Run an experiment config");
    cmd_run->add_option("config", config_path, "Config file")->required();
    add_overrides(cmd_run);

    CLI::App* cmd_validate = app.add_subcommand("validate", "Validate a config without running");
    cmd_validate->add_option("config", config_path, "Config file")->required();

    CLI::App* cmd_catalog = app.add_subcommand("catalog", "Work with the experiment catalog");
    cmd_catalog->require_subcommand(1);
    CLI::App* cmd_cat_list = cmd_catalog->add_subcommand("list", "List catalog entries");
    CLI::App* cmd_cat_show = cmd_catalog->add_subcommand("show", "Print a catalog config");
    cmd_cat_show->add_option("name", catalog_name, "Entry name")->required();
    CLI::App* cmd_cat_run = cmd_catalog->add_subcommand("run", "Run a catalog entry");
    cmd_cat_run->add_option("name", catalog_name, "Entry name")->required();
    add_overrides(cmd_cat_run);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run a parameter sweep config");
    cmd_sweep->add_option("config", config_path, "Config file (mode = sweep)")->required();
    add_overrides(cmd_sweep);

    CLI::App* cmd_threshold =
        app.add_subcommand("threshold", "Run a pinning-threshold bisection config");
    cmd_threshold->add_option("config", config_path, "Config file (mode = pinning-threshold)")
        ->required();
    add_overrides(cmd_threshold);

    CLI::App* cmd_invert = app.add_subcommand("invert", "Run a defect-reconstruction config");
    cmd_invert->add_option("config", config_path, "Config file (mode = invert)")->required();
    add_overrides(cmd_invert);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return execute(load_config(config_path), ov);

        if (cmd_validate->parsed()) {
            const frontlab::ConfigResult result = frontlab::parse_config(read_file(config_path));
            if (result.ok()) {
                std::cout << "ok\n";
                return kExitOk;
            }
            for (const auto& v : result.violations) std::cerr << "violation: " << v << "\n";
            return kExitValidation;
        }

        if (cmd_cat_list->parsed()) {
            for (const auto& e : frontlab::catalog()) std::cout << e.name << "\n";
            return kExitOk;
        }
        if (cmd_cat_show->parsed()) {
            const frontlab::CatalogEntry* entry = frontlab::find_catalog_entry(catalog_name);
            if (!entry) throw frontlab::ValidationError({"no catalog entry named " + catalog_name});
            std::cout << entry->text;
            return kExitOk;
        }
        if (cmd_cat_run->parsed()) return execute(load_catalog(catalog_name), ov);

        if (cmd_sweep->parsed()) {
            const auto cfg = load_config(config_path);
            require_mode(cfg, frontlab::RunMode::Sweep, "sweep");
            return execute(cfg, ov);
        }
        if (cmd_threshold->parsed()) {
            const auto cfg = load_config(config_path);
            require_mode(cfg, frontlab::RunMode::Threshold, "threshold");
            return execute(cfg, ov);
        }
        if (cmd_invert->parsed()) {
            const auto cfg = load_config(config_path);
            require_mode(cfg, frontlab::RunMode::Invert, "invert");
            return execute(cfg, ov);
        }
    } catch (const frontlab::ValidationError& e) {
        for (const auto& v : e.violations) std::cerr << "violation: " << v << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

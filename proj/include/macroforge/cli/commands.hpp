#pragma once

#include <string>
#include <vector>

#include "macroforge/cli/flat_config.hpp"
#include "macroforge/exp/experiment.hpp"

namespace macroforge::cli {

/// Maps directory resolution order: [maze] maps_dir, $MACROFORGE_MAPS_DIR,
/// then "maps".
std::string resolve_maps_dir(const FlatConfig& cfg);

/// Output root: $MACROFORGE_OUT or "runs".
std::string default_out_root();

exp::EnvCatalog catalog_from(const FlatConfig& cfg);
ga::GAConfig ga_config_from(const FlatConfig& cfg);
learn::TrainConfig train_config_from(const FlatConfig& cfg);
exp::ExperimentConfig experiment_config_from(const FlatConfig& cfg);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Runs the generation stage; writes manifest.json, macro.json and
/// generations.csv into out_dir.
int cmd_generate(const FlatConfig& cfg, const std::string& out_dir);

/// Runs one experiment; writes manifest.json, report.json, per-run curve
/// CSVs under curves/, and transfer_reduction.csv for transferability runs.
int cmd_experiment(const FlatConfig& cfg, const std::string& out_dir);

/// Renders stored reports into text tables, plot-data CSVs and optional SVG
/// charts.
int cmd_report(const std::vector<std::string>& report_paths, const std::string& out_dir,
               bool svg);

struct SolveOptions {
    std::string map_path;
    std::string task = "dense";
    std::string macro; // comma-joined action names; empty -> primitives only
    double gamma = 0.99;
    double tol = 1e-10;
    std::string out_dir; // empty -> print only
};

/// Exact value iteration on a tabularized maze, for debugging macros.
int cmd_solve(const SolveOptions& options);

} // namespace macroforge::cli

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "macroforge/cli/commands.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/version.hpp"

namespace {

using macroforge::cli::FlatConfig;

struct GaOverrides {
    std::optional<int> k, q, q_plus, q_star, jobs;
    std::optional<std::uint64_t> seed;
};

FlatConfig load_config(const std::string& path, const GaOverrides& over) {
    FlatConfig cfg = path.empty() ? FlatConfig() : FlatConfig::load(path);
    if (over.k) cfg.set("ga.k", std::to_string(*over.k));
    if (over.q) cfg.set("ga.q", std::to_string(*over.q));
    if (over.q_plus) cfg.set("ga.q_plus", std::to_string(*over.q_plus));
    if (over.q_star) cfg.set("ga.q_star", std::to_string(*over.q_star));
    if (over.seed) cfg.set("ga.seed", std::to_string(*over.seed));
    if (over.jobs) cfg.set("experiment.jobs", std::to_string(*over.jobs));
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"macroforge: macro-action generation and utilization toolkit"};
    app.set_version_flag("--version", macroforge::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    GaOverrides over;

    auto* generate = app.add_subcommand("generate", "run the macro generation stage");
    generate->add_option("--config", config_path, "config file");
    generate->add_option("--out", out_dir, "output directory");
    generate->add_option("--seed", over.seed, "master seed override");
    generate->add_option("--jobs", over.jobs, "parallel fitness evaluations");
    generate->add_option("--k", over.k, "total fitness evaluations");
    generate->add_option("--q", over.q, "retained population size");
    generate->add_option("--q-plus", over.q_plus, "append mutations per generation");
    generate->add_option("--q-star", over.q_star, "alteration mutations per generation");

    auto* experiment = app.add_subcommand("experiment", "run an evaluation protocol");
    experiment->add_option("--config", config_path, "config file")->required();
    experiment->add_option("--out", out_dir, "output directory");
    experiment->add_option("--seed", over.seed, "generation master seed override");
    experiment->add_option("--jobs", over.jobs, "parallel runs");

    std::vector<std::string> report_paths;
    bool svg = false;
    auto* report = app.add_subcommand("report", "render stored reports");
    report->add_option("reports", report_paths, "report.json files")->required();
    report->add_option("--out", out_dir, "output directory");
    report->add_flag("--svg", svg, "also emit SVG line charts");

    macroforge::cli::SolveOptions solve_options;
    auto* solve = app.add_subcommand("solve", "exact solvers on a map + macro");
    solve->add_option("--map", solve_options.map_path, "map file")->required();
    solve->add_option("--task", solve_options.task, "maze task tag");
    solve->add_option("--macro", solve_options.macro, "comma-joined action names");
    solve->add_option("--gamma", solve_options.gamma, "discount factor");
    solve->add_option("--tol", solve_options.tol, "convergence tolerance");
    solve->add_option("--out", solve_options.out_dir, "write values.csv here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (out_dir.empty()) {
            const auto* sub = app.get_subcommands().front();
            out_dir = macroforge::cli::default_out_root() + "/" + sub->get_name();
        }
        if (generate->parsed())
            return macroforge::cli::cmd_generate(load_config(config_path, over), out_dir);
        if (experiment->parsed())
            return macroforge::cli::cmd_experiment(load_config(config_path, over), out_dir);
        if (report->parsed())
            return macroforge::cli::cmd_report(report_paths, out_dir, svg);
        if (solve->parsed()) return macroforge::cli::cmd_solve(solve_options);
    } catch (const macroforge::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

#include "macroforge/cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "macroforge/cli/macro_file.hpp"
#include "macroforge/cli/manifest.hpp"
#include "macroforge/cli/render.hpp"
#include "macroforge/core/solvers.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/version.hpp"

namespace macroforge::cli {

namespace fs = std::filesystem;

std::string resolve_maps_dir(const FlatConfig& cfg) {
    if (cfg.has("maze.maps_dir")) return cfg.get_required("maze.maps_dir");
    if (const char* env = std::getenv("MACROFORGE_MAPS_DIR"); env && *env) return env;
    return "maps";
}

std::string default_out_root() {
    if (const char* env = std::getenv("MACROFORGE_OUT"); env && *env) return env;
    return "runs";
}

exp::EnvCatalog catalog_from(const FlatConfig& cfg) {
    env::RewardParams rewards;
    rewards.living_penalty = cfg.get_double("maze.living_penalty", rewards.living_penalty);
    rewards.goal_reward = cfg.get_double("maze.goal_reward", rewards.goal_reward);
    if (rewards.living_penalty > 0.0)
        throw ConfigError("maze.living_penalty must be <= 0");
    if (rewards.goal_reward <= 0.0) throw ConfigError("maze.goal_reward must be > 0");

    env::RiskCorridorSpec risk;
    risk.track_length = cfg.get_int("risk.track_length", risk.track_length);
    if (cfg.has("risk.obstacles")) risk.obstacle_cells = cfg.get_int_list("risk.obstacles");
    risk.crash_penalty = cfg.get_double("risk.crash_penalty", risk.crash_penalty);
    risk.pass_reward = cfg.get_double("risk.pass_reward", risk.pass_reward);
    risk.step_limit = cfg.get_int("risk.step_limit", risk.step_limit);

    const int step_limit = cfg.get_int("maze.step_limit", 0);
    return exp::EnvCatalog(resolve_maps_dir(cfg), rewards, risk, step_limit);
}

ga::GAConfig ga_config_from(const FlatConfig& cfg) {
    ga::GAConfig ga;
    ga.k = cfg.get_int("ga.k", ga.k);
    ga.q = cfg.get_int("ga.q", ga.q);
    ga.q_plus = cfg.get_int("ga.q_plus", ga.q_plus);
    ga.q_star = cfg.get_int("ga.q_star", ga.q_star);
    ga.fitness_budget_steps = cfg.get_i64("ga.fitness_budget_steps", ga.fitness_budget_steps);
    ga.fitness_floor = cfg.get_double("ga.fitness_floor", ga.fitness_floor);
    ga.master_seed = cfg.get_u64("ga.seed", ga.master_seed);
    ga.jobs = cfg.get_int("experiment.jobs", ga.jobs);
    ga.validate();
    return ga;
}

learn::TrainConfig train_config_from(const FlatConfig& cfg) {
    learn::TrainConfig train;
    train.budget_steps = cfg.get_i64("utilization.budget_steps", train.budget_steps);
    train.alpha = cfg.get_double("train.alpha", train.alpha);
    train.actor_alpha = cfg.get_double("train.actor_alpha", train.actor_alpha);
    train.critic_alpha = cfg.get_double("train.critic_alpha", train.critic_alpha);
    train.discount = cfg.get_double("train.discount", train.discount);
    train.eps_start = cfg.get_double("train.eps_start", train.eps_start);
    train.eps_end = cfg.get_double("train.eps_end", train.eps_end);
    train.temperature = cfg.get_double("train.temperature", train.temperature);
    train.validate();
    return train;
}

exp::ExperimentConfig experiment_config_from(const FlatConfig& cfg) {
    exp::ExperimentConfig out;
    out.mode = exp::mode_from_string(cfg.get("experiment.mode", "validation"));
    out.gen_method = learn::learner_from_string(cfg.get("generation.method", "q_learning"));
    out.gen_env = cfg.get("generation.env", "dense");
    out.ga = ga_config_from(cfg);
    out.util_method =
        learn::learner_from_string(cfg.get("utilization.method", cfg.get("generation.method", "q_learning")));
    if (cfg.has("utilization.envs"))
        out.util_envs = cfg.get_list("utilization.envs");
    else
        out.util_envs = {out.gen_env};
    out.train = train_config_from(cfg);
    if (cfg.has("experiment.seeds")) out.seeds = cfg.get_u64_list("experiment.seeds");
    out.repeat_baseline = cfg.get_bool("experiment.repeat_baseline", false);
    out.eval_episodes = cfg.get_int("experiment.eval_episodes", out.eval_episodes);
    out.buckets = cfg.get_int("experiment.buckets", out.buckets);
    out.jobs = cfg.get_int("experiment.jobs", out.jobs);
    out.maze_curiosity = cfg.get_double("train.curiosity", out.maze_curiosity);
    if (out.maze_curiosity < 0.0) throw ConfigError("train.curiosity must be >= 0");

    const bool has_inline = cfg.has("experiment.macro");
    const bool has_file = cfg.has("experiment.macro_file");
    if (has_inline && has_file)
        throw ConfigError("set either experiment.macro or experiment.macro_file, not both");
    if (has_inline || has_file) {
        std::string names_text;
        if (has_file) {
            const MacroFile file = load_macro_file(cfg.get_required("experiment.macro_file"));
            std::ostringstream joined;
            for (std::size_t i = 0; i < file.actions.size(); ++i) {
                if (i) joined << ',';
                joined << file.actions[i];
            }
            names_text = joined.str();
        } else {
            names_text = cfg.get_required("experiment.macro");
        }
        const std::vector<std::string> names = out.gen_env == "risk_corridor"
                                                   ? env::risk_action_names()
                                                   : env::maze_action_names();
        out.macro_override = core::MacroAction::parse(names_text, names);
    }
    out.validate();
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

namespace {

RunManifest make_manifest(const std::string& command, const FlatConfig& cfg,
                          std::uint64_t master_seed,
                          const std::vector<std::string>& map_files) {
    RunManifest manifest;
    manifest.command = command;
    manifest.version = kVersion;
    manifest.timestamp = now_iso8601_utc();
    manifest.master_seed = master_seed;
    manifest.config = cfg.entries();
    for (const std::string& path : map_files)
        manifest.map_hashes[path] = content_hash_file(path);
    return manifest;
}

} // namespace

int cmd_generate(const FlatConfig& cfg, const std::string& out_dir) {
    const exp::EnvCatalog catalog = catalog_from(cfg);
    const ga::GAConfig ga_cfg = ga_config_from(cfg);
    const auto method = learn::learner_from_string(cfg.get("generation.method", "q_learning"));
    const std::string env_tag = cfg.get("generation.env", "dense");

    learn::TrainConfig base = train_config_from(cfg);
    base.curiosity_scale =
        catalog.curiosity_for(env_tag, cfg.get_double("train.curiosity", 0.0));
    const core::EnvFactory factory = catalog.factory(env_tag); // loads maps

    write_file(out_dir + "/manifest.json",
               manifest_to_json(make_manifest("generate", cfg, ga_cfg.master_seed,
                                              catalog.loaded_map_files())));

    const ga::GAResult result = ga::generate_macro(ga_cfg, factory, method, base);
    const std::vector<std::string> names = catalog.action_names(env_tag);

    MacroFile file;
    file.environment = env_tag;
    file.method = learn::to_string(method);
    for (int a : result.best.actions()) file.actions.push_back(names[static_cast<std::size_t>(a)]);
    file.fitness = result.best_fitness;
    file.ga = ga_cfg;
    write_file(out_dir + "/macro.json", macro_file_to_json(file));
    write_file(out_dir + "/generations.csv", ga::generation_log_to_csv(result.log, names));

    std::cout << "best macro: (" << result.best.to_string(names) << ") fitness "
              << result.best_fitness << " after " << result.evaluations_used
              << " evaluations\n";
    return 0;
}

int cmd_experiment(const FlatConfig& cfg, const std::string& out_dir) {
    const exp::EnvCatalog catalog = catalog_from(cfg);
    const exp::ExperimentConfig exp_cfg = experiment_config_from(cfg);
    for (const std::string& tag : exp_cfg.util_envs) (void)catalog.factory(tag);
    (void)catalog.factory(exp_cfg.gen_env); // ensure maps are loaded for hashing

    write_file(out_dir + "/manifest.json",
               manifest_to_json(make_manifest("experiment", cfg, exp_cfg.ga.master_seed,
                                              catalog.loaded_map_files())));

    const exp::Report report = exp::run_experiment(exp_cfg, catalog);
    write_file(out_dir + "/report.json", exp::report_to_json(report));
    for (const auto& arm : report.arms)
        for (const auto& curve : arm.curves)
            write_file(out_dir + "/curves/" + arm.env_tag + "_" + arm.arm + "_seed" +
                           std::to_string(curve.seed) + ".csv",
                       learn::curve_to_csv(curve));
    if (!report.transfer.empty())
        write_file(out_dir + "/transfer_reduction.csv", transfer_table_csv(report));

    std::cout << render_report_tables(report);
    return 0;
}

int cmd_report(const std::vector<std::string>& report_paths, const std::string& out_dir,
               bool svg) {
    RunManifest manifest;
    manifest.command = "report";
    manifest.version = kVersion;
    manifest.timestamp = now_iso8601_utc();
    for (std::size_t i = 0; i < report_paths.size(); ++i)
        manifest.config["report.input" + std::to_string(i)] = report_paths[i];
    manifest.config["report.svg"] = svg ? "true" : "false";
    write_file(out_dir + "/manifest.json", manifest_to_json(manifest));

    for (const std::string& path : report_paths) {
        const exp::Report report = exp::report_from_json(read_file(path));
        const std::string stem = fs::path(path).stem().string();

        const std::string tables = render_report_tables(report);
        std::cout << tables;
        write_file(out_dir + "/" + stem + "_tables.txt", tables);
        for (const auto& [name, content] : render_plot_data(report))
            write_file(out_dir + "/" + stem + "_" + name, content);
        if (!report.transfer.empty())
            write_file(out_dir + "/" + stem + "_reduction.csv", transfer_table_csv(report));
        if (svg) {
            std::vector<std::string> envs;
            for (const auto& arm : report.arms)
                if (std::find(envs.begin(), envs.end(), arm.env_tag) == envs.end())
                    envs.push_back(arm.env_tag);
            for (const std::string& env_tag : envs)
                write_file(out_dir + "/" + stem + "_chart_" + env_tag + ".svg",
                           render_svg(report, env_tag));
        }
    }
    return 0;
}

int cmd_solve(const SolveOptions& options) {
    auto spec = std::make_shared<const env::MazeSpec>(env::load_map_file(options.map_path));
    const env::MazeTask task = env::maze_task_from_string(options.task);
    env::MazeEnv model(spec, task, env::RewardParams{});
    const std::vector<std::string> names = env::maze_action_names();

    core::ActionSet set = core::ActionSet::primitives_only(env::kMazeActionCount);
    if (!options.macro.empty())
        set = core::ActionSet::with_macro(env::kMazeActionCount,
                                          core::MacroAction::parse(options.macro, names));

    const core::ExplicitMDP mdp = core::build_explicit_mdp(model, set);
    const core::ValueTable values = core::value_iteration(mdp, options.gamma, options.tol);

    const int spawn = model.reset(0);
    std::cout << "states: " << mdp.state_count() << "  actions: " << mdp.action_count()
              << "\n";
    std::cout << "value at spawn state " << spawn << ": " << values.values[static_cast<std::size_t>(spawn)]
              << "\n";
    double vmax = values.values[0];
    for (double v : values.values) vmax = std::max(vmax, v);
    std::cout << "max state value: " << vmax << "\n";

    if (!options.out_dir.empty()) {
        RunManifest manifest;
        manifest.command = "solve";
        manifest.version = kVersion;
        manifest.timestamp = now_iso8601_utc();
        manifest.config["solve.map"] = options.map_path;
        manifest.config["solve.task"] = options.task;
        manifest.config["solve.macro"] = options.macro;
        manifest.config["solve.gamma"] = std::to_string(options.gamma);
        manifest.config["solve.tol"] = std::to_string(options.tol);
        manifest.map_hashes[options.map_path] = content_hash_file(options.map_path);
        write_file(options.out_dir + "/manifest.json", manifest_to_json(manifest));

        std::ostringstream csv;
        csv << "state,value\n";
        for (std::size_t s = 0; s < values.values.size(); ++s)
            csv << s << ',' << values.values[s] << '\n';
        write_file(options.out_dir + "/values.csv", csv.str());
    }
    return 0;
}

} // namespace macroforge::cli

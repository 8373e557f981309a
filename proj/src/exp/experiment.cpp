#include "macroforge/exp/experiment.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "macroforge/errors.hpp"
#include "macroforge/learn/actor_critic.hpp"
#include "macroforge/learn/q_learning.hpp"
#include "parallel.hpp"

namespace macroforge::exp {

using ordered_json = nlohmann::ordered_json;

namespace {
constexpr std::uint64_t kEvalStream = 0xE7A1;
constexpr std::uint64_t kRepeatStream = 0x4E9;
constexpr const char* kReportSchema = "macroforge-report/1";
constexpr const char* kSharedMap = "dense_sparse.map";
constexpr const char* kExtendedMap = "super_sparse.map";
} // namespace

const char* to_string(Mode mode) {
    switch (mode) {
    case Mode::validation: return "validation";
    case Mode::reusability: return "reusability";
    case Mode::transferability: return "transferability";
    }
    return "?";
}

Mode mode_from_string(const std::string& name) {
    if (name == "validation") return Mode::validation;
    if (name == "reusability") return Mode::reusability;
    if (name == "transferability") return Mode::transferability;
    throw ConfigError("unknown experiment mode '" + name + "'");
}

EnvCatalog::EnvCatalog(std::string maps_dir, env::RewardParams maze_rewards,
                       env::RiskCorridorSpec risk_spec, int step_limit_override)
    : maps_dir_(std::move(maps_dir)), maze_rewards_(maze_rewards),
      risk_spec_(std::move(risk_spec)) {
    risk_spec_.validate();
    shared_path_ = maps_dir_ + "/" + kSharedMap;
    extended_path_ = maps_dir_ + "/" + kExtendedMap;
    if (step_limit_override < 0)
        throw ConfigError("step limit override must be non-negative");
    step_limit_override_ = step_limit_override;
}

bool EnvCatalog::is_maze(const std::string& tag) const { return env::is_maze_task(tag); }

std::shared_ptr<const env::MazeSpec> EnvCatalog::spec_for(const std::string& tag) const {
    const bool extended = tag == "super_sparse";
    std::lock_guard<std::mutex> lock(load_mutex_);
    auto& slot = extended ? extended_spec_ : shared_spec_;
    if (!slot) {
        env::MazeSpec spec = env::load_map_file(extended ? extended_path_ : shared_path_);
        if (step_limit_override_ > 0) spec.step_limit = step_limit_override_;
        slot = std::make_shared<const env::MazeSpec>(std::move(spec));
    }
    return slot;
}

core::EnvFactory EnvCatalog::factory(const std::string& tag) const {
    if (tag == "risk_corridor") {
        const env::RiskCorridorSpec spec = risk_spec_;
        return [spec] { return std::make_unique<env::RiskCorridorEnv>(spec); };
    }
    if (!is_maze(tag)) throw ConfigError("unknown environment tag '" + tag + "'");
    const env::MazeTask task = env::maze_task_from_string(tag);
    auto spec = spec_for(tag);
    const env::RewardParams rewards = maze_rewards_;
    // Construct once up front so configuration errors surface immediately.
    env::MazeEnv probe(spec, task, rewards);
    return [spec, task, rewards] { return std::make_unique<env::MazeEnv>(spec, task, rewards); };
}

int EnvCatalog::primitive_count(const std::string& tag) const {
    return tag == "risk_corridor" ? env::kRiskActionCount : env::kMazeActionCount;
}

std::vector<std::string> EnvCatalog::action_names(const std::string& tag) const {
    if (tag == "risk_corridor") return env::risk_action_names();
    if (!is_maze(tag)) throw ConfigError("unknown environment tag '" + tag + "'");
    return env::maze_action_names();
}

double EnvCatalog::curiosity_for(const std::string& tag, double maze_beta) const {
    return is_maze(tag) ? maze_beta : 0.0;
}

std::shared_ptr<const env::MazeSpec> EnvCatalog::maze_spec(const std::string& tag) const {
    if (!is_maze(tag)) throw ConfigError("'" + tag + "' is not a maze task");
    return spec_for(tag);
}

std::vector<std::string> EnvCatalog::loaded_map_files() const {
    std::vector<std::string> files;
    if (shared_spec_) files.push_back(shared_path_);
    if (extended_spec_) files.push_back(extended_path_);
    return files;
}

void ExperimentConfig::validate() const {
    ga.validate();
    train.validate();
    if (seeds.size() < 2)
        throw ConfigError("experiments need at least two seeds for confidence intervals");
    if (util_envs.empty()) throw ConfigError("no utilization environments configured");
    if (eval_episodes < 1) throw ConfigError("eval_episodes must be positive");
    if (buckets < 1) throw ConfigError("buckets must be positive");
    if (jobs < 1) throw ConfigError("jobs must be positive");

    switch (mode) {
    case Mode::validation:
        if (util_method != gen_method)
            throw ConfigError("validation requires the utilization method to equal the "
                              "generation method");
        if (util_envs.size() != 1 || util_envs[0] != gen_env)
            throw ConfigError("validation requires the utilization environment to equal "
                              "the generation environment");
        break;
    case Mode::reusability:
        if (util_method == gen_method)
            throw ConfigError("reusability requires a different utilization method");
        if (util_envs.size() != 1 || util_envs[0] != gen_env)
            throw ConfigError("reusability keeps the environment fixed");
        break;
    case Mode::transferability:
        if (util_method != gen_method)
            throw ConfigError("transferability keeps the method fixed");
        for (const std::string& e : util_envs)
            if (!env::is_maze_task(e))
                throw ConfigError("transferability utilization settings must be maze "
                                  "tasks, got '" + e + "'");
        break;
    }
}

double reduction_pct(double vanilla_steps, double macro_steps) {
    return (macro_steps - vanilla_steps) / vanilla_steps * 100.0;
}

const ArmReport& find_arm(const Report& report, const std::string& env_tag,
                          const std::string& arm) {
    for (const ArmReport& a : report.arms)
        if (a.env_tag == env_tag && a.arm == arm) return a;
    throw InvalidArgumentError("report has no arm '" + arm + "' for '" + env_tag + "'");
}

namespace {

struct SingleRun {
    learn::LearningCurve curve;
    learn::EvalStats eval;
};

SingleRun run_single(learn::LearnerKind kind, const core::EnvFactory& factory,
                     const core::ActionSet& set, const learn::TrainConfig& cfg,
                     int eval_episodes) {
    SingleRun out;
    const std::uint64_t eval_seed = Rng::derive(cfg.seed, kEvalStream);
    if (kind == learn::LearnerKind::q_learning) {
        auto trained = learn::train_q_learning(factory, set, cfg);
        out.curve = std::move(trained.curve);
        out.eval = learn::evaluate_policy(factory, set, learn::greedy_policy_fn(trained.table),
                                          eval_episodes, eval_seed);
    } else {
        auto trained = learn::train_actor_critic(factory, set, cfg);
        out.curve = std::move(trained.curve);
        out.eval = learn::evaluate_policy(factory, set,
                                          learn::argmax_policy_fn(trained.tables),
                                          eval_episodes, eval_seed);
    }
    return out;
}

struct ArmSpec {
    std::string arm;
    std::string env_tag;
    core::ActionSet set;
    std::string macro_names;
};

/// Trains every (arm, seed) run, fanning out across jobs, and assembles the
/// per-arm reports in configuration order.
std::vector<ArmReport> run_arms(const ExperimentConfig& cfg, const EnvCatalog& catalog,
                                const std::vector<ArmSpec>& specs) {
    const int n_arms = static_cast<int>(specs.size());
    const int n_seeds = static_cast<int>(cfg.seeds.size());
    std::vector<SingleRun> runs(static_cast<std::size_t>(n_arms * n_seeds));

    // map loading is lazy and not thread-safe; touch every environment once
    // before fanning out
    for (const ArmSpec& spec : specs) (void)catalog.factory(spec.env_tag);

    detail::parallel_for(n_arms * n_seeds, cfg.jobs, [&](int i) {
        const ArmSpec& spec = specs[static_cast<std::size_t>(i / n_seeds)];
        learn::TrainConfig run_cfg = cfg.train;
        run_cfg.seed = cfg.seeds[static_cast<std::size_t>(i % n_seeds)];
        run_cfg.curiosity_scale = catalog.curiosity_for(spec.env_tag, cfg.maze_curiosity);
        runs[static_cast<std::size_t>(i)] =
            run_single(cfg.util_method, catalog.factory(spec.env_tag), spec.set, run_cfg,
                       cfg.eval_episodes);
    });

    std::vector<ArmReport> arms;
    arms.reserve(specs.size());
    for (int a = 0; a < n_arms; ++a) {
        const ArmSpec& spec = specs[static_cast<std::size_t>(a)];
        ArmReport arm;
        arm.arm = spec.arm;
        arm.env_tag = spec.env_tag;
        arm.method = learn::to_string(cfg.util_method);
        arm.macro_names = spec.macro_names;
        double sum_return = 0.0, sum_steps = 0.0, sum_success = 0.0;
        for (int s = 0; s < n_seeds; ++s) {
            SingleRun& run = runs[static_cast<std::size_t>(a * n_seeds + s)];
            run.curve.action_set = spec.arm;
            arm.auc_per_seed.push_back(curve_auc(run.curve));
            arm.eval_per_seed.push_back(run.eval);
            sum_return += run.eval.mean_return;
            sum_steps += run.eval.mean_steps_to_goal;
            sum_success += run.eval.success_rate;
            arm.curves.push_back(std::move(run.curve));
        }
        arm.aggregated = aggregate_curves(arm.curves, cfg.buckets, cfg.train.budget_steps);
        arm.auc_aggregate = auc(arm.aggregated.timestep, arm.aggregated.mean);
        arm.eval_mean = learn::EvalStats{sum_return / n_seeds, sum_steps / n_seeds,
                                         sum_success / n_seeds};
        arms.push_back(std::move(arm));
    }
    return arms;
}

/// Resolves the utilized macro: either the override or a fresh GA run on the
/// generation environment.
core::MacroAction resolve_macro(const ExperimentConfig& cfg, const EnvCatalog& catalog,
                                Report& report) {
    const std::vector<std::string> names = catalog.action_names(cfg.gen_env);
    if (cfg.macro_override) {
        const core::MacroAction& m = *cfg.macro_override;
        // validates primitive range
        core::ActionSet::with_macro(catalog.primitive_count(cfg.gen_env), m);
        report.macro_names = m.to_string(names);
        return m;
    }
    learn::TrainConfig base = cfg.train;
    base.curiosity_scale = catalog.curiosity_for(cfg.gen_env, cfg.maze_curiosity);
    ga::GAConfig ga_cfg = cfg.ga;
    ga_cfg.jobs = cfg.jobs;
    const ga::GAResult result =
        ga::generate_macro(ga_cfg, catalog.factory(cfg.gen_env), cfg.gen_method, base);
    report.generated = true;
    report.generation_log = result.log;
    report.macro_fitness = result.best_fitness;
    report.macro_names = result.best.to_string(names);
    return result.best;
}

Report make_report_shell(const ExperimentConfig& cfg, const EnvCatalog& catalog) {
    Report report;
    report.mode = to_string(cfg.mode);
    report.gen_method = learn::to_string(cfg.gen_method);
    report.gen_env = cfg.gen_env;
    report.util_method = learn::to_string(cfg.util_method);
    report.seeds = cfg.seeds;
    report.budget_steps = cfg.train.budget_steps;
    report.eval_episodes = cfg.eval_episodes;
    report.gen_action_names = catalog.action_names(cfg.gen_env);
    return report;
}

/// The best same-length action-repeat macro, scored with the fitness
/// procedure under one shared seed; ties prefer the lowest primitive.
core::MacroAction best_repeat_macro(const ExperimentConfig& cfg, const EnvCatalog& catalog,
                                    int length) {
    const int n = catalog.primitive_count(cfg.gen_env);
    learn::TrainConfig fit_cfg = cfg.train;
    fit_cfg.budget_steps = cfg.ga.fitness_budget_steps;
    fit_cfg.curiosity_scale = catalog.curiosity_for(cfg.gen_env, cfg.maze_curiosity);
    fit_cfg.seed = Rng::derive(cfg.ga.master_seed, kRepeatStream);

    (void)catalog.factory(cfg.gen_env); // load the map before the fan-out
    std::vector<double> scores(static_cast<std::size_t>(n));
    detail::parallel_for(n, cfg.jobs, [&](int a) {
        const core::MacroAction repeat(std::vector<int>(static_cast<std::size_t>(length), a));
        scores[static_cast<std::size_t>(a)] =
            ga::fitness(catalog.factory(cfg.gen_env), cfg.util_method, repeat, fit_cfg,
                        cfg.ga.fitness_floor);
    });
    int best = 0;
    for (int a = 1; a < n; ++a)
        if (scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(best)])
            best = a;
    return core::MacroAction(std::vector<int>(static_cast<std::size_t>(length), best));
}

} // namespace

Report run_validation(const ExperimentConfig& cfg, const EnvCatalog& catalog) {
    cfg.validate();
    if (cfg.mode != Mode::validation) throw ConfigError("config mode is not validation");
    Report report = make_report_shell(cfg, catalog);
    const core::MacroAction macro = resolve_macro(cfg, catalog, report);
    const int n = catalog.primitive_count(cfg.gen_env);
    const std::vector<std::string> names = catalog.action_names(cfg.gen_env);

    std::vector<ArmSpec> specs;
    specs.push_back({"vanilla", cfg.gen_env, core::ActionSet::primitives_only(n), ""});
    specs.push_back({"macro", cfg.gen_env, core::ActionSet::with_macro(n, macro),
                     macro.to_string(names)});
    if (cfg.repeat_baseline) {
        const core::MacroAction repeat = best_repeat_macro(cfg, catalog, macro.length());
        specs.push_back({"repeat", cfg.gen_env, core::ActionSet::with_macro(n, repeat),
                         repeat.to_string(names)});
    }
    report.arms = run_arms(cfg, catalog, specs);
    return report;
}

Report run_reusability(const ExperimentConfig& cfg, const EnvCatalog& catalog) {
    cfg.validate();
    if (cfg.mode != Mode::reusability) throw ConfigError("config mode is not reusability");
    Report report = make_report_shell(cfg, catalog);
    const core::MacroAction macro = resolve_macro(cfg, catalog, report);
    const int n = catalog.primitive_count(cfg.gen_env);
    const std::vector<std::string> names = catalog.action_names(cfg.gen_env);

    std::vector<ArmSpec> specs;
    specs.push_back({"vanilla", cfg.gen_env, core::ActionSet::primitives_only(n), ""});
    specs.push_back({"macro", cfg.gen_env, core::ActionSet::with_macro(n, macro),
                     macro.to_string(names)});
    report.arms = run_arms(cfg, catalog, specs);
    return report;
}

Report run_transferability(const ExperimentConfig& cfg, const EnvCatalog& catalog) {
    cfg.validate();
    if (cfg.mode != Mode::transferability)
        throw ConfigError("config mode is not transferability");
    Report report = make_report_shell(cfg, catalog);
    const core::MacroAction macro = resolve_macro(cfg, catalog, report);

    std::vector<ArmSpec> specs;
    for (const std::string& env_tag : cfg.util_envs) {
        const int n = catalog.primitive_count(env_tag);
        const std::vector<std::string> names = catalog.action_names(env_tag);
        specs.push_back({"vanilla", env_tag, core::ActionSet::primitives_only(n), ""});
        specs.push_back({"macro", env_tag, core::ActionSet::with_macro(n, macro),
                         macro.to_string(names)});
    }
    report.arms = run_arms(cfg, catalog, specs);

    for (const std::string& env_tag : cfg.util_envs) {
        const ArmReport& vanilla = find_arm(report, env_tag, "vanilla");
        const ArmReport& with_macro = find_arm(report, env_tag, "macro");
        TransferRow row;
        row.task = env_tag;
        row.vanilla_mean_steps = vanilla.eval_mean.mean_steps_to_goal;
        row.macro_mean_steps = with_macro.eval_mean.mean_steps_to_goal;
        row.reduction_pct = reduction_pct(row.vanilla_mean_steps, row.macro_mean_steps);
        report.transfer.push_back(row);
    }
    return report;
}

Report run_experiment(const ExperimentConfig& cfg, const EnvCatalog& catalog) {
    switch (cfg.mode) {
    case Mode::validation: return run_validation(cfg, catalog);
    case Mode::reusability: return run_reusability(cfg, catalog);
    case Mode::transferability: return run_transferability(cfg, catalog);
    }
    throw ConfigError("invalid experiment mode");
}

namespace {

ordered_json eval_to_json(const learn::EvalStats& e) {
    return ordered_json{{"mean_return", e.mean_return},
                        {"mean_steps_to_goal", e.mean_steps_to_goal},
                        {"success_rate", e.success_rate}};
}

learn::EvalStats eval_from_json(const ordered_json& j) {
    return learn::EvalStats{j.at("mean_return").get<double>(),
                            j.at("mean_steps_to_goal").get<double>(),
                            j.at("success_rate").get<double>()};
}

} // namespace

std::string report_to_json(const Report& report) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["mode"] = report.mode;
    j["gen_method"] = report.gen_method;
    j["gen_env"] = report.gen_env;
    j["util_method"] = report.util_method;
    j["seeds"] = report.seeds;
    j["budget_steps"] = report.budget_steps;
    j["eval_episodes"] = report.eval_episodes;
    j["macro"] = report.macro_names;
    j["macro_fitness"] = report.macro_fitness;
    j["generated"] = report.generated;

    ordered_json log = ordered_json::array();
    for (const ga::GenerationRow& row : report.generation_log.rows) {
        ordered_json r;
        r["generation"] = row.generation;
        r["avg_fitness"] = row.avg_fitness;
        if (row.improvement_pct)
            r["improvement_pct"] = *row.improvement_pct;
        else
            r["improvement_pct"] = nullptr;
        r["best_macro"] = row.best_macro.to_string(report.gen_action_names);
        r["best_fitness"] = row.best_fitness;
        log.push_back(std::move(r));
    }
    j["generation_log"] = std::move(log);
    j["gen_action_names"] = report.gen_action_names;

    ordered_json arms = ordered_json::array();
    for (const ArmReport& arm : report.arms) {
        ordered_json a;
        a["arm"] = arm.arm;
        a["env"] = arm.env_tag;
        a["method"] = arm.method;
        a["macro"] = arm.macro_names;
        a["auc"] = arm.auc_aggregate;
        a["auc_per_seed"] = arm.auc_per_seed;
        ordered_json evals = ordered_json::array();
        for (const learn::EvalStats& e : arm.eval_per_seed) evals.push_back(eval_to_json(e));
        a["eval_per_seed"] = std::move(evals);
        a["eval_mean"] = eval_to_json(arm.eval_mean);
        a["curve"] = ordered_json{{"timestep", arm.aggregated.timestep},
                                  {"mean", arm.aggregated.mean},
                                  {"ci_lo", arm.aggregated.ci_lo},
                                  {"ci_hi", arm.aggregated.ci_hi}};
        arms.push_back(std::move(a));
    }
    j["arms"] = std::move(arms);

    ordered_json transfer = ordered_json::array();
    for (const TransferRow& row : report.transfer)
        transfer.push_back(ordered_json{{"task", row.task},
                                        {"vanilla_mean_steps", row.vanilla_mean_steps},
                                        {"macro_mean_steps", row.macro_mean_steps},
                                        {"reduction_pct", row.reduction_pct}});
    j["transfer"] = std::move(transfer);
    return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.contains("schema") || j.at("schema").get<std::string>() != kReportSchema)
        throw ConfigError("report schema mismatch: expected " + std::string(kReportSchema));

    Report report;
    report.mode = j.at("mode").get<std::string>();
    report.gen_method = j.at("gen_method").get<std::string>();
    report.gen_env = j.at("gen_env").get<std::string>();
    report.util_method = j.at("util_method").get<std::string>();
    report.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    report.budget_steps = j.at("budget_steps").get<std::int64_t>();
    report.eval_episodes = j.at("eval_episodes").get<int>();
    report.macro_names = j.at("macro").get<std::string>();
    report.macro_fitness = j.at("macro_fitness").get<double>();
    report.generated = j.at("generated").get<bool>();
    report.gen_action_names = j.at("gen_action_names").get<std::vector<std::string>>();
    for (const auto& r : j.at("generation_log")) {
        ga::GenerationRow row;
        row.generation = r.at("generation").get<int>();
        row.avg_fitness = r.at("avg_fitness").get<double>();
        if (!r.at("improvement_pct").is_null())
            row.improvement_pct = r.at("improvement_pct").get<double>();
        row.best_macro =
            core::MacroAction::parse(r.at("best_macro").get<std::string>(),
                                     report.gen_action_names);
        row.best_fitness = r.at("best_fitness").get<double>();
        report.generation_log.rows.push_back(std::move(row));
    }
    for (const auto& a : j.at("arms")) {
        ArmReport arm;
        arm.arm = a.at("arm").get<std::string>();
        arm.env_tag = a.at("env").get<std::string>();
        arm.method = a.at("method").get<std::string>();
        arm.macro_names = a.at("macro").get<std::string>();
        arm.auc_aggregate = a.at("auc").get<double>();
        arm.auc_per_seed = a.at("auc_per_seed").get<std::vector<double>>();
        for (const auto& e : a.at("eval_per_seed")) arm.eval_per_seed.push_back(eval_from_json(e));
        arm.eval_mean = eval_from_json(a.at("eval_mean"));
        arm.aggregated.timestep = a.at("curve").at("timestep").get<std::vector<std::int64_t>>();
        arm.aggregated.mean = a.at("curve").at("mean").get<std::vector<double>>();
        arm.aggregated.ci_lo = a.at("curve").at("ci_lo").get<std::vector<double>>();
        arm.aggregated.ci_hi = a.at("curve").at("ci_hi").get<std::vector<double>>();
        report.arms.push_back(std::move(arm));
    }
    for (const auto& r : j.at("transfer")) {
        TransferRow row;
        row.task = r.at("task").get<std::string>();
        row.vanilla_mean_steps = r.at("vanilla_mean_steps").get<double>();
        row.macro_mean_steps = r.at("macro_mean_steps").get<double>();
        row.reduction_pct = r.at("reduction_pct").get<double>();
        report.transfer.push_back(std::move(row));
    }
    return report;
}

} // namespace macroforge::exp

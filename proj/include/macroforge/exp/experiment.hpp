#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "macroforge/core/action.hpp"
#include "macroforge/core/env.hpp"
#include "macroforge/env/maze.hpp"
#include "macroforge/env/risk_corridor.hpp"
#include "macroforge/exp/aggregate.hpp"
#include "macroforge/ga/ga.hpp"
#include "macroforge/learn/evaluate.hpp"

namespace macroforge::exp {

enum class Mode { validation, reusability, transferability };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

/// Resolves environment tags (the four maze tasks plus "risk_corridor") to
/// factories. Map files load once and are shared by every environment
/// instance created from them.
class EnvCatalog {
public:
    EnvCatalog(std::string maps_dir, env::RewardParams maze_rewards,
               env::RiskCorridorSpec risk_spec, int step_limit_override = 0);

    bool is_maze(const std::string& tag) const;
    core::EnvFactory factory(const std::string& tag) const;
    int primitive_count(const std::string& tag) const;
    std::vector<std::string> action_names(const std::string& tag) const;
    /// Exploration bonus scale for the tag (maze tasks get the maze beta).
    double curiosity_for(const std::string& tag, double maze_beta) const;

    std::shared_ptr<const env::MazeSpec> maze_spec(const std::string& tag) const;
    const std::string& maps_dir() const { return maps_dir_; }
    /// Paths of the map files actually loaded, for manifest hashing.
    std::vector<std::string> loaded_map_files() const;

private:
    std::shared_ptr<const env::MazeSpec> spec_for(const std::string& tag) const;

    std::string maps_dir_;
    env::RewardParams maze_rewards_;
    env::RiskCorridorSpec risk_spec_;
    int step_limit_override_ = 0;
    // loaded on first use, guarded for concurrent factories
    mutable std::mutex load_mutex_;
    mutable std::shared_ptr<const env::MazeSpec> shared_spec_;  // dense/sparse/very_sparse
    mutable std::shared_ptr<const env::MazeSpec> extended_spec_; // super_sparse
    std::string shared_path_;
    std::string extended_path_;
};

/// Full description of one experiment. Mode invariants are enforced by
/// validate(): validation keeps method and environment; reusability swaps
/// the method; transferability swaps the reward setting.
struct ExperimentConfig {
    Mode mode = Mode::validation;

    learn::LearnerKind gen_method = learn::LearnerKind::q_learning;
    std::string gen_env = "dense";
    ga::GAConfig ga;

    learn::LearnerKind util_method = learn::LearnerKind::q_learning;
    std::vector<std::string> util_envs = {"dense"};
    learn::TrainConfig train;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

    std::optional<core::MacroAction> macro_override;
    bool repeat_baseline = false; // extra action-repeat arm (validation)
    int eval_episodes = 100;
    int buckets = 100;
    int jobs = 1;
    // Count-bonus beta applied on maze tasks (the risk corridor always runs
    // with 0). Off by default: with discount 0.99 and a terminating goal of
    // +1, any perpetual bonus stream above (1-gamma) outbids reaching the
    // goal and greedy policies farm novelty instead.
    double maze_curiosity = 0.0;

    void validate() const;
};

/// One trained arm: per-seed curves, the aggregated band, AUC summaries and
/// final-policy evaluations.
struct ArmReport {
    std::string arm;      // "vanilla" | "macro" | "repeat"
    std::string env_tag;
    std::string method;
    std::string macro_names; // empty for vanilla
    std::vector<learn::LearningCurve> curves;
    AggregatedCurve aggregated;
    double auc_aggregate = 0.0;
    std::vector<double> auc_per_seed;
    std::vector<learn::EvalStats> eval_per_seed;
    learn::EvalStats eval_mean;
};

/// One row of the steps-to-goal reduction table; negative improves.
struct TransferRow {
    std::string task;
    double vanilla_mean_steps = 0.0;
    double macro_mean_steps = 0.0;
    double reduction_pct = 0.0;
};

struct Report {
    std::string mode;
    std::string gen_method;
    std::string gen_env;
    std::string util_method;
    std::vector<std::uint64_t> seeds; // audited: shared by all arms
    std::int64_t budget_steps = 0;
    int eval_episodes = 0;
    std::string macro_names;
    double macro_fitness = 0.0;
    bool generated = false; // GA ran (no macro override)
    ga::GenerationLog generation_log;
    std::vector<std::string> gen_action_names;
    std::vector<ArmReport> arms;
    std::vector<TransferRow> transfer;
};

double reduction_pct(double vanilla_steps, double macro_steps);

const ArmReport& find_arm(const Report& report, const std::string& env_tag,
                          const std::string& arm);

Report run_validation(const ExperimentConfig& cfg, const EnvCatalog& catalog);
Report run_reusability(const ExperimentConfig& cfg, const EnvCatalog& catalog);
Report run_transferability(const ExperimentConfig& cfg, const EnvCatalog& catalog);
/// Dispatches on cfg.mode.
Report run_experiment(const ExperimentConfig& cfg, const EnvCatalog& catalog);

/// Stable JSON round-trip for reports (schema documented in the repo).
std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);

} // namespace macroforge::exp

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "macroforge/core/action.hpp"
#include "macroforge/core/env.hpp"
#include "macroforge/learn/curve.hpp"
#include "macroforge/learn/train_config.hpp"
#include "macroforge/rng.hpp"

namespace macroforge::ga {

/// Parameters of the macro generation stage. k counts fitness evaluations in
/// total; q is the retained population size; q_plus and q_star are the
/// append and alteration mutants per generation (the candidate generation
/// size is their sum).
struct GAConfig {
    int k = 50;
    int q = 8;
    int q_plus = 5;
    int q_star = 3;
    std::int64_t fitness_budget_steps = 20'000;
    double fitness_floor = -1e9;
    std::uint64_t master_seed = 0;
    int jobs = 1;

    int generation_size() const { return q_plus + q_star; }
    void validate() const;
};

/// One evaluated macro. insertion_index is a global monotone counter; ties
/// in fitness resolve toward the smaller index (older wins).
struct FitnessRecord {
    core::MacroAction macro;
    double fitness = 0.0;
    int generation_born = 0;
    std::int64_t insertion_index = 0;
};

/// Retained and candidate populations plus the evaluation counter.
struct Population {
    std::vector<FitnessRecord> retained;   // sorted: fitness desc, insertion asc
    std::vector<FitnessRecord> candidates; // current generation, insertion order
    int evaluations_used = 0;
};

struct GenerationRow {
    int generation = 0;
    double avg_fitness = 0.0;
    std::optional<double> improvement_pct; // vs. previous generation; empty for row 0
    core::MacroAction best_macro;          // best so far (elitist, non-decreasing)
    double best_fitness = 0.0;
};

struct GenerationLog {
    std::vector<GenerationRow> rows;
};

/// CSV mirroring the per-generation fitness tables:
/// `generation,avg_fitness,improvement_pct,best_macro`.
std::string generation_log_to_csv(const GenerationLog& log,
                                  const std::vector<std::string>& action_names);

/// g random macros of length exactly two, elements i.i.d. uniform over the
/// primitives; duplicates permitted.
std::vector<core::MacroAction> init_population(int primitive_count, int g, Rng& rng);

/// Mean of the last (up to) 100 episode returns; empty -> the floor.
double fitness_from_returns(const std::vector<learn::CurvePoint>& points, double floor);

/// Trains the given learner over A ∪ {m} for the configured budget and
/// scores the macro by the trailing-episode mean.
double fitness(const core::EnvFactory& factory, learn::LearnerKind learner,
               const core::MacroAction& macro, const learn::TrainConfig& train_cfg,
               double fitness_floor);

/// The q highest-fitness records of retained ∪ candidates; ties keep the
/// older record. Stored fitness values are never re-evaluated.
std::vector<FitnessRecord> select_top(const std::vector<FitnessRecord>& retained,
                                      const std::vector<FitnessRecord>& candidates, int q);

/// Appends one uniformly random primitive; the input is unchanged.
core::MacroAction append_op(int primitive_count, const core::MacroAction& macro, Rng& rng);

/// Replaces the first element with a uniformly random primitive; the suffix
/// is preserved.
core::MacroAction alter_op(int primitive_count, const core::MacroAction& macro, Rng& rng);

struct GAResult {
    core::MacroAction best;
    double best_fitness = 0.0;
    GenerationLog log;
    std::vector<FitnessRecord> evaluated; // every evaluation, insertion order
    int evaluations_used = 0;
};

/// The four-phase generation stage: initialize length-2 candidates, evaluate
/// fitness until k evaluations are spent (breaking mid-generation when the
/// budget runs out, with the partial generation still entering selection),
/// keep the top q, and mutate survivors sampled uniformly without
/// replacement into the next generation. Evaluation j always uses the seed
/// substream derive(master_seed, j), so results do not depend on `jobs`.
GAResult generate_macro(const GAConfig& cfg, const core::EnvFactory& factory,
                        learn::LearnerKind learner, const learn::TrainConfig& base_train);

} // namespace macroforge::ga

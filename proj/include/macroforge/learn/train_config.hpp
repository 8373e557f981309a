#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace macroforge::learn {

enum class LearnerKind { q_learning, actor_critic };

const char* to_string(LearnerKind kind);
LearnerKind learner_from_string(const std::string& name);

/// Shared training knobs. Budgets count primitive timesteps, including the
/// steps taken inside macros; training stops at the first episode boundary
/// at or after the budget.
struct TrainConfig {
    std::int64_t budget_steps = 320'000;
    double alpha = 0.1;        // Q-learning learning rate
    double actor_alpha = 0.05; // actor-critic preference rate
    double critic_alpha = 0.1; // actor-critic value rate
    double discount = 0.99;
    double eps_start = 0.1;    // epsilon-greedy, linear decay over the budget
    double eps_end = 0.01;
    double temperature = 1.0;  // actor-critic softmax temperature
    double curiosity_scale = 0.0; // count-bonus beta
    std::uint64_t seed = 0;

    void validate() const;
    double epsilon_at(std::int64_t steps) const;
};

/// Seed substream for episode k of a training run. Exposed so recorded
/// curves and decision logs can be re-simulated exactly.
std::uint64_t episode_seed(std::uint64_t run_seed, std::int64_t episode);

/// One learner decision as consumed by the update rules. `reward` is the
/// full learning reward for the decision (extrinsic sum plus any exploration
/// bonus); `bootstrap` is false only on natural termination. `primitive_steps`
/// records how many environment steps the decision consumed — the update
/// rules never read it, which is exactly the between-macro discounting rule.
struct DecisionRecord {
    int state = 0;
    int action_index = 0;
    double reward = 0.0;
    int next_state = 0;
    bool bootstrap = true;
    int primitive_steps = 1;
    bool episode_over = false; // last decision of its episode
};

using DecisionSink = std::function<void(const DecisionRecord&)>;

} // namespace macroforge::learn

#pragma once

#include "macroforge/core/action.hpp"
#include "macroforge/core/env.hpp"
#include "macroforge/core/explicit_mdp.hpp"
#include "macroforge/learn/actor_critic.hpp"
#include "macroforge/learn/q_learning.hpp"
#include "macroforge/rng.hpp"

namespace macroforge::learn {

struct EvalStats {
    double mean_return = 0.0;
    double mean_steps_to_goal = 0.0; // failures contribute the step limit
    double success_rate = 0.0;
};

/// Maps a state to an action-set index; the Rng serves stochastic policies.
using PolicyFn = std::function<int(int state, Rng& rng)>;

PolicyFn greedy_policy_fn(const QTable& table);
PolicyFn argmax_policy_fn(const ActorCriticTables& tables);
PolicyFn stochastic_policy_fn(const core::TabularPolicy& policy);

/// Runs the fixed policy with no learning for the given number of episodes.
/// Episode k uses the seed substream derive(seed, k).
EvalStats evaluate_policy(const core::EnvFactory& factory,
                          const core::ActionSet& action_set, const PolicyFn& policy,
                          int episodes, std::uint64_t seed);

} // namespace macroforge::learn

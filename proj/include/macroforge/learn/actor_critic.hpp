#pragma once

#include "macroforge/core/action.hpp"
#include "macroforge/core/env.hpp"
#include "macroforge/learn/curve.hpp"
#include "macroforge/learn/train_config.hpp"

namespace macroforge::learn {

/// Tabular actor-critic state: action preferences (logits) and state values.
struct ActorCriticTables {
    ActorCriticTables(int n_states, int n_actions)
        : n_states(n_states), n_actions(n_actions),
          preferences(static_cast<std::size_t>(n_states) *
                          static_cast<std::size_t>(n_actions),
                      0.0),
          state_values(static_cast<std::size_t>(n_states), 0.0) {}

    int n_states;
    int n_actions;
    std::vector<double> preferences;
    std::vector<double> state_values;

    double& pref(int s, int a) {
        return preferences[static_cast<std::size_t>(s) * n_actions + a];
    }
    double pref(int s, int a) const {
        return preferences[static_cast<std::size_t>(s) * n_actions + a];
    }
    /// Softmax policy row at the given temperature.
    std::vector<double> policy_row(int s, double temperature) const;
    /// Highest-preference index, ties toward the lowest index.
    int argmax(int s) const;
};

/// One-step TD update applied per decision: delta = R + gamma * V(s') - V(s)
/// (bootstrap dropped on termination); critic moves by critic_alpha * delta;
/// the chosen action's preference rises by actor_alpha * delta * (1 - pi),
/// all others fall by actor_alpha * delta * pi. Preferences are clamped to a
/// finite bound, never silently non-finite.
void apply_ac_update(ActorCriticTables& tables, const DecisionRecord& rec,
                     const TrainConfig& cfg);

struct ACTrainResult {
    ActorCriticTables tables;
    LearningCurve curve;
    std::int64_t steps_used = 0;
};

/// Softmax-policy training over the (possibly macro-augmented) action set.
ACTrainResult train_actor_critic(const core::EnvFactory& factory,
                                 const core::ActionSet& action_set,
                                 const TrainConfig& cfg, const DecisionSink& sink = {});

} // namespace macroforge::learn

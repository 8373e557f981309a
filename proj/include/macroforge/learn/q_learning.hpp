#pragma once

#include "macroforge/core/action.hpp"
#include "macroforge/core/env.hpp"
#include "macroforge/learn/curve.hpp"
#include "macroforge/learn/train_config.hpp"

namespace macroforge::learn {

/// Action values per (state, action-set index).
struct QTable {
    QTable(int n_states, int n_actions)
        : n_states(n_states), n_actions(n_actions),
          values(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions),
                 0.0) {}

    int n_states;
    int n_actions;
    std::vector<double> values;

    double& at(int s, int a) { return values[static_cast<std::size_t>(s) * n_actions + a]; }
    double at(int s, int a) const {
        return values[static_cast<std::size_t>(s) * n_actions + a];
    }
    /// Greedy index with ties broken toward the lowest index.
    int greedy(int s) const;
    double max_value(int s) const;
};

/// The one-step backup used for every decision, primitive or macro:
/// Q(s,i) += alpha * (R + gamma * max_j Q(s',j) - Q(s,i)), with the
/// bootstrap term dropped on natural termination. The record's macro length
/// never enters.
void apply_q_update(QTable& table, const DecisionRecord& rec, const TrainConfig& cfg);

struct QTrainResult {
    QTable table;
    LearningCurve curve;
    std::int64_t steps_used = 0;
};

/// Epsilon-greedy training over the (possibly macro-augmented) action set.
QTrainResult train_q_learning(const core::EnvFactory& factory,
                              const core::ActionSet& action_set, const TrainConfig& cfg,
                              const DecisionSink& sink = {});

} // namespace macroforge::learn

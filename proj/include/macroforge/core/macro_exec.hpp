#pragma once

#include <functional>

#include "macroforge/core/action.hpp"
#include "macroforge/core/env.hpp"

namespace macroforge::core {

/// Result of running a macro open-loop on a live environment.
struct MacroOutcome {
    double cumulative_reward = 0.0; // undiscounted sum of per-primitive rewards
    int next_state = 0;
    int steps_used = 0;             // primitive steps actually taken (1..length)
    bool terminated = false;        // episode ended (goal or step limit) mid/at end
};

/// Called once per primitive step inside execute_macro. Lets trainers watch
/// primitive-level transitions (e.g. visit counting) without the learner
/// ever making intra-macro decisions.
using StepObserver = std::function<void(const StepResult&)>;

/// Executes the macro's primitives in order with no intermediate decision.
/// Stops immediately when the episode ends; steps_used then reflects the
/// actual count. Throws IllegalCallError when the episode is already over.
MacroOutcome execute_macro(Env& env, const MacroAction& macro,
                           const StepObserver& observer = {});

/// The between-macro backup: reward_sum + discount * next_value. The macro's
/// length never enters; discounting applies once per macro decision.
double macro_backup(double reward_sum, double discount, double next_value);

} // namespace macroforge::core

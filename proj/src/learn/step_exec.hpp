#pragma once

// Internal helper shared by the trainers and the evaluator: executes one
// action-set index (primitive or macro) on a live environment.

#include "macroforge/core/action.hpp"
#include "macroforge/core/env.hpp"
#include "macroforge/core/macro_exec.hpp"
#include "macroforge/learn/curiosity.hpp"

namespace macroforge::learn::detail {

struct ExecOutcome {
    double extrinsic = 0.0;
    double bonus = 0.0;
    int next_state = 0;
    int steps = 0;
    bool episode_over = false;
    bool natural_terminal = false;
};

/// Runs the selected index; when counts is non-null every primitive step
/// updates the visit counts and accrues the count bonus.
inline ExecOutcome execute_index(core::Env& env, const core::ActionSet& set, int index,
                                 VisitCounts* counts, double beta) {
    ExecOutcome out;
    const core::StepObserver observer = [&](const core::StepResult& r) {
        if (counts) out.bonus += curiosity_bonus(*counts, r.next_state, beta);
    };
    if (set.is_macro_index(index)) {
        const core::MacroOutcome m = core::execute_macro(env, set.macro(), observer);
        out.extrinsic = m.cumulative_reward;
        out.next_state = m.next_state;
        out.steps = m.steps_used;
    } else {
        const core::StepResult r = env.step(index);
        observer(r);
        out.extrinsic = r.reward;
        out.next_state = r.next_state;
        out.steps = 1;
    }
    out.episode_over = env.done();
    out.natural_terminal = env.terminated();
    return out;
}

} // namespace macroforge::learn::detail

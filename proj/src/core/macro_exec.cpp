#include "macroforge/core/macro_exec.hpp"

#include "macroforge/errors.hpp"

namespace macroforge::core {

MacroOutcome execute_macro(Env& env, const MacroAction& macro,
                           const StepObserver& observer) {
    if (env.done())
        throw IllegalCallError("execute_macro called on a finished episode");

    MacroOutcome out;
    out.next_state = env.current_state();
    for (PrimitiveAction a : macro.actions()) {
        const StepResult r = env.step(a);
        if (observer) observer(r);
        out.cumulative_reward += r.reward;
        out.next_state = r.next_state;
        ++out.steps_used;
        if (r.terminated || r.truncated_by_limit) break;
    }
    out.terminated = env.done();
    return out;
}

double macro_backup(double reward_sum, double discount, double next_value) {
    return reward_sum + discount * next_value;
}

} // namespace macroforge::core

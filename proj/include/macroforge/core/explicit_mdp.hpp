#pragma once

#include <cstdint>
#include <vector>

#include "macroforge/core/action.hpp"
#include "macroforge/core/env.hpp"
#include "macroforge/rng.hpp"

namespace macroforge::core {

struct Transition {
    int next = 0;
    double prob = 1.0;
    double reward = 0.0;
};

/// Finite MDP/SMDP as explicit tables over action-set indices. Terminal
/// states self-loop with reward 0 for every action. Used by the exact
/// solvers and the test oracles only; learning runs never build one.
class ExplicitMDP {
public:
    ExplicitMDP(int n_states, int n_actions);

    int state_count() const { return n_states_; }
    int action_count() const { return n_actions_; }

    void add_transition(int state, int action, int next, double prob, double reward);
    void set_terminal(int state);
    bool is_terminal(int state) const { return terminal_[static_cast<std::size_t>(state)]; }

    const std::vector<Transition>& row(int state, int action) const;

    /// Checks probability sums (1 ± 1e-12), finite rewards, and terminal
    /// self-loops; throws InvalidArgumentError on violation. Terminal rows
    /// left empty are filled with the canonical self-loop.
    void finalize();

private:
    int n_states_;
    int n_actions_;
    std::vector<std::vector<Transition>> rows_; // [state * n_actions + action]
    std::vector<bool> terminal_;
};

/// State values under a fixed discount.
struct ValueTable {
    std::vector<double> values;
    double discount = 0.0;
};

/// Per-state probability row over action-set indices.
class TabularPolicy {
public:
    TabularPolicy(int n_states, int n_actions);
    static TabularPolicy deterministic(int n_states, int n_actions,
                                       const std::vector<int>& choice);
    static TabularPolicy uniform(int n_states, int n_actions);

    int state_count() const { return n_states_; }
    int action_count() const { return n_actions_; }
    double prob(int state, int action) const;
    void set_row(int state, const std::vector<double>& probs);

private:
    int n_states_;
    int n_actions_;
    std::vector<double> probs_;
};

/// Appends one composed macro column to a primitive-only MDP. The macro row
/// is the step-by-step composition of the primitive rows: endpoint
/// probabilities after |m| steps with terminal absorption, and per-endpoint
/// conditional expected cumulative reward, so that the row's expected reward
/// equals the expected undiscounted sum along the macro.
ExplicitMDP with_macro_row(const ExplicitMDP& primitive_mdp, const MacroAction& macro);

/// Tabularizes a deterministic enumerable environment over the given action
/// set. Macro rows are l-step compositions with summed rewards, truncating
/// at terminals. Throws TooLargeError when state_count exceeds the cap.
ExplicitMDP build_explicit_mdp(const TabularModel& model, const ActionSet& action_set,
                               int max_states = 1'000'000);

/// Live episodic environment over an ExplicitMDP. Transitions are sampled
/// from the rows with the episode's seeded stream (one draw per step), which
/// is what makes macro-vs-primitive shared-stream comparisons exact.
class ExplicitMdpEnv : public Env {
public:
    ExplicitMdpEnv(ExplicitMDP mdp, int start_state, int max_steps = 10'000);

    int state_count() const override { return mdp_.state_count(); }
    int primitive_count() const override { return mdp_.action_count(); }
    std::vector<std::string> action_names() const override;
    int reset(std::uint64_t seed) override;
    StepResult step(int action) override;
    int current_state() const override { return state_; }
    bool terminated() const override { return terminated_; }
    bool truncated() const override { return truncated_; }
    int step_limit() const override { return max_steps_; }

    const ExplicitMDP& mdp() const { return mdp_; }

private:
    ExplicitMDP mdp_;
    int start_state_;
    int max_steps_;
    int state_ = 0;
    int steps_ = 0;
    bool terminated_ = false;
    bool truncated_ = false;
    Rng rng_{0};
};

} // namespace macroforge::core

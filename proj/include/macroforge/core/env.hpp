#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace macroforge::core {

/// One primitive transition as seen by an agent.
struct StepResult {
    int next_state = 0;
    double reward = 0.0;
    bool terminated = false;        // natural episode end (e.g. goal entered)
    bool truncated_by_limit = false; // step limit hit without termination
};

/// Episodic environment over a finite state space with integer state ids and
/// integer primitive actions. A live instance is owned by a single caller;
/// create one instance per concurrent run.
class Env {
public:
    virtual ~Env() = default;

    virtual int state_count() const = 0;
    virtual int primitive_count() const = 0;

    /// Names of the primitive actions, index-aligned. Used by macro files
    /// and reports so artifacts are self-describing.
    virtual std::vector<std::string> action_names() const = 0;

    /// Starts a new episode; the seed drives any spawn/transition randomness.
    /// Returns the initial state id.
    virtual int reset(std::uint64_t seed) = 0;

    /// Applies one primitive action. Throws IllegalCallError if the episode
    /// is already over.
    virtual StepResult step(int action) = 0;

    virtual int current_state() const = 0;
    virtual bool terminated() const = 0;
    virtual bool truncated() const = 0;
    bool done() const { return terminated() || truncated(); }

    /// Episode step limit, 0 when unlimited.
    virtual int step_limit() const = 0;
};

using EnvFactory = std::function<std::unique_ptr<Env>()>;

/// Deterministic, enumerable view of an environment's dynamics, used by the
/// exact solvers to tabularize it.
class TabularModel {
public:
    virtual ~TabularModel() = default;
    virtual int state_count() const = 0;
    virtual int primitive_count() const = 0;
    virtual bool is_terminal(int state) const = 0;
    /// Deterministic one-step dynamics: (next state, reward).
    virtual std::pair<int, double> transition(int state, int action) const = 0;
};

} // namespace macroforge::core

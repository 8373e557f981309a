#include "macroforge/env/risk_corridor.hpp"

#include <algorithm>

#include "macroforge/errors.hpp"

namespace macroforge::env {

void RiskCorridorSpec::validate() const {
    if (track_length < 2) throw ConfigError("risk corridor track must have length >= 2");
    if (obstacle_cells.empty()) throw ConfigError("risk corridor needs at least one obstacle");
    for (int c : obstacle_cells)
        if (c <= 0 || c >= track_length)
            throw ConfigError("obstacle cell " + std::to_string(c) +
                              " is not strictly inside the track");
    if (crash_penalty >= 0.0) throw ConfigError("crash penalty must be negative");
    if (pass_reward <= 0.0) throw ConfigError("pass reward must be positive");
    if (step_limit < 1) throw ConfigError("risk corridor step limit must be positive");
}

std::vector<std::string> risk_action_names() {
    return {"FORWARD", "DODGE", "NOOP"};
}

RiskCorridorEnv::RiskCorridorEnv(RiskCorridorSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    is_obstacle_.assign(static_cast<std::size_t>(spec_.track_length), false);
    for (int c : spec_.obstacle_cells) is_obstacle_[static_cast<std::size_t>(c)] = true;
}

int RiskCorridorEnv::reset(std::uint64_t) {
    pos_ = 0;
    dodge_ = false;
    steps_ = 0;
    truncated_ = false;
    return current_state();
}

std::pair<int, double> RiskCorridorEnv::dynamics(int pos, bool dodge, int action) const {
    double reward = 0.0;
    bool next_dodge = false;
    int next_pos = pos;
    switch (action) {
    case kForward: {
        next_pos = (pos + 1) % spec_.track_length;
        if (is_obstacle_[static_cast<std::size_t>(next_pos)]) {
            if (dodge) {
                reward = spec_.pass_reward;
            } else {
                reward = spec_.crash_penalty;
                next_pos = 0;
            }
        }
        break;
    }
    case kDodge:
        next_dodge = true;
        break;
    case kNoop:
        break;
    default:
        throw InvalidArgumentError("invalid risk corridor action id " + std::to_string(action));
    }
    return {encode(next_pos, next_dodge), reward};
}

core::StepResult RiskCorridorEnv::step(int action) {
    if (done()) throw IllegalCallError("step called on a finished episode");
    const auto [next, reward] = dynamics(pos_, dodge_, action);
    pos_ = next / 2;
    dodge_ = (next % 2) != 0;
    ++steps_;
    truncated_ = steps_ >= spec_.step_limit;
    return core::StepResult{next, reward, false, truncated_};
}

std::pair<int, double> RiskCorridorEnv::transition(int state, int action) const {
    return dynamics(state / 2, (state % 2) != 0, action);
}

} // namespace macroforge::env

#pragma once

#include <vector>

#include "macroforge/core/env.hpp"

namespace macroforge::env {

/// Risk-corridor primitive actions.
enum RiskActions : int { kForward = 0, kDodge = 1, kNoop = 2 };
inline constexpr int kRiskActionCount = 3;

/// A looping track with armed obstacles. Defaults are fixed so results
/// reproduce across runs.
struct RiskCorridorSpec {
    int track_length = 12;
    std::vector<int> obstacle_cells = {4, 8}; // strictly inside the track
    double crash_penalty = -1.0;
    double pass_reward = 1.0;
    int step_limit = 200;

    void validate() const;
};

std::vector<std::string> risk_action_names();

/// FORWARD advances one cell; the track wraps, so rewards keep accumulating
/// until the step limit truncates. Entering an armed obstacle
/// crashes: crash penalty and reset to the track start, episode continues.
/// DODGE disarms the next obstacle entry for exactly one step. Entering an
/// obstacle while disarmed passes it for the pass reward. State encodes
/// (position, dodge flag); episodes end only by truncation.
class RiskCorridorEnv : public core::Env, public core::TabularModel {
public:
    explicit RiskCorridorEnv(RiskCorridorSpec spec = {});

    int state_count() const override { return spec_.track_length * 2; }
    int primitive_count() const override { return kRiskActionCount; }
    std::vector<std::string> action_names() const override { return risk_action_names(); }
    int reset(std::uint64_t seed) override;
    core::StepResult step(int action) override;
    int current_state() const override { return encode(pos_, dodge_); }
    bool terminated() const override { return false; }
    bool truncated() const override { return truncated_; }
    int step_limit() const override { return spec_.step_limit; }

    // TabularModel (no terminals; the step limit is excluded)
    bool is_terminal(int) const override { return false; }
    std::pair<int, double> transition(int state, int action) const override;

    const RiskCorridorSpec& spec() const { return spec_; }
    int encode(int pos, bool dodge) const { return pos * 2 + (dodge ? 1 : 0); }

private:
    std::pair<int, double> dynamics(int pos, bool dodge, int action) const;

    RiskCorridorSpec spec_;
    std::vector<bool> is_obstacle_;
    int pos_ = 0;
    bool dodge_ = false;
    int steps_ = 0;
    bool truncated_ = false;
};

} // namespace macroforge::env

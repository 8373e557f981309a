#pragma once

#include <memory>
#include <string>
#include <vector>

#include "macroforge/core/env.hpp"
#include "macroforge/rng.hpp"

namespace macroforge::env {

/// The four reward-sparsity settings. Dense spawns uniformly over the floor;
/// the sparse settings start from their declared fixed spawn.
enum class MazeTask { dense, sparse, very_sparse, super_sparse };

const char* to_string(MazeTask task);
MazeTask maze_task_from_string(const std::string& name);
bool is_maze_task(const std::string& name);

/// Maze primitive actions. Turns rotate by 45 degrees, so a sharp 90-degree
/// turn takes two turn actions.
enum MazeActions : int { kMoveForward = 0, kTurnLeft = 1, kTurnRight = 2 };
inline constexpr int kMazeActionCount = 3;
inline constexpr int kOrientations = 8; // 0=N, 1=NE, 2=E, ... 7=NW, clockwise

struct RewardParams {
    double living_penalty = -0.0001; // paid on every step
    double goal_reward = 1.0;        // paid additionally when entering the goal
};

/// Agent pose inside a maze.
struct AgentState {
    int row = 0;
    int col = 0;
    int orientation = 0;
    int steps_elapsed = 0;
};

/// Parsed and validated ASCII map.
///
/// Format: optional `key: value` directive lines, then the rectangular grid.
///   '#' wall, '.' floor, 'G' goal (exactly one), 'S' fixed spawn (floor).
/// The grid border must be all walls and the goal reachable from every floor
/// cell. 'S' cells are ordered by row-major declaration: in a shared map the
/// first is the Sparse spawn and the second the Very Sparse spawn; a map
/// dedicated to Super Sparse carries a single 'S'.
/// Directives:
///   spawn-orient: compass letters (N NE E SE S SW W NW), one per 'S',
///                 declaration order; default E.
///   step-limit:   episode step limit; default 500.
struct MazeSpec {
    std::vector<std::string> grid;
    int rows = 0;
    int cols = 0;
    int goal_cell = -1;                      // row * cols + col
    std::vector<int> floor_cells;            // every non-wall cell, row-major
    std::vector<int> cell_to_floor;          // -1 for walls
    std::vector<std::pair<int, int>> fixed_spawns; // (cell, orientation), declaration order
    int step_limit = 500;

    int floor_count() const { return static_cast<int>(floor_cells.size()); }
    int state_count() const { return floor_count() * kOrientations; }
    bool is_floor(int row, int col) const;

    int encode(int cell, int orientation) const;
    std::pair<int, int> decode(int state) const; // (cell, orientation)

    /// Shortest spawn-to-goal distance in cells (4-neighbour BFS).
    int bfs_distance(int from_cell) const;
};

/// Parses a map document; throws ParseError with the offending line number.
MazeSpec load_map(const std::string& text);
MazeSpec load_map_file(const std::string& path);

std::vector<std::string> maze_action_names();

/// Orientation-based grid maze. MOVE_FORWARD moves one cell along the
/// cardinal projection of the orientation: cardinal orientations move
/// straight; diagonal orientations take the horizontal axis when open, else
/// the vertical axis, else stay. Blocked moves leave the cell unchanged.
/// Every step pays the living penalty; entering the goal additionally pays
/// the goal reward and terminates.
class MazeEnv : public core::Env, public core::TabularModel {
public:
    MazeEnv(std::shared_ptr<const MazeSpec> spec, MazeTask task,
            RewardParams rewards = {});

    // Env
    int state_count() const override { return spec_->state_count(); }
    int primitive_count() const override { return kMazeActionCount; }
    std::vector<std::string> action_names() const override { return maze_action_names(); }
    int reset(std::uint64_t seed) override;
    core::StepResult step(int action) override;
    int current_state() const override { return state_; }
    bool terminated() const override { return terminated_; }
    bool truncated() const override { return truncated_; }
    int step_limit() const override { return spec_->step_limit; }

    // TabularModel (step limit excluded; terminals are the goal states)
    bool is_terminal(int state) const override;
    std::pair<int, double> transition(int state, int action) const override;

    AgentState agent_state() const;
    const MazeSpec& spec() const { return *spec_; }
    MazeTask task() const { return task_; }
    /// Spawnable cells for the Dense setting (floor minus the goal).
    const std::vector<int>& dense_spawn_cells() const { return dense_spawns_; }

private:
    int spawn_state(std::uint64_t seed);

    std::shared_ptr<const MazeSpec> spec_;
    MazeTask task_;
    RewardParams rewards_;
    std::vector<int> dense_spawns_;
    std::vector<int> next_state_; // [state * kMazeActionCount + action]
    int state_ = 0;
    int steps_ = 0;
    bool terminated_ = false;
    bool truncated_ = false;
};

} // namespace macroforge::env

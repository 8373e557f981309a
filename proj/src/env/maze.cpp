#include "macroforge/env/maze.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "macroforge/errors.hpp"

namespace macroforge::env {

namespace {

// Row/col deltas per orientation, clockwise from north.
constexpr int kDRow[kOrientations] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kDCol[kOrientations] = {0, 1, 1, 1, 0, -1, -1, -1};

const char* kCompass[kOrientations] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};

int orientation_from_compass(const std::string& token, int line) {
    for (int o = 0; o < kOrientations; ++o)
        if (token == kCompass[o]) return o;
    throw ParseError("unknown compass direction '" + token + "'", line);
}

} // namespace

const char* to_string(MazeTask task) {
    switch (task) {
    case MazeTask::dense: return "dense";
    case MazeTask::sparse: return "sparse";
    case MazeTask::very_sparse: return "very_sparse";
    case MazeTask::super_sparse: return "super_sparse";
    }
    return "?";
}

MazeTask maze_task_from_string(const std::string& name) {
    if (name == "dense") return MazeTask::dense;
    if (name == "sparse") return MazeTask::sparse;
    if (name == "very_sparse") return MazeTask::very_sparse;
    if (name == "super_sparse") return MazeTask::super_sparse;
    throw ConfigError("unknown maze task '" + name + "'");
}

bool is_maze_task(const std::string& name) {
    return name == "dense" || name == "sparse" || name == "very_sparse" ||
           name == "super_sparse";
}

bool MazeSpec::is_floor(int row, int col) const {
    if (row < 0 || row >= rows || col < 0 || col >= cols) return false;
    return cell_to_floor[static_cast<std::size_t>(row * cols + col)] >= 0;
}

int MazeSpec::encode(int cell, int orientation) const {
    return cell_to_floor[static_cast<std::size_t>(cell)] * kOrientations + orientation;
}

std::pair<int, int> MazeSpec::decode(int state) const {
    const int floor_index = state / kOrientations;
    return {floor_cells[static_cast<std::size_t>(floor_index)], state % kOrientations};
}

int MazeSpec::bfs_distance(int from_cell) const {
    std::vector<int> dist(static_cast<std::size_t>(rows * cols), -1);
    std::deque<int> queue;
    dist[static_cast<std::size_t>(from_cell)] = 0;
    queue.push_back(from_cell);
    while (!queue.empty()) {
        const int cell = queue.front();
        queue.pop_front();
        if (cell == goal_cell) return dist[static_cast<std::size_t>(cell)];
        const int r = cell / cols, c = cell % cols;
        const int nr[4] = {r - 1, r + 1, r, r};
        const int nc[4] = {c, c, c - 1, c + 1};
        for (int k = 0; k < 4; ++k) {
            if (!is_floor(nr[k], nc[k])) continue;
            const int next = nr[k] * cols + nc[k];
            if (dist[static_cast<std::size_t>(next)] < 0) {
                dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(cell)] + 1;
                queue.push_back(next);
            }
        }
    }
    return -1;
}

MazeSpec load_map(const std::string& text) {
    MazeSpec spec;
    std::vector<int> spawn_orients;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool in_grid = false;
    std::vector<std::pair<int, std::string>> grid_lines; // (line number, row)

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!in_grid) {
            if (line.empty()) continue;
            const auto colon = line.find(':');
            if (line[0] != '#' && colon != std::string::npos) {
                const std::string key = line.substr(0, colon);
                std::istringstream val(line.substr(colon + 1));
                if (key == "spawn-orient") {
                    std::string token;
                    while (val >> token)
                        spawn_orients.push_back(orientation_from_compass(token, line_no));
                } else if (key == "step-limit") {
                    if (!(val >> spec.step_limit) || spec.step_limit < 1)
                        throw ParseError("step-limit must be a positive integer", line_no);
                } else {
                    throw ParseError("unknown directive '" + key + "'", line_no);
                }
                continue;
            }
            in_grid = true;
        }
        if (line.empty()) break; // blank line ends the grid
        grid_lines.emplace_back(line_no, line);
    }

    if (grid_lines.empty()) throw ParseError("map has no grid", line_no);
    spec.rows = static_cast<int>(grid_lines.size());
    spec.cols = static_cast<int>(grid_lines.front().second.size());
    spec.cell_to_floor.assign(static_cast<std::size_t>(spec.rows) *
                                  static_cast<std::size_t>(spec.cols),
                              -1);

    std::vector<int> spawn_cells;
    for (int r = 0; r < spec.rows; ++r) {
        const auto& [ln, row] = grid_lines[static_cast<std::size_t>(r)];
        if (static_cast<int>(row.size()) != spec.cols)
            throw ParseError("grid is not rectangular (row width " +
                                 std::to_string(row.size()) + ", expected " +
                                 std::to_string(spec.cols) + ")",
                             ln);
        for (int c = 0; c < spec.cols; ++c) {
            const char ch = row[static_cast<std::size_t>(c)];
            const int cell = r * spec.cols + c;
            const bool border = r == 0 || r == spec.rows - 1 || c == 0 || c == spec.cols - 1;
            switch (ch) {
            case '#':
                break;
            case '.':
            case 'G':
            case 'S':
                if (border) throw ParseError("grid border must be all walls", ln);
                spec.cell_to_floor[static_cast<std::size_t>(cell)] =
                    static_cast<int>(spec.floor_cells.size());
                spec.floor_cells.push_back(cell);
                if (ch == 'G') {
                    if (spec.goal_cell >= 0)
                        throw ParseError("map declares more than one goal", ln);
                    spec.goal_cell = cell;
                }
                if (ch == 'S') spawn_cells.push_back(cell);
                break;
            default:
                throw ParseError(std::string("unexpected character '") + ch + "' in grid", ln);
            }
        }
        spec.grid.push_back(row);
    }

    if (spec.goal_cell < 0) throw ParseError("map declares no goal", line_no);
    if (spec.floor_count() < 2)
        throw ParseError("map has no spawnable floor besides the goal", line_no);
    if (!spawn_orients.empty() && spawn_orients.size() != spawn_cells.size())
        throw ParseError("spawn-orient lists " + std::to_string(spawn_orients.size()) +
                             " directions for " + std::to_string(spawn_cells.size()) +
                             " 'S' cells",
                         line_no);
    for (std::size_t i = 0; i < spawn_cells.size(); ++i) {
        const int orient = i < spawn_orients.size() ? spawn_orients[i] : 2; // default E
        spec.fixed_spawns.emplace_back(spawn_cells[i], orient);
    }

    // Reachability: every floor cell must reach the goal.
    for (int cell : spec.floor_cells)
        if (spec.bfs_distance(cell) < 0)
            throw ParseError("cell (" + std::to_string(cell / spec.cols) + "," +
                                 std::to_string(cell % spec.cols) +
                                 ") cannot reach the goal",
                             line_no);
    return spec;
}

MazeSpec load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open map file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return load_map(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line());
    }
}

std::vector<std::string> maze_action_names() {
    return {"MOVE_FORWARD", "TURN_LEFT", "TURN_RIGHT"};
}

MazeEnv::MazeEnv(std::shared_ptr<const MazeSpec> spec, MazeTask task, RewardParams rewards)
    : spec_(std::move(spec)), task_(task), rewards_(rewards) {
    const int spawns = static_cast<int>(spec_->fixed_spawns.size());
    switch (task_) {
    case MazeTask::dense:
        break;
    case MazeTask::sparse:
    case MazeTask::very_sparse:
        if (spawns < 2)
            throw ConfigError(std::string(to_string(task_)) +
                              " needs a shared map declaring two 'S' spawns");
        break;
    case MazeTask::super_sparse:
        if (spawns != 1)
            throw ConfigError("super_sparse needs its dedicated extended map "
                              "declaring exactly one 'S' spawn");
        break;
    }

    for (int cell : spec_->floor_cells)
        if (cell != spec_->goal_cell) dense_spawns_.push_back(cell);

    // Precompute the deterministic cell/orientation dynamics.
    next_state_.assign(static_cast<std::size_t>(spec_->state_count()) * kMazeActionCount, 0);
    for (int state = 0; state < spec_->state_count(); ++state) {
        const auto [cell, orient] = spec_->decode(state);
        const int r = cell / spec_->cols, c = cell % spec_->cols;
        for (int a = 0; a < kMazeActionCount; ++a) {
            int nr = r, nc = c, no = orient;
            if (a == kTurnLeft) {
                no = (orient + kOrientations - 1) % kOrientations;
            } else if (a == kTurnRight) {
                no = (orient + 1) % kOrientations;
            } else {
                const int dr = kDRow[orient], dc = kDCol[orient];
                if (dr == 0 || dc == 0) { // cardinal
                    if (spec_->is_floor(r + dr, c + dc)) { nr = r + dr; nc = c + dc; }
                } else { // diagonal: horizontal axis first, else vertical, else blocked
                    if (spec_->is_floor(r, c + dc)) {
                        nc = c + dc;
                    } else if (spec_->is_floor(r + dr, c)) {
                        nr = r + dr;
                    }
                }
            }
            next_state_[static_cast<std::size_t>(state) * kMazeActionCount + a] =
                spec_->encode(nr * spec_->cols + nc, no);
        }
    }

    state_ = spawn_state(0);
}

int MazeEnv::spawn_state(std::uint64_t seed) {
    switch (task_) {
    case MazeTask::dense: {
        Rng rng(seed);
        const int cell = dense_spawns_[static_cast<std::size_t>(
            rng.next_below(static_cast<int>(dense_spawns_.size())))];
        return spec_->encode(cell, rng.next_below(kOrientations));
    }
    case MazeTask::sparse:
        return spec_->encode(spec_->fixed_spawns[0].first, spec_->fixed_spawns[0].second);
    case MazeTask::very_sparse:
        return spec_->encode(spec_->fixed_spawns[1].first, spec_->fixed_spawns[1].second);
    case MazeTask::super_sparse:
        return spec_->encode(spec_->fixed_spawns[0].first, spec_->fixed_spawns[0].second);
    }
    return 0;
}

int MazeEnv::reset(std::uint64_t seed) {
    state_ = spawn_state(seed);
    steps_ = 0;
    terminated_ = false;
    truncated_ = false;
    return state_;
}

core::StepResult MazeEnv::step(int action) {
    if (done()) throw IllegalCallError("step called on a finished episode");
    if (action < 0 || action >= kMazeActionCount)
        throw InvalidArgumentError("invalid maze action id " + std::to_string(action));

    state_ = next_state_[static_cast<std::size_t>(state_) * kMazeActionCount + action];
    ++steps_;
    const bool on_goal = spec_->decode(state_).first == spec_->goal_cell;
    double reward = rewards_.living_penalty;
    if (on_goal) reward += rewards_.goal_reward;
    terminated_ = on_goal;
    truncated_ = !terminated_ && steps_ >= spec_->step_limit;
    return core::StepResult{state_, reward, terminated_, truncated_};
}

bool MazeEnv::is_terminal(int state) const {
    return spec_->decode(state).first == spec_->goal_cell;
}

std::pair<int, double> MazeEnv::transition(int state, int action) const {
    const int next = next_state_[static_cast<std::size_t>(state) * kMazeActionCount + action];
    const bool on_goal = spec_->decode(next).first == spec_->goal_cell;
    return {next, rewards_.living_penalty + (on_goal ? rewards_.goal_reward : 0.0)};
}

AgentState MazeEnv::agent_state() const {
    const auto [cell, orient] = spec_->decode(state_);
    return AgentState{cell / spec_->cols, cell % spec_->cols, orient, steps_};
}

} // namespace macroforge::env

#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptp/cell.hpp"

namespace ptp {

enum class CellState : std::uint8_t { Unknown, Free, Occupied };

// Fully known world map. Cells are Free or Occupied; a nonempty set of Free
// cells forms the goal region whose observation answers the episode's
// question.
class GroundTruthGrid {
public:
    GroundTruthGrid(int width, int height)
        : width_(width),
          height_(height),
          cells_(static_cast<size_t>(width) * height, CellState::Occupied),
          goal_(static_cast<size_t>(width) * height, 0) {
        if (width < 8 || height < 8)
            throw std::invalid_argument("grid must be at least 8x8");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(Cell c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    size_t index(Cell c) const {
        return static_cast<size_t>(c.row) * width_ + c.col;
    }

    CellState state(Cell c) const { return cells_[index(c)]; }
    bool is_free(Cell c) const { return state(c) == CellState::Free; }
    void set_state(Cell c, CellState s) { cells_[index(c)] = s; }

    bool is_goal(Cell c) const { return goal_[index(c)] != 0; }
    void set_goal(Cell c, bool g) {
        if (g && !is_free(c))
            throw std::invalid_argument("goal cell must be Free");
        goal_[index(c)] = g ? 1 : 0;
    }

    Cell start() const { return start_; }
    void set_start(Cell c) {
        if (!is_free(c)) throw std::invalid_argument("start cell must be Free");
        start_ = c;
    }

    int free_cell_count() const {
        int n = 0;
        for (CellState s : cells_)
            if (s == CellState::Free) ++n;
        return n;
    }

    std::vector<Cell> goal_cells() const {
        std::vector<Cell> out;
        for (int r = 0; r < height_; ++r)
            for (int c = 0; c < width_; ++c)
                if (goal_[static_cast<size_t>(r) * width_ + c]) out.push_back({r, c});
        return out;
    }

    double diameter() const {
        return std::sqrt(static_cast<double>(width_) * width_ +
                         static_cast<double>(height_) * height_);
    }

    bool operator==(const GroundTruthGrid&) const = default;

private:
    int width_;
    int height_;
    std::vector<CellState> cells_;
    std::vector<std::uint8_t> goal_;
    Cell start_{0, 0};
};

// The agent's partial world model. Knowledge only grows and never disagrees
// with the ground truth.
class OccupancyGrid {
public:
    OccupancyGrid(int width, int height)
        : width_(width),
          height_(height),
          cells_(static_cast<size_t>(width) * height, CellState::Unknown) {}

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(Cell c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    size_t index(Cell c) const {
        return static_cast<size_t>(c.row) * width_ + c.col;
    }

    CellState state(Cell c) const { return cells_[index(c)]; }
    bool known(Cell c) const { return state(c) != CellState::Unknown; }
    bool known_free(Cell c) const { return state(c) == CellState::Free; }

    void reveal(Cell c, CellState truth_state) {
        CellState& s = cells_[index(c)];
        if (s == CellState::Unknown) {
            s = truth_state;
            ++known_count_;
            if (truth_state == CellState::Free) ++known_free_count_;
        }
    }

    int known_count() const { return known_count_; }
    int known_free_count() const { return known_free_count_; }

    bool operator==(const OccupancyGrid&) const = default;

private:
    int width_;
    int height_;
    std::vector<CellState> cells_;
    int known_count_ = 0;
    int known_free_count_ = 0;
};

struct AgentState {
    Cell position;
    int step_index = 0;
    // Per-cell trajectory; one or more entries are appended per decision
    // step (a stationary step appends the current position again).
    std::vector<Cell> path;

    static AgentState at(Cell start) { return AgentState{start, 0, {start}}; }
};

// --- scene text format -------------------------------------------------
//
//   gridworld-v1 <width> <height>
//   #.G...
//
// '#' Occupied, '.' Free, 'G' Free goal cell, 'S' Free start cell.

inline void save_scene(const GroundTruthGrid& g, std::ostream& os) {
    os << "gridworld-v1 " << g.width() << ' ' << g.height() << '\n';
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
            Cell cell{r, c};
            char ch = '#';
            if (g.is_free(cell)) {
                ch = '.';
                if (g.is_goal(cell)) ch = 'G';
                if (cell == g.start()) ch = 'S';
            }
            os << ch;
        }
        os << '\n';
    }
}

inline std::string scene_to_string(const GroundTruthGrid& g) {
    std::ostringstream os;
    save_scene(g, os);
    return os.str();
}

inline GroundTruthGrid load_scene(std::istream& is) {
    std::string header, line;
    if (!std::getline(is, header))
        throw std::runtime_error("scene file: missing header");
    std::istringstream hs(header);
    std::string magic;
    int width = 0, height = 0;
    hs >> magic >> width >> height;
    if (magic != "gridworld-v1" || width <= 0 || height <= 0)
        throw std::runtime_error("scene file: bad header '" + header + "'");

    GroundTruthGrid g(width, height);
    int starts = 0, goals = 0;
    for (int r = 0; r < height; ++r) {
        if (!std::getline(is, line) || static_cast<int>(line.size()) != width)
            throw std::runtime_error("scene file: bad row " + std::to_string(r));
        for (int c = 0; c < width; ++c) {
            Cell cell{r, c};
            switch (line[c]) {
                case '#': break;
                case '.': g.set_state(cell, CellState::Free); break;
                case 'G':
                    g.set_state(cell, CellState::Free);
                    g.set_goal(cell, true);
                    ++goals;
                    break;
                case 'S':
                    g.set_state(cell, CellState::Free);
                    g.set_start(cell);
                    ++starts;
                    break;
                default:
                    throw std::runtime_error(
                        std::string("scene file: bad char '") + line[c] + "'");
            }
        }
    }
    if (starts != 1) throw std::runtime_error("scene file: need exactly one S");
    if (goals == 0) throw std::runtime_error("scene file: need at least one G");
    return g;
}

inline GroundTruthGrid scene_from_string(const std::string& text) {
    std::istringstream is(text);
    return load_scene(is);
}

}  // namespace ptp

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptp/grid.hpp"

namespace ptp {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Single-source shortest paths over traversable cells, 8-connectivity with
// unit cardinal and sqrt(2) diagonal costs. A diagonal move requires both
// flanking cardinal cells to be traversable (no corner cutting).
struct DistanceField {
    Cell source;
    int width = 0;
    int height = 0;
    std::vector<double> dist;
    std::vector<std::int32_t> parent;  // flat index, -1 at source/unreached

    size_t index(Cell c) const {
        return static_cast<size_t>(c.row) * width + c.col;
    }
    double at(Cell c) const { return dist[index(c)]; }
    bool reachable(Cell c) const { return at(c) < kUnreachable; }
};

namespace detail {

template <typename Passable>
DistanceField dijkstra(int width, int height, const std::vector<Cell>& sources,
                       Passable passable) {
    DistanceField f;
    f.source = sources.empty() ? Cell{0, 0} : sources.front();
    f.width = width;
    f.height = height;
    f.dist.assign(static_cast<size_t>(width) * height, kUnreachable);
    f.parent.assign(static_cast<size_t>(width) * height, -1);

    using Entry = std::pair<double, std::int32_t>;  // (dist, flat index)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (Cell s : sources) {
        f.dist[f.index(s)] = 0.0;
        heap.push({0.0, static_cast<std::int32_t>(f.index(s))});
    }

    auto in_bounds = [&](Cell c) {
        return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width;
    };

    while (!heap.empty()) {
        auto [d, idx] = heap.top();
        heap.pop();
        if (d > f.dist[idx]) continue;
        Cell cur{static_cast<int>(idx) / width, static_cast<int>(idx) % width};
        for (Cell step : kDir8) {
            Cell next{cur.row + step.row, cur.col + step.col};
            if (!in_bounds(next) || !passable(next)) continue;
            const bool diagonal = step.row != 0 && step.col != 0;
            if (diagonal) {
                if (!passable({cur.row + step.row, cur.col}) ||
                    !passable({cur.row, cur.col + step.col}))
                    continue;
            }
            const double nd = d + (diagonal ? kDiagonalCost : 1.0);
            const size_t nidx = f.index(next);
            if (nd < f.dist[nidx]) {
                f.dist[nidx] = nd;
                f.parent[nidx] = idx;
                heap.push({nd, static_cast<std::int32_t>(nidx)});
            }
        }
    }
    return f;
}

}  // namespace detail

// Geodesic distances on the agent's belief: only known-Free cells are
// traversable.
inline DistanceField geodesic_field(const OccupancyGrid& belief, Cell source) {
    if (!belief.in_bounds(source) || !belief.known_free(source))
        throw std::invalid_argument("geodesic_field: source must be known-Free");
    return detail::dijkstra(belief.width(), belief.height(), {source},
                            [&](Cell c) { return belief.known_free(c); });
}

// Fully informed distances on the ground truth (multi-source). Used by the
// oracle scorer and labeler only; the planner never sees it.
inline DistanceField truth_distance_field(const GroundTruthGrid& truth,
                                          const std::vector<Cell>& sources) {
    for (Cell s : sources)
        if (!truth.is_free(s))
            throw std::invalid_argument("truth_distance_field: source not Free");
    return detail::dijkstra(truth.width(), truth.height(), sources,
                            [&](Cell c) { return truth.is_free(c); });
}

// Path from the field source to target, both inclusive.
inline std::vector<Cell> extract_path(const DistanceField& field, Cell target) {
    if (!field.reachable(target))
        throw std::invalid_argument("extract_path: target unreachable");
    std::vector<Cell> path;
    std::int32_t idx = static_cast<std::int32_t>(field.index(target));
    while (idx >= 0) {
        path.push_back({idx / field.width, idx % field.width});
        idx = field.parent[idx];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// Move up to `stride` cells along the shortest path toward `target`,
// appending every traversed cell; a stationary step appends the current
// position so the trajectory always records one entry per decision step.
inline AgentState advance_along(AgentState agent, Cell target,
                                const DistanceField& field, int stride) {
    if (stride < 0) throw std::invalid_argument("advance: negative stride");
    const std::vector<Cell> path = extract_path(field, target);
    const int moves = std::min<int>(stride, static_cast<int>(path.size()) - 1);
    for (int i = 1; i <= moves; ++i) {
        agent.path.push_back(path[i]);
        agent.position = path[i];
    }
    if (moves == 0) agent.path.push_back(agent.position);
    agent.step_index += 1;
    return agent;
}

}  // namespace ptp

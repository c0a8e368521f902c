#pragma once

#include <algorithm>
#include <vector>

#include "ptp/grid.hpp"
#include "ptp/planner.hpp"

namespace ptp {

// An 8-connected cluster of known-Free cells bordering Unknown space. The
// representative is the cluster cell geodesically closest to the agent and
// stands in for the whole cluster in distances and bearings.
struct Frontier {
    int id = 0;
    std::vector<Cell> cells;  // sorted (row, col)
    Cell representative;
    int unknown_mass = 0;
    double distance = 0.0;  // geodesic from the agent to the representative
};

namespace detail {

// A frontier cell must touch Unknown space through an edge, not just a
// corner. A cardinally adjacent Unknown cell is always observable from the
// cell itself, so standing on a frontier is guaranteed to reveal something;
// a corner-only contact can be sealed off by two walls and would leave a
// phantom frontier the agent can never resolve.
inline bool is_frontier_cell(const OccupancyGrid& belief, Cell c) {
    if (!belief.known_free(c)) return false;
    for (Cell d : kDir4) {
        Cell n{c.row + d.row, c.col + d.col};
        if (belief.in_bounds(n) && !belief.known(n)) return true;
    }
    return false;
}

}  // namespace detail

// All geodesically reachable frontier clusters of at least `min_cluster`
// cells, ordered by representative (row, col); ids are positions in the
// returned list. `field` must be sourced at the agent's position.
inline std::vector<Frontier> detect_frontiers(const OccupancyGrid& belief,
                                              int min_cluster,
                                              const DistanceField& field) {
    const int w = belief.width(), h = belief.height();
    std::vector<std::uint8_t> frontier_mask(static_cast<size_t>(w) * h, 0);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (detail::is_frontier_cell(belief, {r, c}))
                frontier_mask[belief.index({r, c})] = 1;

    std::vector<std::uint8_t> seen(static_cast<size_t>(w) * h, 0);
    // Distinct Unknown neighbours are counted per cluster; a shared Unknown
    // cell may contribute to the mass of more than one cluster.
    std::vector<int> unknown_mark(static_cast<size_t>(w) * h, -1);
    int cluster_counter = 0;
    std::vector<Frontier> out;

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const size_t idx = belief.index({r, c});
            if (!frontier_mask[idx] || seen[idx]) continue;

            Frontier f;
            std::vector<Cell> queue{{r, c}};
            seen[idx] = 1;
            for (size_t head = 0; head < queue.size(); ++head) {
                Cell cur = queue[head];
                f.cells.push_back(cur);
                for (Cell d : kDir8) {
                    Cell n{cur.row + d.row, cur.col + d.col};
                    if (!belief.in_bounds(n)) continue;
                    const size_t nidx = belief.index(n);
                    if (frontier_mask[nidx] && !seen[nidx]) {
                        seen[nidx] = 1;
                        queue.push_back(n);
                    }
                }
            }
            const int cluster_id = cluster_counter++;
            if (static_cast<int>(f.cells.size()) < min_cluster) continue;

            std::sort(f.cells.begin(), f.cells.end());

            bool have_rep = false;
            for (Cell cell : f.cells) {
                if (!field.reachable(cell)) continue;
                const double d = field.at(cell);
                if (!have_rep || d < f.distance ||
                    (d == f.distance && cell < f.representative)) {
                    f.representative = cell;
                    f.distance = d;
                    have_rep = true;
                }
            }
            if (!have_rep) continue;  // cluster not geodesically reachable

            int mass = 0;
            for (Cell cell : f.cells) {
                for (Cell d : kDir8) {
                    Cell n{cell.row + d.row, cell.col + d.col};
                    if (!belief.in_bounds(n) || belief.known(n)) continue;
                    const size_t nidx = belief.index(n);
                    if (unknown_mark[nidx] != cluster_id) {
                        unknown_mark[nidx] = cluster_id;
                        ++mass;
                    }
                }
            }
            f.unknown_mass = mass;
            out.push_back(std::move(f));
        }
    }

    std::sort(out.begin(), out.end(), [](const Frontier& a, const Frontier& b) {
        return a.representative < b.representative;
    });
    for (size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
    return out;
}

inline std::vector<Frontier> detect_frontiers(const OccupancyGrid& belief,
                                              const AgentState& agent,
                                              int min_cluster = 2) {
    return detect_frontiers(belief, min_cluster,
                            geodesic_field(belief, agent.position));
}

}  // namespace ptp

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ptp/grid.hpp"
#include "ptp/scene.hpp"

namespace ptp {

namespace detail {

// Walks the cells an open centre-to-centre segment touches, in exact
// integer arithmetic on doubled coordinates (centres are odd, boundaries
// even). Cells are reported in groups sharing one crossing parameter: a
// plain step reports one cell, an exact corner crossing reports the two
// flanking cells together with the diagonally entered one (conservative
// traversal). The walk stops when the visitor returns false or the target
// cell is reached; the endpoints themselves are never reported.
template <typename Visitor>
void walk_ray(Cell a, Cell b, Visitor&& visit) {
    if (a == b) return;
    if (a.row == b.row || a.col == b.col) {
        const Cell step{(b.row > a.row) - (b.row < a.row),
                        (b.col > a.col) - (b.col < a.col)};
        Cell cur{a.row + step.row, a.col + step.col};
        while (cur != b) {
            const Cell group[1] = {cur};
            if (!visit(group, 1)) return;
            cur = {cur.row + step.row, cur.col + step.col};
        }
        return;
    }

    const std::int64_t ar = 2 * a.row + 1, ac = 2 * a.col + 1;
    const std::int64_t dr = 2 * static_cast<std::int64_t>(b.row - a.row);
    const std::int64_t dc = 2 * static_cast<std::int64_t>(b.col - a.col);
    const int step_r = dr > 0 ? 1 : -1;
    const int step_c = dc > 0 ? 1 : -1;
    const std::int64_t abs_dr = std::abs(dr), abs_dc = std::abs(dc);

    Cell cur = a;
    while (cur != b) {
        const std::int64_t row_boundary = 2 * cur.row + (step_r > 0 ? 2 : 0);
        const std::int64_t col_boundary = 2 * cur.col + (step_c > 0 ? 2 : 0);
        const std::int64_t t_row = std::abs(row_boundary - ar) * abs_dc;
        const std::int64_t t_col = std::abs(col_boundary - ac) * abs_dr;
        if (t_row < t_col) {
            cur.row += step_r;
            if (cur == b) return;
            const Cell group[1] = {cur};
            if (!visit(group, 1)) return;
        } else if (t_col < t_row) {
            cur.col += step_c;
            if (cur == b) return;
            const Cell group[1] = {cur};
            if (!visit(group, 1)) return;
        } else {
            // Exact corner: both flanking cells and the diagonal cell are
            // touched at the same instant.
            const Cell side1{cur.row + step_r, cur.col};
            const Cell side2{cur.row, cur.col + step_c};
            const Cell diag{cur.row + step_r, cur.col + step_c};
            Cell group[3];
            int n = 0;
            if (side1 != b) group[n++] = side1;
            if (side2 != b) group[n++] = side2;
            if (diag != b) group[n++] = diag;
            cur = diag;
            if (!visit(group, n)) return;
        }
    }
}

inline std::vector<Cell> supercover_between(Cell a, Cell b) {
    std::vector<Cell> out;
    walk_ray(a, b, [&](const Cell* cells, int n) {
        out.insert(out.end(), cells, cells + n);
        return true;
    });
    return out;
}

inline bool ray_blocked(const GroundTruthGrid& truth, Cell from, Cell to) {
    bool blocked = false;
    walk_ray(from, to, [&](const Cell* cells, int n) {
        for (int i = 0; i < n; ++i)
            if (truth.state(cells[i]) == CellState::Occupied) blocked = true;
        return !blocked;
    });
    return blocked;
}

// Heading from the most recent nonzero displacement; east by default.
inline std::pair<double, double> agent_heading(const AgentState& agent) {
    for (size_t i = agent.path.size(); i-- > 1;) {
        const int dr = agent.path[i].row - agent.path[i - 1].row;
        const int dc = agent.path[i].col - agent.path[i - 1].col;
        if (dr != 0 || dc != 0)
            return {static_cast<double>(dr), static_cast<double>(dc)};
    }
    return {0.0, 1.0};
}

inline bool within_fov(const AgentState& agent, Cell target, double fov_deg) {
    if (fov_deg >= 360.0 || target == agent.position) return true;
    const auto [hr, hc] = agent_heading(agent);
    const double vr = target.row - agent.position.row;
    const double vc = target.col - agent.position.col;
    const double cosang =
        (hr * vr + hc * vc) /
        (std::sqrt(hr * hr + hc * hc) * std::sqrt(vr * vr + vc * vc));
    const double half_rad = fov_deg * 0.5 * std::acos(-1.0) / 180.0;
    return cosang >= std::cos(half_rad) - 1e-12;
}

}  // namespace detail

// True when `target` is inside the sensor ball (Chebyshev radius), inside
// the field of view, and no Occupied cell lies strictly between it and the
// agent along the sight line.
inline bool cell_visible(const GroundTruthGrid& truth, const AgentState& agent,
                         Cell target, const SceneConfig& config) {
    if (!truth.in_bounds(target)) return false;
    if (chebyshev(agent.position, target) > config.sensor_range) return false;
    if (!detail::within_fov(agent, target, config.sensor_fov_deg)) return false;
    return !detail::ray_blocked(truth, agent.position, target);
}

// Reveal every visible cell with its ground-truth state. A blocked sight
// line additionally reveals the wall cell(s) that stop it first, the way a
// range sensor maps the surface its beam ends on; nothing past the first
// blocker is ever revealed. Previously known cells never change.
inline OccupancyGrid observe(const GroundTruthGrid& truth,
                             const OccupancyGrid& belief,
                             const AgentState& agent,
                             const SceneConfig& config) {
    if (!truth.is_free(agent.position))
        throw std::invalid_argument("observe: agent must stand on a Free cell");
    OccupancyGrid next = belief;
    const int range = config.sensor_range;
    for (int r = agent.position.row - range; r <= agent.position.row + range; ++r) {
        for (int c = agent.position.col - range; c <= agent.position.col + range; ++c) {
            const Cell target{r, c};
            if (!truth.in_bounds(target)) continue;
            if (!detail::within_fov(agent, target, config.sensor_fov_deg))
                continue;

            bool blocked = false;
            detail::walk_ray(agent.position, target,
                             [&](const Cell* cells, int n) {
                                 bool any = false;
                                 for (int i = 0; i < n; ++i)
                                     if (truth.state(cells[i]) ==
                                         CellState::Occupied)
                                         any = true;
                                 if (!any) return true;
                                 blocked = true;
                                 for (int i = 0; i < n; ++i)
                                     if (truth.state(cells[i]) ==
                                         CellState::Occupied)
                                         next.reveal(cells[i],
                                                     CellState::Occupied);
                                 return false;
                             });
            if (!blocked) next.reveal(target, truth.state(target));
        }
    }
    return next;
}

}  // namespace ptp

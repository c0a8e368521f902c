#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ptp/grid.hpp"
#include "ptp/rng.hpp"

namespace ptp {

struct SceneConfig {
    std::uint64_t rng_seed = 0;
    int room_count = 4;
    int corridor_width = 1;
    int dead_end_count = 2;
    int width = 48;
    int height = 48;
    int sensor_range = 8;
    double sensor_fov_deg = 360.0;

    void validate() const {
        if (width < 8 || height < 8)
            throw std::invalid_argument("scene: grid must be at least 8x8");
        if (room_count < 2)
            throw std::invalid_argument("scene: room_count must be >= 2");
        if (corridor_width < 1)
            throw std::invalid_argument("scene: corridor_width must be >= 1");
        if (dead_end_count < 0)
            throw std::invalid_argument("scene: dead_end_count must be >= 0");
        if (sensor_range < 2)
            throw std::invalid_argument("scene: sensor_range must be >= 2");
        if (sensor_fov_deg <= 0.0 || sensor_fov_deg > 360.0)
            throw std::invalid_argument("scene: sensor_fov must be in (0,360]");
    }
};

namespace detail {

struct Room {
    int row, col, h, w;  // interior cells [row, row+h) x [col, col+w)
    Cell center() const { return {row + h / 2, col + w / 2}; }
    bool contains(Cell c) const {
        return c.row >= row && c.row < row + h && c.col >= col && c.col < col + w;
    }
    // Placement keeps at least one wall cell between room interiors.
    bool crowds(const Room& o) const {
        return !(col + w + 1 <= o.col || o.col + o.w + 1 <= col ||
                 row + h + 1 <= o.row || o.row + o.h + 1 <= row);
    }
};

inline void carve(GroundTruthGrid& g, Cell c) {
    g.set_state(c, CellState::Free);
}

// Straight corridor segment of the configured width. Row-major or
// column-major legs; the extra width is carved toward increasing index and
// clipped to keep the outer boundary walls intact.
inline void carve_corridor(GroundTruthGrid& g, Cell from, Cell to, int width) {
    const int lo_r = std::min(from.row, to.row), hi_r = std::max(from.row, to.row);
    const int lo_c = std::min(from.col, to.col), hi_c = std::max(from.col, to.col);
    for (int r = lo_r; r <= hi_r; ++r) {
        for (int c = lo_c; c <= hi_c; ++c) {
            for (int k = 0; k < width; ++k) {
                int rr = r, cc = c;
                if (lo_r == hi_r) rr = std::min(r + k, g.height() - 2);
                else cc = std::min(c + k, g.width() - 2);
                carve(g, {rr, cc});
            }
        }
    }
}

// A two-rail dead-end corridor: wide enough to register as a frontier
// cluster, walled on every other side so the tip advances exploration by
// nothing once entered. Diagonal contact with other free space is harmless:
// it neither merges 4-connected regions nor opens a path (corner-cutting
// moves are forbidden).
inline int carve_dead_end(GroundTruthGrid& g, Rng& rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        Cell entry{rng.uniform_int(1, g.height() - 2),
                   rng.uniform_int(1, g.width() - 2)};
        if (!g.is_free(entry)) continue;
        Cell dir = kDir4[rng.uniform_int(0, 3)];
        Cell perp{dir.col, dir.row};
        if (rng.uniform01() < 0.5) { perp.row = -perp.row; perp.col = -perp.col; }
        Cell entry2{entry.row + perp.row, entry.col + perp.col};
        if (!g.in_bounds(entry2) || !g.is_free(entry2)) continue;
        const int want = rng.uniform_int(3, 7);

        std::vector<Cell> cells;
        int length = 0;
        for (int i = 1; i <= want; ++i) {
            Cell a{entry.row + dir.row * i, entry.col + dir.col * i};
            Cell b{a.row + perp.row, a.col + perp.col};
            auto carvable = [&](Cell c) {
                return c.row >= 1 && c.row <= g.height() - 2 && c.col >= 1 &&
                       c.col <= g.width() - 2 && !g.is_free(c);
            };
            if (!carvable(a) || !carvable(b)) break;
            // all 4-neighbours outside the stub and its mouth must be walls
            auto sealed = [&](Cell c) {
                for (Cell d : kDir4) {
                    Cell n{c.row + d.row, c.col + d.col};
                    if (!g.in_bounds(n)) continue;
                    const int back = i - 1, fwd = i + 1;
                    Cell pa{entry.row + dir.row * back, entry.col + dir.col * back};
                    Cell na{entry.row + dir.row * fwd, entry.col + dir.col * fwd};
                    Cell pb{pa.row + perp.row, pa.col + perp.col};
                    Cell nb{na.row + perp.row, na.col + perp.col};
                    if (n == pa || n == na || n == pb || n == nb || n == a ||
                        n == b)
                        continue;
                    if (g.is_free(n)) return false;
                }
                return true;
            };
            if (!sealed(a) || !sealed(b)) break;
            cells.push_back(a);
            cells.push_back(b);
            length = i;
        }
        if (length < 3) continue;
        Cell beyond_a{entry.row + dir.row * (length + 1),
                      entry.col + dir.col * (length + 1)};
        Cell beyond_b{beyond_a.row + perp.row, beyond_a.col + perp.col};
        if ((g.in_bounds(beyond_a) && g.is_free(beyond_a)) ||
            (g.in_bounds(beyond_b) && g.is_free(beyond_b)))
            continue;
        for (Cell c : cells) carve(g, c);
        return 1;
    }
    return 0;
}

// Corridor tips: single free cells with one open side, or side-by-side
// pairs whose only other open side is backwards along the same direction.
inline int count_dead_ends(const GroundTruthGrid& g) {
    auto free_at = [&](Cell c) { return g.in_bounds(c) && g.is_free(c); };
    auto degree = [&](Cell c) {
        int open = 0;
        for (Cell d : kDir4)
            if (free_at({c.row + d.row, c.col + d.col})) ++open;
        return open;
    };

    int tips = 0;
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
            Cell a{r, c};
            if (!g.is_free(a)) continue;
            if (degree(a) == 1) {
                ++tips;
                continue;
            }
            // pair tip: scan right/down once so each pair counts once
            for (Cell p : {Cell{0, 1}, Cell{1, 0}}) {
                Cell b{r + p.row, c + p.col};
                if (!free_at(b) || degree(a) != 2 || degree(b) != 2) continue;
                for (Cell d : kDir4) {
                    if (d == p || (d.row == -p.row && d.col == -p.col)) continue;
                    Cell back_a{a.row + d.row, a.col + d.col};
                    Cell back_b{b.row + d.row, b.col + d.col};
                    if (free_at(back_a) && free_at(back_b)) ++tips;
                }
            }
        }
    }
    return tips;
}

inline std::vector<int> flood_fill4(const GroundTruthGrid& g, Cell start) {
    std::vector<int> dist(static_cast<size_t>(g.width()) * g.height(), -1);
    std::vector<Cell> queue{start};
    dist[g.index(start)] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        Cell cur = queue[head];
        for (Cell d : kDir4) {
            Cell n{cur.row + d.row, cur.col + d.col};
            if (!g.in_bounds(n) || !g.is_free(n) || dist[g.index(n)] >= 0)
                continue;
            dist[g.index(n)] = dist[g.index(cur)] + 1;
            queue.push_back(n);
        }
    }
    return dist;
}

}  // namespace detail

// Rooms-and-corridors world with planted dead ends and a goal region in the
// room farthest from the start. Identical config (including seed) yields an
// identical grid.
inline GroundTruthGrid generate_scene(const SceneConfig& config) {
    using namespace detail;
    config.validate();
    Rng rng(derive_seed(config.rng_seed, "scene-gen"));

    const int room_lo = 2;
    const int room_hi = std::clamp(std::min(config.width, config.height) / 4, 2, 9);

    for (int attempt = 0; attempt < 24; ++attempt) {
        GroundTruthGrid g(config.width, config.height);

        std::vector<Room> rooms;
        bool placed_all = true;
        for (int i = 0; i < config.room_count; ++i) {
            bool placed = false;
            for (int tries = 0; tries < 400 && !placed; ++tries) {
                Room r;
                r.h = rng.uniform_int(room_lo, room_hi);
                r.w = rng.uniform_int(room_lo, room_hi);
                if (r.h > config.height - 2 || r.w > config.width - 2) continue;
                r.row = rng.uniform_int(1, config.height - 1 - r.h);
                r.col = rng.uniform_int(1, config.width - 1 - r.w);
                bool overlaps = false;
                for (const Room& other : rooms)
                    if (r.crowds(other)) { overlaps = true; break; }
                if (overlaps) continue;
                rooms.push_back(r);
                placed = true;
            }
            if (!placed) { placed_all = false; break; }
        }
        if (!placed_all) continue;

        for (const Room& r : rooms)
            for (int rr = r.row; rr < r.row + r.h; ++rr)
                for (int cc = r.col; cc < r.col + r.w; ++cc)
                    carve(g, {rr, cc});

        // Chain the rooms with L-shaped corridors.
        for (size_t i = 1; i < rooms.size(); ++i) {
            Cell a = rooms[i - 1].center();
            Cell b = rooms[i].center();
            Cell elbow = rng.uniform01() < 0.5 ? Cell{a.row, b.col}
                                               : Cell{b.row, a.col};
            carve_corridor(g, a, elbow, config.corridor_width);
            carve_corridor(g, elbow, b, config.corridor_width);
        }

        int carved_dead_ends = 0;
        for (int i = 0; i < config.dead_end_count; ++i)
            carved_dead_ends += carve_dead_end(g, rng);
        if (carved_dead_ends < config.dead_end_count) continue;

        const Cell start = rooms[0].center();
        g.set_start(start);

        const std::vector<int> dist = flood_fill4(g, start);

        // All Free cells must form one component around the start.
        bool connected = true;
        for (int r = 0; r < g.height() && connected; ++r)
            for (int c = 0; c < g.width(); ++c)
                if (g.is_free({r, c}) && dist[g.index({r, c})] < 0) {
                    connected = false;
                    break;
                }
        if (!connected) continue;

        // Goal region: 3x3 patch (clipped to the room) around the centre of
        // the room farthest from the start.
        size_t goal_room = 0;
        int best = -1;
        for (size_t i = 1; i < rooms.size(); ++i) {
            int d = dist[g.index(rooms[i].center())];
            if (d > best) { best = d; goal_room = i; }
        }
        if (goal_room == 0) continue;
        const Room& gr = rooms[goal_room];
        Cell gc = gr.center();
        int goals = 0;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                Cell c{gc.row + dr, gc.col + dc};
                if (gr.contains(c) && g.is_free(c) && c != start) {
                    g.set_goal(c, true);
                    ++goals;
                }
            }
        }
        if (goals == 0) continue;

        if (count_dead_ends(g) < config.dead_end_count) continue;
        return g;
    }
    throw std::invalid_argument(
        "scene: generation infeasible for this config (rooms do not fit)");
}

}  // namespace ptp

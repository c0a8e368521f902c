#pragma once

#include <string>
#include <vector>

#include "ptp/grid.hpp"
#include "ptp/rng.hpp"

namespace ptp::test {

// '.' known Free, '#' known Occupied, '?' Unknown
inline OccupancyGrid belief_from(const std::vector<std::string>& rows) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows.at(0).size());
    OccupancyGrid g(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            switch (rows[r].at(c)) {
                case '.': g.reveal({r, c}, CellState::Free); break;
                case '#': g.reveal({r, c}, CellState::Occupied); break;
                case '?': break;
                default: throw std::invalid_argument("belief_from: bad char");
            }
        }
    }
    return g;
}

// '.' Free, '#' Occupied, 'G' Free goal, 'S' Free start
inline GroundTruthGrid truth_from(const std::vector<std::string>& rows) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows.at(0).size());
    GroundTruthGrid g(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const char ch = rows[r].at(c);
            if (ch == '#') continue;
            g.set_state({r, c}, CellState::Free);
        }
    }
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const char ch = rows[r].at(c);
            if (ch == 'G') g.set_goal({r, c}, true);
            if (ch == 'S') g.set_start({r, c});
        }
    }
    return g;
}

// Random belief with independent cell states; the source cell is forced
// known-Free.
inline OccupancyGrid random_belief(int w, int h, Rng& rng, Cell source,
                                   double p_free = 0.55, double p_occ = 0.2) {
    OccupancyGrid g(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double u = rng.uniform01();
            if (u < p_free) g.reveal({r, c}, CellState::Free);
            else if (u < p_free + p_occ) g.reveal({r, c}, CellState::Occupied);
        }
    }
    OccupancyGrid out(w, h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            Cell cell{r, c};
            if (cell == source) out.reveal(cell, CellState::Free);
            else if (g.known(cell)) out.reveal(cell, g.state(cell));
        }
    return out;
}

// Random ground truth (boundary walls kept); start forced Free.
inline GroundTruthGrid random_truth(int w, int h, Rng& rng,
                                    double p_occupied = 0.25) {
    GroundTruthGrid g(w, h);
    for (int r = 1; r < h - 1; ++r)
        for (int c = 1; c < w - 1; ++c)
            if (rng.uniform01() >= p_occupied)
                g.set_state({r, c}, CellState::Free);
    g.set_state({h / 2, w / 2}, CellState::Free);
    g.set_start({h / 2, w / 2});
    return g;
}

}  // namespace ptp::test

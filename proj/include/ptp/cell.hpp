#pragma once

#include <compare>
#include <cstdlib>

namespace ptp {

struct Cell {
    int row = 0;
    int col = 0;
    auto operator<=>(const Cell&) const = default;
};

inline constexpr Cell kDir4[4] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
inline constexpr Cell kDir8[8] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                  {0, 1},   {1, -1}, {1, 0},  {1, 1}};

inline constexpr double kDiagonalCost = 1.4142135623730951;

inline int chebyshev(Cell a, Cell b) {
    return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

inline bool adjacent8(Cell a, Cell b) {
    return a != b && chebyshev(a, b) == 1;
}

// Cost of one grid move between 8-adjacent (or identical) cells.
inline double step_cost(Cell a, Cell b) {
    if (a == b) return 0.0;
    return (a.row != b.row && a.col != b.col) ? kDiagonalCost : 1.0;
}

}  // namespace ptp

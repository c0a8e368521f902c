#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ptp/frontier.hpp"

using namespace ptp;
using namespace ptp::test;

TEST_CASE("fully known belief has no frontiers") {
    const OccupancyGrid belief = belief_from({
        "########",
        "#......#",
        "#......#",
        "########",
    });
    const AgentState agent = AgentState::at({1, 1});
    REQUIRE(detect_frontiers(belief, agent, 1).empty());
}

TEST_CASE("a single doorway yields exactly one frontier spanning it") {
    // 12x12: room explored, space beyond the doorway unknown.
    const OccupancyGrid belief = belief_from({
        "############",
        "#....#??????",
        "#....#??????",
        "#.....??????",
        "#.....??????",
        "#....#??????",
        "#....#??????",
        "#....#??????",
        "############",
        "????????????",
        "????????????",
        "????????????",
    });
    const AgentState agent = AgentState::at({3, 2});
    const std::vector<Frontier> frontiers = detect_frontiers(belief, agent, 2);
    REQUIRE(frontiers.size() == 1);
    REQUIRE(frontiers[0].cells == std::vector<Cell>{{3, 5}, {4, 5}});
    REQUIRE(frontiers[0].id == 0);
    REQUIRE(frontiers[0].representative == Cell{3, 5});
    REQUIRE(frontiers[0].unknown_mass >= 2);
}

TEST_CASE("two openings give two frontiers in lexicographic order") {
    const OccupancyGrid belief = belief_from({
        "??????????",
        "##..##..##",
        "#........#",
        "#........#",
        "##########",
    });
    const AgentState agent = AgentState::at({3, 4});
    const std::vector<Frontier> frontiers = detect_frontiers(belief, agent, 2);
    REQUIRE(frontiers.size() == 2);
    REQUIRE(frontiers[0].cells == std::vector<Cell>{{1, 2}, {1, 3}});
    REQUIRE(frontiers[1].cells == std::vector<Cell>{{1, 6}, {1, 7}});
    for (size_t i = 1; i < frontiers.size(); ++i)
        REQUIRE(frontiers[i - 1].representative < frontiers[i].representative);
    for (size_t i = 0; i < frontiers.size(); ++i)
        REQUIRE(frontiers[i].id == static_cast<int>(i));
}

TEST_CASE("clusters below min_cluster are discarded") {
    const OccupancyGrid belief = belief_from({
        "#########",
        "#......?#",
        "#.#####.#",
        "#.#???#.#",
        "#.#???#.#",
        "#.......#",
        "#########",
    });
    const AgentState agent = AgentState::at({1, 1});
    const std::vector<Frontier> all = detect_frontiers(belief, agent, 1);
    REQUIRE(all.size() == 2);  // one 2-cell cluster, one 3-cell cluster
    const std::vector<Frontier> big_only = detect_frontiers(belief, agent, 3);
    REQUIRE(big_only.size() == 1);
    REQUIRE(big_only[0].cells.size() == 3);
    REQUIRE(big_only[0].cells ==
            std::vector<Cell>{{5, 3}, {5, 4}, {5, 5}});
}

TEST_CASE("unreachable clusters are dropped") {
    const OccupancyGrid belief = belief_from({
        "....#..?",
        "....#..?",
        "....#..?",
        "....#..?",
    });
    const AgentState agent = AgentState::at({0, 0});
    // the frontier cells right of the wall cannot be reached
    REQUIRE(detect_frontiers(belief, agent, 1).empty());
}

TEST_CASE("representative is the geodesically closest cluster cell") {
    const OccupancyGrid belief = belief_from({
        ".....?",
        ".....?",
        ".....?",
        ".....?",
        ".....?",
    });
    const AgentState agent = AgentState::at({2, 0});
    const std::vector<Frontier> frontiers = detect_frontiers(belief, agent, 1);
    REQUIRE(frontiers.size() == 1);
    REQUIRE(frontiers[0].representative == Cell{2, 4});
    REQUIRE(frontiers[0].distance == Catch::Approx(4.0).margin(1e-12));
    REQUIRE(frontiers[0].cells.size() == 5);
}

TEST_CASE("frontier correctness properties on random beliefs") {
    Rng rng(555);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 8 + static_cast<int>(rng.uniform_int(8ull));
        const int h = 8 + static_cast<int>(rng.uniform_int(8ull));
        const Cell src{h / 2, w / 2};
        const OccupancyGrid belief = random_belief(w, h, rng, src, 0.5, 0.15);
        const DistanceField field = geodesic_field(belief, src);
        const std::vector<Frontier> frontiers = detect_frontiers(belief, 1, field);

        std::vector<Cell> reported;
        for (const Frontier& f : frontiers) {
            for (Cell c : f.cells) {
                REQUIRE(belief.known_free(c));
                bool touches_unknown = false;
                for (Cell d : kDir4) {
                    Cell n{c.row + d.row, c.col + d.col};
                    if (belief.in_bounds(n) && !belief.known(n))
                        touches_unknown = true;
                }
                REQUIRE(touches_unknown);
                reported.push_back(c);
            }
            REQUIRE(field.reachable(f.representative));
            REQUIRE(std::find(f.cells.begin(), f.cells.end(),
                              f.representative) != f.cells.end());
            REQUIRE(f.unknown_mass >= 1);
        }

        // no reachable known-Free cell with a cardinal Unknown neighbour is
        // missing from the union
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                Cell cell{r, c};
                if (!belief.known_free(cell)) continue;
                bool edge_unknown = false;
                for (Cell d : kDir4) {
                    Cell n{r + d.row, c + d.col};
                    if (belief.in_bounds(n) && !belief.known(n))
                        edge_unknown = true;
                }
                if (!edge_unknown || !field.reachable(cell)) continue;
                INFO("trial " << trial << " cell (" << r << "," << c << ")");
                REQUIRE(std::find(reported.begin(), reported.end(), cell) !=
                        reported.end());
            }
        }

        // determinism
        const std::vector<Frontier> again = detect_frontiers(belief, 1, field);
        REQUIRE(again.size() == frontiers.size());
        for (size_t i = 0; i < again.size(); ++i) {
            REQUIRE(again[i].cells == frontiers[i].cells);
            REQUIRE(again[i].representative == frontiers[i].representative);
            REQUIRE(again[i].unknown_mass == frontiers[i].unknown_mass);
        }
    }
}

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ptp/sensor.hpp"

using namespace ptp;
using namespace ptp::test;

namespace {

SceneConfig sensor_config(int range, double fov = 360.0) {
    SceneConfig cfg;
    cfg.sensor_range = range;
    cfg.sensor_fov_deg = fov;
    return cfg;
}

}  // namespace

TEST_CASE("observe is idempotent on full knowledge") {
    const GroundTruthGrid truth = truth_from({
        "##########",
        "#........#",
        "#..###...#",
        "#........#",
        "#........#",
        "#...#....#",
        "#........#",
        "##########",
    });
    OccupancyGrid belief(truth.width(), truth.height());
    for (int r = 0; r < truth.height(); ++r)
        for (int c = 0; c < truth.width(); ++c)
            belief.reveal({r, c}, truth.state({r, c}));

    const AgentState agent = AgentState::at({3, 3});
    const OccupancyGrid after = observe(truth, belief, agent, sensor_config(4));
    REQUIRE(after == belief);
}

TEST_CASE("empty room centre sees the whole Chebyshev ball") {
    // 9x9 free interior, agent dead centre, range 4: every interior cell is
    // in range and unobstructed, walls at Chebyshev distance 5 stay unknown.
    std::vector<std::string> rows(11, std::string(11, '.'));
    for (int i = 0; i < 11; ++i) {
        rows[0][i] = rows[10][i] = '#';
        rows[i][0] = rows[i][10] = '#';
    }
    const GroundTruthGrid truth = truth_from(rows);
    OccupancyGrid belief(11, 11);
    const AgentState agent = AgentState::at({5, 5});

    const OccupancyGrid after = observe(truth, belief, agent, sensor_config(4));
    for (int r = 0; r < 11; ++r) {
        for (int c = 0; c < 11; ++c) {
            const bool in_ball = chebyshev({r, c}, {5, 5}) <= 4;
            REQUIRE(after.known({r, c}) == in_ball);
        }
    }
}

TEST_CASE("cells behind a wall stay unknown") {
    const GroundTruthGrid truth = truth_from({
        "##########",
        "#........#",
        "#........#",
        "#...#....#",
        "#........#",
        "#........#",
        "#........#",
        "##########",
    });
    const AgentState agent = AgentState::at({3, 2});  // wall directly east at (3,4)
    OccupancyGrid belief(truth.width(), truth.height());
    const SceneConfig cfg = sensor_config(6);
    const OccupancyGrid after = observe(truth, belief, agent, cfg);

    REQUIRE(after.known({3, 4}));  // the wall itself is visible
    REQUIRE(after.state({3, 4}) == CellState::Occupied);
    for (int c = 5; c < 9; ++c) REQUIRE_FALSE(after.known({3, c}));

    // Every revealed cell agrees with the brute-force ray oracle.
    for (int r = 0; r < truth.height(); ++r)
        for (int c = 0; c < truth.width(); ++c)
            REQUIRE(after.known({r, c}) ==
                    oracle_revealed(truth, agent.position, {r, c},
                                    cfg.sensor_range));
}

TEST_CASE("visibility matches the segment-geometry oracle on random grids") {
    Rng rng(20240817);
    for (int trial = 0; trial < 40; ++trial) {
        const int w = 9 + static_cast<int>(rng.uniform_int(6ull));
        const int h = 9 + static_cast<int>(rng.uniform_int(6ull));
        const GroundTruthGrid truth = random_truth(w, h, rng, 0.3);
        const AgentState agent = AgentState::at(truth.start());
        const SceneConfig cfg = sensor_config(7);

        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                const bool lib = cell_visible(truth, agent, {r, c}, cfg);
                const bool ora =
                    oracle_visible(truth, agent.position, {r, c}, cfg.sensor_range);
                INFO("trial " << trial << " cell (" << r << "," << c << ")");
                REQUIRE(lib == ora);
            }
        }
    }
}

TEST_CASE("observation matches the full revelation oracle on random grids") {
    // Revelation = clear sight line, or first wall a sight line ends on;
    // the oracle derives both from segment geometry (slab clipping), the
    // library from the integer supercover walk.
    Rng rng(424243);
    for (int trial = 0; trial < 25; ++trial) {
        const int w = 9 + static_cast<int>(rng.uniform_int(5ull));
        const int h = 9 + static_cast<int>(rng.uniform_int(5ull));
        const GroundTruthGrid truth = random_truth(w, h, rng, 0.3);
        const AgentState agent = AgentState::at(truth.start());
        const SceneConfig cfg = sensor_config(6);

        const OccupancyGrid after =
            observe(truth, OccupancyGrid(w, h), agent, cfg);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                INFO("trial " << trial << " cell (" << r << "," << c << ")");
                REQUIRE(after.known({r, c}) ==
                        oracle_revealed(truth, agent.position, {r, c},
                                        cfg.sensor_range));
            }
        }
    }
}

TEST_CASE("observe never contradicts ground truth and only grows knowledge") {
    Rng rng(99);
    const GroundTruthGrid truth = random_truth(14, 12, rng, 0.25);
    OccupancyGrid belief(truth.width(), truth.height());
    AgentState agent = AgentState::at(truth.start());
    const SceneConfig cfg = sensor_config(4);

    int prev_known = 0;
    for (int step = 0; step < 6; ++step) {
        belief = observe(truth, belief, agent, cfg);
        REQUIRE(belief.known_count() >= prev_known);
        prev_known = belief.known_count();
        for (int r = 0; r < truth.height(); ++r)
            for (int c = 0; c < truth.width(); ++c)
                if (belief.known({r, c}))
                    REQUIRE(belief.state({r, c}) == truth.state({r, c}));
        // hop the agent to some other known-Free cell
        for (int r = 0; r < truth.height(); ++r)
            for (int c = 0; c < truth.width(); ++c)
                if (belief.known_free({r, c})) agent.position = {r, c};
        agent.path.push_back(agent.position);
    }
}

TEST_CASE("limited field of view clips what the sensor reveals") {
    std::vector<std::string> rows(11, std::string(11, '.'));
    for (int i = 0; i < 11; ++i) {
        rows[0][i] = rows[10][i] = '#';
        rows[i][0] = rows[i][10] = '#';
    }
    const GroundTruthGrid truth = truth_from(rows);

    AgentState agent = AgentState::at({5, 4});
    agent.path = {{5, 3}, {5, 4}};  // moving east
    OccupancyGrid belief(11, 11);
    const OccupancyGrid after =
        observe(truth, belief, agent, sensor_config(4, 90.0));

    REQUIRE(after.known({5, 8}));        // straight ahead
    REQUIRE(after.known({4, 7}));        // within the 45-degree half-angle
    REQUIRE_FALSE(after.known({5, 1}));  // directly behind
    REQUIRE_FALSE(after.known({1, 4}));  // perpendicular
}

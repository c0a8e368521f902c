#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ptp/calibration.hpp"

using namespace ptp;
using namespace ptp::test;

TEST_CASE("normalize_step divides by the maximum") {
    const std::vector<double> out =
        normalize_step(std::vector<double>{0.5, 0.3, 0.2});
    REQUIRE(out[0] == 1.0);
    REQUIRE(out[1] == Catch::Approx(0.6).margin(1e-15));
    REQUIRE(out[2] == Catch::Approx(0.4).margin(1e-15));

    REQUIRE(normalize_step(std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
            std::vector<double>{1.0, 1.0, 1.0, 1.0});
    REQUIRE(normalize_step(std::vector<double>{0.9}) == std::vector<double>{1.0});

    REQUIRE_THROWS_AS(normalize_step(std::vector<double>{}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(normalize_step(std::vector<double>{0.3, 0.0}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(normalize_step(std::vector<double>{0.3, -0.1}),
                      std::invalid_argument);
}

TEST_CASE("normalize_step is invariant to positive scaling") {
    Rng rng(606);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t k = 1 + rng.uniform_int(6ull);
        std::vector<double> conf(k);
        for (double& c : conf) c = rng.uniform(1e-6, 1.0);
        const double lambda = std::exp(rng.uniform(-6.0, 6.0));
        std::vector<double> scaled = conf;
        for (double& c : scaled) c *= lambda;

        const std::vector<double> a = normalize_step(conf);
        const std::vector<double> b = normalize_step(scaled);
        for (size_t i = 0; i < k; ++i)
            REQUIRE(b[i] == Catch::Approx(a[i]).margin(1e-12));
        REQUIRE(*std::max_element(a.begin(), a.end()) == 1.0);
        for (double s : a) {
            REQUIRE(s > 0.0);
            REQUIRE(s <= 1.0);
        }
    }
}

namespace {

CalibrationSample sample(double score, bool bad, bool argmax = false) {
    static int counter = 0;
    CalibrationSample s;
    s.episode_id = "ep";
    s.step_index = counter / 4;
    s.frontier_id = counter % 4;
    ++counter;
    s.score = score;
    s.is_bad = bad;
    s.is_step_argmax = argmax;
    return s;
}

}  // namespace

TEST_CASE("build_pool filters to bad non-argmax scores") {
    const std::vector<CalibrationSample> samples = {
        sample(0.4, true, false),
        sample(1.0, true, true),   // argmax stays out even though bad
        sample(0.7, true, false),
        sample(0.9, false, false),
    };
    const EcdfModel model = build_pool(samples);
    REQUIRE(model.sample_size() == 2);
    REQUIRE(model.scores() == std::vector<double>{0.4, 0.7});

    const std::vector<CalibrationSample> all_good = {sample(0.5, false),
                                                     sample(0.6, false)};
    REQUIRE_THROWS_AS(build_pool(all_good), std::invalid_argument);
}

TEST_CASE("a paper-sized labeled set yields a pool no larger than its bad part") {
    // ~5,500 frontiers of which ~3,600 are bad; argmax exclusion keeps the
    // pool at or under the bad count.
    Rng rng(5500);
    std::vector<CalibrationSample> samples;
    int bad_count = 0;
    for (int step = 0; step < 1375; ++step) {
        const size_t k = 4;
        std::vector<double> conf(k);
        for (double& c : conf) c = rng.uniform(0.05, 1.0);
        const std::vector<double> scores = normalize_step(conf);
        const size_t argmax = step_argmax(scores);
        for (size_t i = 0; i < k; ++i) {
            CalibrationSample s;
            s.episode_id = "cal";
            s.step_index = step;
            s.frontier_id = static_cast<int>(i);
            s.score = scores[i];
            s.is_bad = rng.uniform01() < 3600.0 / 5500.0;
            s.is_step_argmax = i == argmax;
            if (s.is_bad) ++bad_count;
            samples.push_back(s);
        }
    }
    REQUIRE(samples.size() == 5500);
    const EcdfModel model = build_pool(samples);
    REQUIRE(model.sample_size() <= bad_count);
    REQUIRE(model.sample_size() >= bad_count - 1375);
}

TEST_CASE("ecdf evaluates counts with the step convention") {
    const EcdfModel model(std::vector<double>{0.2, 0.4, 0.6, 0.8});
    REQUIRE(model.ecdf(0.5) == 0.5);
    REQUIRE(model.ecdf(0.1) == 0.0);
    REQUIRE(model.ecdf(0.8) == 1.0);
    REQUIRE(model.ecdf(0.4) == 0.5);    // right-continuous: counts <= x
    REQUIRE(model.ecdf(0.3999) == 0.25);
}

TEST_CASE("p-value matches the smoothed complementary ecdf formula") {
    const EcdfModel model(std::vector<double>{0.2, 0.4, 0.6, 0.8});
    REQUIRE(model.p_value(0.5) == Catch::Approx(0.6).margin(1e-15));
    REQUIRE(model.p_value(1.0) == Catch::Approx(0.2).margin(1e-15));
    REQUIRE(model.p_value(0.1) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE_THROWS_AS(model.p_value(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(model.p_value(1.5), std::invalid_argument);
}

TEST_CASE("p-value law on random pools: range, monotonicity, counting oracle") {
    Rng rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t n = 1 + rng.uniform_int(20ull);
        std::vector<double> pool(n);
        for (double& s : pool) s = rng.uniform(1e-3, 1.0);
        const EcdfModel model(pool);
        const int n_int = model.sample_size();

        double prev_score = 0.0, prev_p = 2.0;
        std::vector<double> queries;
        for (int q = 0; q < 40; ++q) queries.push_back(rng.uniform(1e-3, 1.0));
        std::sort(queries.begin(), queries.end());
        for (double s : queries) {
            const double p = model.p_value(s);
            REQUIRE(p >= 1.0 / (n_int + 1));
            REQUIRE(p <= 1.0);
            REQUIRE(p == oracle_p_value(pool, s));          // bit-exact
            REQUIRE(model.ecdf(s) == oracle_ecdf(pool, s)); // bit-exact
            if (s >= prev_score) REQUIRE(p <= prev_p);
            prev_score = s;
            prev_p = p;
        }

        // consistency between the two operations
        for (double s : queries)
            REQUIRE(model.p_value(s) ==
                    Catch::Approx((1.0 + n_int * (1.0 - model.ecdf(s))) /
                                  (1.0 + n_int))
                        .margin(1e-12));
    }
}

TEST_CASE("label noise flips the requested count deterministically") {
    std::vector<CalibrationSample> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(sample(0.5, i % 2 == 0));

    Rng rng0(42);
    const auto none = inject_label_noise(samples, 0.0, rng0);
    for (size_t i = 0; i < samples.size(); ++i)
        REQUIRE(none[i].is_bad == samples[i].is_bad);

    Rng rng1(42);
    const auto all = inject_label_noise(samples, 1.0, rng1);
    for (size_t i = 0; i < samples.size(); ++i)
        REQUIRE(all[i].is_bad == !samples[i].is_bad);

    Rng rng2(42);
    const auto five = inject_label_noise(samples, 0.05, rng2);
    int flipped = 0;
    for (size_t i = 0; i < samples.size(); ++i)
        if (five[i].is_bad != samples[i].is_bad) ++flipped;
    REQUIRE(flipped == 5);

    Rng rng3(42);
    const auto five_again = inject_label_noise(samples, 0.05, rng3);
    for (size_t i = 0; i < samples.size(); ++i)
        REQUIRE(five_again[i].is_bad == five[i].is_bad);

    // same stream: the 5% flip set nests inside the 10% flip set
    Rng rng4(42);
    const auto ten = inject_label_noise(samples, 0.10, rng4);
    for (size_t i = 0; i < samples.size(); ++i)
        if (five[i].is_bad != samples[i].is_bad)
            REQUIRE(ten[i].is_bad != samples[i].is_bad);
}

TEST_CASE("oracle labeler applies the relevance and novelty clauses") {
    const LabelerConfig cfg;
    REQUIRE(oracle_label({0, 4, +10.0, 0.9}, cfg));        // leads away
    REQUIRE(oracle_label({1, 4, -5.0, 0.01}, cfg));        // nothing new
    REQUIRE_FALSE(oracle_label({2, 4, -5.0, 0.5}, cfg));   // goal-ward, novel
    REQUIRE_FALSE(oracle_label({3, 4, 0.0, 0.05}, cfg));   // both at margin
}

TEST_CASE("ecdf file round trip preserves every score bit") {
    Rng rng(99);
    std::vector<double> pool(37);
    for (double& s : pool) s = rng.uniform(1e-6, 1.0);
    const EcdfModel model(pool);

    std::stringstream buffer;
    save_ecdf(model, buffer);
    const EcdfModel back = load_ecdf(buffer);
    REQUIRE(back == model);

    std::stringstream bad_header("junk 3\n0.1\n0.2\n0.3\n");
    REQUIRE_THROWS_AS(load_ecdf(bad_header), std::runtime_error);
    std::stringstream bad_count("ecdf-v1 5\n0.1\n0.2\n");
    REQUIRE_THROWS_AS(load_ecdf(bad_count), std::runtime_error);
    std::stringstream unsorted("ecdf-v1 2\n0.5\n0.2\n");
    REQUIRE_THROWS_AS(load_ecdf(unsorted), std::runtime_error);
}

TEST_CASE("calibration sample log round trips") {
    std::vector<CalibrationSample> samples = {
        {"ep-1", 0, 0, 1.0, false, true},
        {"ep-1", 0, 1, 0.37, true, false},
        {"ep-2", 4, 2, 0.925, true, false},
    };
    std::stringstream buffer;
    save_samples(samples, buffer);
    const std::vector<CalibrationSample> back = load_samples(buffer);
    REQUIRE(back.size() == samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        REQUIRE(back[i].episode_id == samples[i].episode_id);
        REQUIRE(back[i].step_index == samples[i].step_index);
        REQUIRE(back[i].frontier_id == samples[i].frontier_id);
        REQUIRE(back[i].score == samples[i].score);
        REQUIRE(back[i].is_bad == samples[i].is_bad);
        REQUIRE(back[i].is_step_argmax == samples[i].is_step_argmax);
    }
}

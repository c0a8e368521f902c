#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptp/episode.hpp"
#include "ptp/grid.hpp"
#include "ptp/planner.hpp"
#include "ptp/rng.hpp"
#include "ptp/scene.hpp"

namespace ptp {

struct EpisodeMetrics {
    std::vector<double> coverage_curve;
    double coverage_auc = 0.0;
    double curvature_deg = 0.0;
    double spl = 0.0;
    double success_score = 0.0;
    int steps_used = 0;
    int oscillation_count = 0;
};

// Fraction of reachable Free cells known at each step.
inline std::vector<double> coverage_curve(const EpisodeLog& log,
                                          const GroundTruthGrid& truth) {
    const std::vector<int> dist = detail::flood_fill4(truth, truth.start());
    int reachable_free = 0;
    for (int r = 0; r < truth.height(); ++r)
        for (int c = 0; c < truth.width(); ++c)
            if (truth.is_free({r, c}) && dist[truth.index({r, c})] >= 0)
                ++reachable_free;

    std::vector<double> curve;
    curve.reserve(log.steps.size());
    for (const StepRecord& s : log.steps)
        curve.push_back(std::clamp(
            static_cast<double>(s.known_free_cells) / reachable_free, 0.0, 1.0));
    return curve;
}

// Mean of the curve over the fixed step budget; an early-terminated episode
// holds its final value for the remaining steps.
inline double coverage_auc(std::span<const double> curve, int step_budget) {
    if (step_budget <= 0) return 0.0;
    const double pad = curve.empty() ? 0.0 : curve.back();
    double sum = 0.0;
    for (int t = 0; t < step_budget; ++t)
        sum += t < static_cast<int>(curve.size()) ? curve[t] : pad;
    return sum / step_budget;
}

// Mean absolute turning angle (degrees) between consecutive displacement
// vectors; zero-length segments are skipped.
inline double curvature_deg(std::span<const Cell> positions) {
    std::vector<std::pair<double, double>> segments;
    for (size_t i = 1; i < positions.size(); ++i) {
        const double dr = positions[i].row - positions[i - 1].row;
        const double dc = positions[i].col - positions[i - 1].col;
        if (dr != 0.0 || dc != 0.0) segments.emplace_back(dr, dc);
    }
    if (segments.size() < 2) return 0.0;
    double total = 0.0;
    for (size_t i = 1; i < segments.size(); ++i) {
        const auto [r1, c1] = segments[i - 1];
        const auto [r2, c2] = segments[i];
        const double cross = r1 * c2 - c1 * r2;
        const double dot = r1 * r2 + c1 * c2;
        total += std::atan2(std::abs(cross), dot) * 180.0 / std::numbers::pi;
    }
    return total / static_cast<double>(segments.size() - 1);
}

// Decision-step positions: where each decision was made, plus where the
// agent ended up.
inline std::vector<Cell> decision_positions(const EpisodeLog& log) {
    std::vector<Cell> out;
    out.reserve(log.steps.size() + 1);
    for (const StepRecord& s : log.steps) out.push_back(s.agent_position);
    out.push_back(log.final_position);
    return out;
}

inline double octile_length(std::span<const Cell> path) {
    double total = 0.0;
    for (size_t i = 1; i < path.size(); ++i) {
        if (!(path[i] == path[i - 1] || adjacent8(path[i], path[i - 1])))
            throw std::invalid_argument("octile_length: non-adjacent move");
        total += step_cost(path[i - 1], path[i]);
    }
    return total;
}

// Graded success = best goal-region visibility reached during the episode;
// SPL weighs it by shortest-path efficiency over the travelled path.
inline std::pair<double, double> graded_spl(const EpisodeLog& log,
                                            const GroundTruthGrid& truth) {
    const std::vector<Cell> goals = truth.goal_cells();
    if (goals.empty()) throw std::invalid_argument("graded_spl: no goal region");
    const DistanceField goal_field = truth_distance_field(truth, goals);
    if (!goal_field.reachable(truth.start()))
        throw std::invalid_argument("graded_spl: goal unreachable from start");
    const double l_star = goal_field.at(truth.start());

    double success = 0.0;
    for (const StepRecord& s : log.steps)
        success = std::max(success, static_cast<double>(s.known_goal_cells) /
                                        static_cast<double>(goals.size()));

    const double travelled = octile_length(log.path);
    const double spl = l_star == 0.0
                           ? success
                           : success * l_star / std::max(l_star, travelled);
    return {success, spl};
}

// Direction-reversal events: steps whose bearing to the selected frontier
// representative turns by more than 90 degrees since the previous selection.
inline int oscillation_count(const EpisodeLog& log) {
    int count = 0;
    bool have_prev = false;
    long long pr = 0, pc = 0;
    for (const StepRecord& s : log.steps) {
        if (s.selected_id < 0) continue;
        const long long vr = s.selected_representative.row - s.agent_position.row;
        const long long vc = s.selected_representative.col - s.agent_position.col;
        if (vr == 0 && vc == 0) continue;
        if (have_prev && pr * vr + pc * vc < 0) ++count;
        pr = vr;
        pc = vc;
        have_prev = true;
    }
    return count;
}

inline EpisodeMetrics compute_metrics(const EpisodeLog& log,
                                      const GroundTruthGrid& truth) {
    EpisodeMetrics m;
    m.coverage_curve = coverage_curve(log, truth);
    m.coverage_auc = coverage_auc(m.coverage_curve, log.step_budget);
    m.curvature_deg = curvature_deg(decision_positions(log));
    const auto [success, spl] = graded_spl(log, truth);
    m.success_score = success;
    m.spl = spl;
    m.steps_used = log.steps_used();
    m.oscillation_count = oscillation_count(log);
    return m;
}

// --- aggregation ---------------------------------------------------------

struct BootstrapCi {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

inline double mean_of(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

// 95% percentile bootstrap over episode means.
inline BootstrapCi bootstrap_mean_ci(std::span<const double> values,
                                     int resamples, std::uint64_t seed) {
    BootstrapCi ci;
    ci.mean = mean_of(values);
    if (values.empty() || resamples <= 0) return ci;
    Rng rng(seed);
    std::vector<double> means(resamples);
    for (int b = 0; b < resamples; ++b) {
        double sum = 0.0;
        for (size_t i = 0; i < values.size(); ++i)
            sum += values[rng.uniform_int(values.size())];
        means[b] = sum / static_cast<double>(values.size());
    }
    std::sort(means.begin(), means.end());
    const size_t lo_idx = static_cast<size_t>(std::floor(0.025 * resamples));
    const size_t hi_idx =
        std::min<size_t>(resamples - 1,
                         static_cast<size_t>(std::ceil(0.975 * resamples)) - 1);
    ci.lo = means[lo_idx];
    ci.hi = means[hi_idx];
    return ci;
}

}  // namespace ptp

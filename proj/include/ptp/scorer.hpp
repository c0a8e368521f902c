#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptp/frontier.hpp"
#include "ptp/grid.hpp"
#include "ptp/planner.hpp"
#include "ptp/rng.hpp"

namespace ptp {

// Ground-truth-aware descriptor of one frontier, visible only to the oracle
// scorer and the labeler, never to the planner.
struct FrontierObservation {
    int frontier_id = 0;
    int unknown_mass = 1;
    // Geodesic distance change to the nearest goal cell if the agent stood
    // on the representative: positive leads away from the goal.
    double goal_delta = 0.0;
    // Fraction of cells within sensor range of the representative that are
    // still Unknown in the belief.
    double novelty = 0.0;
};

struct ScoreVector {
    int step_index = 0;
    std::vector<double> logits;
    std::vector<double> confidences;
};

struct OracleScorerConfig {
    std::uint64_t rng_seed = 0;
    double relevance_weight = 4.0;
    double novelty_weight = 1.0;
    double temperature = 1.0;   // < 1 sharpens the softmax (overconfidence)
    double noise_sigma = 0.0;   // per-logit Gaussian perturbation
    double distractor_prob = 0.0;  // chance a step's away-leading frontier
                                   // is boosted above the maximum

    void validate() const {
        if (temperature <= 0.0)
            throw std::invalid_argument("scorer: temperature must be > 0");
        if (noise_sigma < 0.0)
            throw std::invalid_argument("scorer: noise_sigma must be >= 0");
        if (distractor_prob < 0.0 || distractor_prob > 1.0)
            throw std::invalid_argument("scorer: distractor_prob in [0,1]");
    }
};

inline std::vector<double> softmax_confidences(std::span<const double> logits) {
    if (logits.empty())
        throw std::invalid_argument("softmax: empty logit vector");
    double max_logit = logits[0];
    for (double z : logits) {
        if (!std::isfinite(z))
            throw std::invalid_argument("softmax: non-finite logit");
        max_logit = std::max(max_logit, z);
    }
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - max_logit);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

inline FrontierObservation make_observation(const Frontier& frontier,
                                            const AgentState& agent,
                                            const OccupancyGrid& belief,
                                            const DistanceField& goal_field,
                                            int sensor_range) {
    FrontierObservation obs;
    obs.frontier_id = frontier.id;
    obs.unknown_mass = frontier.unknown_mass;
    obs.goal_delta =
        goal_field.at(frontier.representative) - goal_field.at(agent.position);

    int total = 0, unknown = 0;
    const Cell rep = frontier.representative;
    for (int r = rep.row - sensor_range; r <= rep.row + sensor_range; ++r) {
        for (int c = rep.col - sensor_range; c <= rep.col + sensor_range; ++c) {
            if (!belief.in_bounds({r, c})) continue;
            ++total;
            if (!belief.known({r, c})) ++unknown;
        }
    }
    obs.novelty = total > 0 ? static_cast<double>(unknown) / total : 0.0;
    return obs;
}

inline std::vector<FrontierObservation> make_observations(
    const std::vector<Frontier>& frontiers, const AgentState& agent,
    const OccupancyGrid& belief, const DistanceField& goal_field,
    int sensor_range) {
    std::vector<FrontierObservation> out;
    out.reserve(frontiers.size());
    for (const Frontier& f : frontiers)
        out.push_back(make_observation(f, agent, belief, goal_field, sensor_range));
    return out;
}

// Synthetic stand-in for the VLM query: goal-ward and novel frontiers get
// higher base logits; miscalibration knobs add noise, occasionally boost an
// away-leading frontier above the maximum, and sharpen the softmax.
inline ScoreVector oracle_score(std::span<const FrontierObservation> step,
                                const OracleScorerConfig& config, Rng& rng,
                                double grid_diameter, int step_index = 0) {
    if (step.empty())
        throw std::invalid_argument("oracle_score: empty frontier set");
    config.validate();

    std::vector<double> logits(step.size());
    for (size_t i = 0; i < step.size(); ++i) {
        logits[i] = config.relevance_weight * (-step[i].goal_delta / grid_diameter) +
                    config.novelty_weight * step[i].novelty;
    }
    if (config.noise_sigma > 0.0)
        for (double& z : logits) z += rng.normal(0.0, config.noise_sigma);

    if (config.distractor_prob > 0.0 &&
        rng.uniform01() < config.distractor_prob) {
        std::vector<size_t> away;
        for (size_t i = 0; i < step.size(); ++i)
            if (step[i].goal_delta > 0.0) away.push_back(i);
        if (!away.empty()) {
            const size_t pick = away[rng.uniform_int(away.size())];
            logits[pick] = *std::max_element(logits.begin(), logits.end()) + 1.0;
        }
    }

    for (double& z : logits) z /= config.temperature;

    ScoreVector sv;
    sv.step_index = step_index;
    sv.confidences = softmax_confidences(logits);
    sv.logits = std::move(logits);
    return sv;
}

// --- replay -------------------------------------------------------------
//
// Line-delimited JSON records; the format a real VLM bridge would emit:
//   {"episode_id":"e1","step_index":0,"frontier_count":2,"logits":[1.0,0.0]}

class ReplayLog {
public:
    void add(const std::string& episode_id, int step_index,
             std::vector<double> logits) {
        log_[{episode_id, step_index}] = std::move(logits);
    }

    const std::vector<double>* find(const std::string& episode_id,
                                    int step_index) const {
        auto it = log_.find({episode_id, step_index});
        return it == log_.end() ? nullptr : &it->second;
    }

    size_t size() const { return log_.size(); }

    void save(std::ostream& os) const {
        for (const auto& [key, logits] : log_) {
            nlohmann::json j{{"episode_id", key.first},
                             {"step_index", key.second},
                             {"frontier_count", logits.size()},
                             {"logits", logits}};
            os << j.dump() << '\n';
        }
    }

    static ReplayLog load(std::istream& is) {
        ReplayLog log;
        std::string line;
        size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw std::runtime_error("replay log line " +
                                         std::to_string(lineno) + ": " + e.what());
            }
            std::vector<double> logits = j.at("logits").get<std::vector<double>>();
            if (j.at("frontier_count").get<size_t>() != logits.size())
                throw std::runtime_error("replay log line " +
                                         std::to_string(lineno) +
                                         ": frontier_count mismatch");
            log.add(j.at("episode_id").get<std::string>(),
                    j.at("step_index").get<int>(), std::move(logits));
        }
        return log;
    }

private:
    std::map<std::pair<std::string, int>, std::vector<double>> log_;
};

// Stored logits for one step, with confidences recomputed; the stored
// frontier count must match what the detector found.
inline ScoreVector replay_score(const ReplayLog& log,
                                const std::string& episode_id, int step_index,
                                size_t expected_count) {
    const std::vector<double>* logits = log.find(episode_id, step_index);
    if (!logits)
        throw std::runtime_error("replay: no record for episode '" + episode_id +
                                 "' step " + std::to_string(step_index));
    if (logits->size() != expected_count)
        throw std::runtime_error(
            "replay: episode '" + episode_id + "' step " +
            std::to_string(step_index) + " has " +
            std::to_string(logits->size()) + " logits, detector found " +
            std::to_string(expected_count) + " frontiers");
    ScoreVector sv;
    sv.step_index = step_index;
    sv.logits = *logits;
    sv.confidences = softmax_confidences(sv.logits);
    return sv;
}

}  // namespace ptp

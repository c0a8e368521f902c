#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptp/calibration.hpp"
#include "ptp/frontier.hpp"
#include "ptp/grid.hpp"
#include "ptp/planner.hpp"
#include "ptp/pruning.hpp"
#include "ptp/scene.hpp"
#include "ptp/scorer.hpp"
#include "ptp/selection.hpp"
#include "ptp/sensor.hpp"

namespace ptp {

enum class StrategyKind { vlm_only, closest_frontier, prune_then_plan };

inline const char* to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::vlm_only: return "vlm_only";
        case StrategyKind::closest_frontier: return "closest_frontier";
        case StrategyKind::prune_then_plan: return "prune_then_plan";
    }
    return "?";
}

inline StrategyKind strategy_from_string(const std::string& s) {
    if (s == "vlm_only") return StrategyKind::vlm_only;
    if (s == "closest_frontier") return StrategyKind::closest_frontier;
    if (s == "prune_then_plan") return StrategyKind::prune_then_plan;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

struct StrategyConfig {
    StrategyKind kind = StrategyKind::prune_then_plan;
    double alpha = 0.5;       // prune_then_plan only
    std::string ecdf_path;    // prune_then_plan only

    void validate() const {
        if (kind == StrategyKind::prune_then_plan &&
            (!(alpha > 0.0) || alpha > 1.0))
            throw std::invalid_argument("strategy: alpha must be in (0,1]");
    }
};

enum class Termination { budget_exhausted, no_frontiers, goal_observed_and_stop };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::budget_exhausted: return "budget_exhausted";
        case Termination::no_frontiers: return "no_frontiers";
        case Termination::goal_observed_and_stop: return "goal_observed_and_stop";
    }
    return "?";
}

struct FrontierSummary {
    int id = 0;
    Cell representative;
    int cell_count = 0;
    int unknown_mass = 0;
    double distance = 0.0;
};

struct StepRecord {
    int step_index = 0;
    Cell agent_position;  // where the decision was made
    int known_cells = 0;
    int known_free_cells = 0;
    int known_goal_cells = 0;
    std::vector<FrontierSummary> frontiers;
    // Oracle-side descriptors; written after decisions are made and only
    // read by the labeler and diagnostics, never by a strategy.
    std::vector<FrontierObservation> observations;
    ScoreVector scores;
    std::vector<double> normalized_scores;
    std::optional<PruneDecision> prune;
    int selected_id = -1;
    Cell selected_representative;
    bool fallback_used = false;
};

struct EpisodeOptions {
    int step_budget = 50;
    int stride = 3;
    int min_cluster = 2;
    bool stop_on_goal = true;

    void validate() const {
        if (step_budget < 0)
            throw std::invalid_argument("episode: step_budget must be >= 0");
        if (stride < 0) throw std::invalid_argument("episode: stride must be >= 0");
        if (min_cluster < 1)
            throw std::invalid_argument("episode: min_cluster must be >= 1");
    }
};

struct EpisodeLog {
    std::string episode_id;
    std::string strategy_name;
    double alpha = 0.0;
    std::uint64_t scene_seed = 0;
    std::vector<StepRecord> steps;
    Termination termination = Termination::budget_exhausted;
    std::vector<Cell> path;  // per-cell trajectory, start included
    Cell final_position;
    int step_budget = 0;

    int steps_used() const { return static_cast<int>(steps.size()); }
};

// Per-step scoring callback; the only channel through which ground-truth
// derived features reach a strategy.
using ScoreFn =
    std::function<ScoreVector(std::span<const FrontierObservation>, int)>;

inline ScoreFn make_oracle_score_fn(const OracleScorerConfig& config,
                                    std::shared_ptr<Rng> rng,
                                    double grid_diameter) {
    return [config, rng, grid_diameter](std::span<const FrontierObservation> obs,
                                        int step_index) {
        return oracle_score(obs, config, *rng, grid_diameter, step_index);
    };
}

inline ScoreFn make_replay_score_fn(std::shared_ptr<const ReplayLog> log,
                                    std::string episode_id) {
    return [log, episode_id](std::span<const FrontierObservation> obs,
                             int step_index) {
        return replay_score(*log, episode_id, step_index, obs.size());
    };
}

// One observe -> detect -> score -> select -> advance loop. The strategy
// decides selection only; everything else is shared so trajectories are
// comparable across strategies under identical seeds.
inline EpisodeLog run_episode(const GroundTruthGrid& truth,
                              const SceneConfig& scene_config,
                              const StrategyConfig& strategy,
                              const ScoreFn& score_fn,
                              const EcdfModel* model,
                              const EpisodeOptions& options,
                              const std::string& episode_id) {
    options.validate();
    strategy.validate();
    if (strategy.kind == StrategyKind::prune_then_plan && model == nullptr)
        throw std::invalid_argument("run_episode: prune_then_plan needs an ECDF model");
    if (!truth.is_free(truth.start()))
        throw std::invalid_argument("run_episode: start cell not Free");
    const std::vector<Cell> goals = truth.goal_cells();
    if (goals.empty())
        throw std::invalid_argument("run_episode: scene has no goal region");

    const DistanceField goal_field = truth_distance_field(truth, goals);
    if (!goal_field.reachable(truth.start()))
        throw std::invalid_argument("run_episode: goal unreachable from start");

    EpisodeLog log;
    log.episode_id = episode_id;
    log.strategy_name = to_string(strategy.kind);
    log.alpha = strategy.kind == StrategyKind::prune_then_plan ? strategy.alpha : 0.0;
    log.scene_seed = scene_config.rng_seed;
    log.step_budget = options.step_budget;
    log.termination = Termination::budget_exhausted;

    OccupancyGrid belief(truth.width(), truth.height());
    AgentState agent = AgentState::at(truth.start());

    auto known_goal_cells = [&]() {
        int n = 0;
        for (Cell g : goals)
            if (belief.known(g)) ++n;
        return n;
    };

    for (int t = 0; t < options.step_budget; ++t) {
        if (options.stop_on_goal && known_goal_cells() > 0) {
            // The step that first saw the goal ran to completion; stop now.
            log.termination = Termination::goal_observed_and_stop;
            break;
        }

        belief = observe(truth, belief, agent, scene_config);

        StepRecord rec;
        rec.step_index = t;
        rec.agent_position = agent.position;
        rec.known_cells = belief.known_count();
        rec.known_free_cells = belief.known_free_count();
        rec.known_goal_cells = known_goal_cells();

        const DistanceField field = geodesic_field(belief, agent.position);
        const std::vector<Frontier> frontiers =
            detect_frontiers(belief, options.min_cluster, field);

        if (frontiers.empty()) {
            log.steps.push_back(std::move(rec));
            log.termination = Termination::no_frontiers;
            break;
        }

        for (const Frontier& f : frontiers)
            rec.frontiers.push_back({f.id, f.representative,
                                     static_cast<int>(f.cells.size()),
                                     f.unknown_mass, f.distance});

        rec.observations = make_observations(frontiers, agent, belief,
                                             goal_field,
                                             scene_config.sensor_range);
        rec.scores = score_fn(rec.observations, t);
        if (rec.scores.confidences.size() != frontiers.size())
            throw std::runtime_error("run_episode: scorer returned wrong count");
        rec.normalized_scores = normalize_step(rec.scores.confidences);

        int selected = -1;
        switch (strategy.kind) {
            case StrategyKind::vlm_only:
                selected = argmax_confidence(frontiers, rec.scores);
                break;
            case StrategyKind::closest_frontier:
                selected = closest_frontier(frontiers);
                break;
            case StrategyKind::prune_then_plan: {
                rec.prune = prune_step(rec.normalized_scores, *model,
                                       strategy.alpha);
                const Selection sel =
                    select_frontier(*rec.prune, frontiers, field, rec.scores);
                selected = sel.frontier_id;
                rec.fallback_used = sel.fallback;
                break;
            }
        }
        rec.selected_id = selected;
        rec.selected_representative = frontiers[selected].representative;

        agent = advance(agent, frontiers[selected], field, options.stride);
        log.steps.push_back(std::move(rec));
    }

    log.path = agent.path;
    log.final_position = agent.position;
    return log;
}

// --- JSON dump (one object per episode, used by the jsonl episode files) --

inline nlohmann::json to_json(const EpisodeLog& log) {
    nlohmann::json steps = nlohmann::json::array();
    for (const StepRecord& s : log.steps) {
        nlohmann::json frontiers = nlohmann::json::array();
        for (const FrontierSummary& f : s.frontiers)
            frontiers.push_back({{"id", f.id},
                                 {"rep", {f.representative.row, f.representative.col}},
                                 {"cells", f.cell_count},
                                 {"unknown_mass", f.unknown_mass},
                                 {"distance", f.distance}});
        nlohmann::json rec{{"step_index", s.step_index},
                           {"agent", {s.agent_position.row, s.agent_position.col}},
                           {"known_cells", s.known_cells},
                           {"known_free_cells", s.known_free_cells},
                           {"known_goal_cells", s.known_goal_cells},
                           {"frontiers", frontiers},
                           {"logits", s.scores.logits},
                           {"confidences", s.scores.confidences},
                           {"normalized_scores", s.normalized_scores},
                           {"selected_id", s.selected_id},
                           {"fallback_used", s.fallback_used}};
        if (s.prune) {
            nlohmann::json ordered = nlohmann::json::array();
            for (const auto& [id, p] : s.prune->ordered_pvalues)
                ordered.push_back({id, p});
            rec["prune"] = {{"alpha", s.prune->alpha},
                            {"ordered_pvalues", ordered},
                            {"reject_count", s.prune->reject_count},
                            {"accepted_ids", s.prune->accepted_ids}};
        }
        steps.push_back(std::move(rec));
    }
    nlohmann::json path = nlohmann::json::array();
    for (Cell c : log.path) path.push_back({c.row, c.col});
    return nlohmann::json{{"episode_id", log.episode_id},
                          {"strategy", log.strategy_name},
                          {"alpha", log.alpha},
                          {"scene_seed", log.scene_seed},
                          {"step_budget", log.step_budget},
                          {"termination", to_string(log.termination)},
                          {"steps", steps},
                          {"path", path},
                          {"final_position",
                           {log.final_position.row, log.final_position.col}}};
}

}  // namespace ptp

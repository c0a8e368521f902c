#pragma once

#include <stdexcept>
#include <vector>

#include "ptp/frontier.hpp"
#include "ptp/planner.hpp"
#include "ptp/pruning.hpp"
#include "ptp/scorer.hpp"

namespace ptp {

struct Selection {
    int frontier_id = -1;
    bool fallback = false;  // accepted set empty or entirely unreachable
};

// Highest-confidence frontier; ties go to the lowest id.
inline int argmax_confidence(const std::vector<Frontier>& frontiers,
                             const ScoreVector& scores) {
    if (frontiers.empty())
        throw std::invalid_argument("argmax_confidence: no frontiers");
    size_t best = 0;
    for (size_t i = 1; i < scores.confidences.size(); ++i)
        if (scores.confidences[i] > scores.confidences[best]) best = i;
    return frontiers[best].id;
}

// Closest-frontier rule over the accepted set: minimal geodesic distance to
// the representative, ties by lowest id. An empty (or unreachable) accepted
// set falls back to the step-argmax-confidence frontier.
inline Selection select_frontier(const PruneDecision& decision,
                                 const std::vector<Frontier>& frontiers,
                                 const DistanceField& field,
                                 const ScoreVector& confidences) {
    if (frontiers.empty())
        throw std::invalid_argument("select_frontier: no frontiers");

    Selection sel;
    bool found = false;
    double best_dist = kUnreachable;
    for (const Frontier& f : frontiers) {
        if (!decision.accepts(f.id)) continue;
        if (!field.reachable(f.representative)) continue;
        const double d = field.at(f.representative);
        if (!found || d < best_dist || (d == best_dist && f.id < sel.frontier_id)) {
            sel.frontier_id = f.id;
            best_dist = d;
            found = true;
        }
    }
    if (!found) {
        sel.frontier_id = argmax_confidence(frontiers, confidences);
        sel.fallback = true;
    }
    return sel;
}

// Closest frontier over the whole list (the coverage-only baseline).
inline int closest_frontier(const std::vector<Frontier>& frontiers) {
    if (frontiers.empty())
        throw std::invalid_argument("closest_frontier: no frontiers");
    size_t best = 0;
    for (size_t i = 1; i < frontiers.size(); ++i)
        if (frontiers[i].distance < frontiers[best].distance) best = i;
    return frontiers[best].id;
}

inline AgentState advance(const AgentState& agent, const Frontier& target,
                          const DistanceField& field, int stride) {
    return advance_along(agent, target.representative, field, stride);
}

}  // namespace ptp

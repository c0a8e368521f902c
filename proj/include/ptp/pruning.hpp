#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptp/calibration.hpp"

namespace ptp {

// Outcome of the step-down rule for one step. Rejecting the null "frontier
// is bad" keeps the frontier, so accepted_ids lists the survivors.
struct PruneDecision {
    double alpha = 0.5;
    std::vector<std::pair<int, double>> ordered_pvalues;  // ascending (p, id)
    int reject_count = 0;          // m: length of the accepted prefix
    std::vector<int> accepted_ids;  // ids of the first m entries

    bool accepts(int id) const {
        return std::find(accepted_ids.begin(), accepted_ids.end(), id) !=
               accepted_ids.end();
    }
};

// Holm-Bonferroni style step-down: sort p ascending (ties by lowest id) and
// keep the longest prefix with p_(j) <= alpha / (K - j + 1).
inline PruneDecision holm_prune(std::vector<std::pair<int, double>> pvalues,
                                double alpha) {
    if (pvalues.empty())
        throw std::invalid_argument("holm_prune: empty p-value list");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("holm_prune: alpha must be in (0,1]");
    for (const auto& [id, p] : pvalues)
        if (!(p > 0.0) || p > 1.0)
            throw std::invalid_argument("holm_prune: p-values must be in (0,1]");

    std::sort(pvalues.begin(), pvalues.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second < b.second
                                              : a.first < b.first;
              });

    const int k = static_cast<int>(pvalues.size());
    int m = 0;
    for (int j = 1; j <= k; ++j) {
        if (pvalues[j - 1].second <= alpha / (k - j + 1)) m = j;
        else break;
    }

    PruneDecision d;
    d.alpha = alpha;
    d.reject_count = m;
    d.accepted_ids.reserve(m);
    for (int j = 0; j < m; ++j) d.accepted_ids.push_back(pvalues[j].first);
    d.ordered_pvalues = std::move(pvalues);
    return d;
}

// p-values from the shared bad-frontier model, then the step-down rule.
// Frontier ids are the positions in `scores`.
inline PruneDecision prune_step(std::span<const double> scores,
                                const EcdfModel& model, double alpha) {
    std::vector<std::pair<int, double>> pvalues;
    pvalues.reserve(scores.size());
    for (size_t i = 0; i < scores.size(); ++i)
        pvalues.emplace_back(static_cast<int>(i), model.p_value(scores[i]));
    return holm_prune(std::move(pvalues), alpha);
}

}  // namespace ptp

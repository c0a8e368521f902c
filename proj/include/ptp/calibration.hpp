#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptp/rng.hpp"
#include "ptp/scorer.hpp"

namespace ptp {

// Stand-in for the human annotators: a frontier is bad when it leads away
// from the goal or adds next to nothing new.
struct LabelerConfig {
    double relevance_margin = 0.0;
    double novelty_floor = 0.05;
};

inline bool oracle_label(const FrontierObservation& obs,
                         const LabelerConfig& cfg) {
    return obs.goal_delta > cfg.relevance_margin || obs.novelty < cfg.novelty_floor;
}

struct CalibrationSample {
    std::string episode_id;
    int step_index = 0;
    int frontier_id = 0;
    double score = 1.0;  // step-normalized, in (0,1]
    bool is_bad = false;
    bool is_step_argmax = false;
};

// Relative step-wise scores: each confidence divided by the step maximum.
inline std::vector<double> normalize_step(std::span<const double> confidences) {
    if (confidences.empty())
        throw std::invalid_argument("normalize_step: empty confidence vector");
    double max_conf = 0.0;
    for (double c : confidences) {
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument(
                "normalize_step: confidences must be positive and finite");
        max_conf = std::max(max_conf, c);
    }
    std::vector<double> out(confidences.size());
    for (size_t i = 0; i < confidences.size(); ++i)
        out[i] = confidences[i] / max_conf;
    return out;
}

// Index of the step argmax: lowest frontier position among the maxima.
inline size_t step_argmax(std::span<const double> values) {
    size_t best = 0;
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

// Sorted pool of bad-frontier scores with smoothed right-tail p-values.
// Per-step argmax frontiers never enter the pool, so the pool carries no
// point mass at score 1 from reference frontiers.
class EcdfModel {
public:
    explicit EcdfModel(std::vector<double> scores) : scores_(std::move(scores)) {
        if (scores_.empty())
            throw std::invalid_argument("ecdf: empty score pool");
        for (double s : scores_)
            if (!(s > 0.0) || s > 1.0)
                throw std::invalid_argument("ecdf: pool scores must be in (0,1]");
        std::sort(scores_.begin(), scores_.end());
    }

    int sample_size() const { return static_cast<int>(scores_.size()); }
    const std::vector<double>& scores() const { return scores_; }

    // Fraction of the pool at or below x (right-continuous step function).
    double ecdf(double x) const {
        if (!std::isfinite(x)) throw std::invalid_argument("ecdf: non-finite x");
        const auto at_most =
            std::upper_bound(scores_.begin(), scores_.end(), x) - scores_.begin();
        return static_cast<double>(at_most) / static_cast<double>(scores_.size());
    }

    // p = (1 + N (1 - ECDF(s))) / (1 + N), computed as an integer count so
    // it matches direct counting exactly.
    double p_value(double score) const {
        if (!(score > 0.0) || score > 1.0)
            throw std::invalid_argument("p_value: score must be in (0,1]");
        const auto above = scores_.end() -
                           std::upper_bound(scores_.begin(), scores_.end(), score);
        return (1.0 + static_cast<double>(above)) /
               (1.0 + static_cast<double>(scores_.size()));
    }

    bool operator==(const EcdfModel&) const = default;

private:
    std::vector<double> scores_;
};

// Pool = scores of samples labeled bad, excluding per-step argmax frontiers.
inline EcdfModel build_pool(std::span<const CalibrationSample> samples) {
    std::vector<double> pool;
    for (const CalibrationSample& s : samples)
        if (s.is_bad && !s.is_step_argmax) pool.push_back(s.score);
    if (pool.empty())
        throw std::invalid_argument(
            "build_pool: no bad non-argmax samples; not enough calibration data");
    return EcdfModel(std::move(pool));
}

// Invert is_bad for exactly round(flip_fraction * n) samples chosen
// uniformly without replacement. With a fixed rng seed the flipped set for
// a smaller fraction is a prefix of the set for a larger one.
inline std::vector<CalibrationSample> inject_label_noise(
    std::vector<CalibrationSample> samples, double flip_fraction, Rng& rng) {
    if (flip_fraction < 0.0 || flip_fraction > 1.0)
        throw std::invalid_argument("inject_label_noise: fraction in [0,1]");
    const size_t n = samples.size();
    const size_t flips = static_cast<size_t>(
        std::llround(flip_fraction * static_cast<double>(n)));
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    for (size_t i = 0; i < flips; ++i) {
        const size_t j = i + rng.uniform_int(n - i);
        std::swap(order[i], order[j]);
        samples[order[i]].is_bad = !samples[order[i]].is_bad;
    }
    return samples;
}

// --- persistence ----------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("double format failure");
    return std::string(buf, ptr);
}

}  // namespace detail

// ecdf-v1 <N> header followed by N ascending scores, one per line, at full
// round-trip precision.
inline void save_ecdf(const EcdfModel& model, std::ostream& os) {
    os << "ecdf-v1 " << model.sample_size() << '\n';
    for (double s : model.scores()) os << detail::format_double(s) << '\n';
}

inline EcdfModel load_ecdf(std::istream& is) {
    std::string header;
    if (!std::getline(is, header))
        throw std::runtime_error("ecdf file: missing header");
    std::istringstream hs(header);
    std::string magic;
    long long n = 0;
    hs >> magic >> n;
    if (magic != "ecdf-v1" || n < 1)
        throw std::runtime_error("ecdf file: bad header '" + header + "'");
    std::vector<double> scores;
    scores.reserve(static_cast<size_t>(n));
    std::string line;
    double prev = -1.0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size())
            throw std::runtime_error("ecdf file: bad score line '" + line + "'");
        if (v < prev)
            throw std::runtime_error("ecdf file: scores not sorted");
        prev = v;
        scores.push_back(v);
    }
    if (static_cast<long long>(scores.size()) != n)
        throw std::runtime_error("ecdf file: expected " + std::to_string(n) +
                                 " scores, found " +
                                 std::to_string(scores.size()));
    return EcdfModel(std::move(scores));
}

inline void save_samples(std::span<const CalibrationSample> samples,
                         std::ostream& os) {
    for (const CalibrationSample& s : samples) {
        nlohmann::json j{{"episode_id", s.episode_id},
                         {"step_index", s.step_index},
                         {"frontier_id", s.frontier_id},
                         {"score", s.score},
                         {"is_bad", s.is_bad},
                         {"is_step_argmax", s.is_step_argmax}};
        os << j.dump() << '\n';
    }
}

inline std::vector<CalibrationSample> load_samples(std::istream& is) {
    std::vector<CalibrationSample> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            CalibrationSample s;
            s.episode_id = j.at("episode_id").get<std::string>();
            s.step_index = j.at("step_index").get<int>();
            s.frontier_id = j.at("frontier_id").get<int>();
            s.score = j.at("score").get<double>();
            s.is_bad = j.at("is_bad").get<bool>();
            s.is_step_argmax = j.at("is_step_argmax").get<bool>();
            out.push_back(std::move(s));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("sample log line " + std::to_string(lineno) +
                                     ": " + e.what());
        }
    }
    return out;
}

}  // namespace ptp

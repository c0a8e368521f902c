#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptp/calibration.hpp"
#include "ptp/episode.hpp"
#include "ptp/metrics.hpp"

namespace ptp {

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    int scene_count = 100;             // evaluation ensemble
    int calibration_scene_count = 40;  // held-out calibration ensemble
    SceneConfig scene;                 // template; rng_seed set per episode
    OracleScorerConfig scorer;
    LabelerConfig labeler;
    EpisodeOptions episode;
    double alpha = 0.5;
    std::string output_dir;

    void validate() const {
        if (scene_count < 1)
            throw std::invalid_argument("experiment: scene_count must be >= 1");
        if (calibration_scene_count < 1)
            throw std::invalid_argument(
                "experiment: calibration_scene_count must be >= 1");
        scene.validate();
        scorer.validate();
        episode.validate();
    }
};

// Calibration scenes take even seeds, evaluation scenes odd ones, so the
// two ensembles can never share a scene.
inline std::uint64_t scene_seed(std::uint64_t master, bool calibration,
                                int index) {
    const std::uint64_t base = derive_seed(master, "scene-base") & ~1ull;
    return base + 2 * static_cast<std::uint64_t>(index) + (calibration ? 0 : 1);
}

inline SceneConfig make_scene_config(const ExperimentConfig& cfg,
                                     bool calibration, int index) {
    SceneConfig sc = cfg.scene;
    sc.rng_seed = scene_seed(cfg.master_seed, calibration, index);
    return sc;
}

inline std::string episode_name(bool calibration, int index,
                                std::uint64_t seed) {
    return std::string(calibration ? "cal-" : "eval-") + std::to_string(index) +
           "-s" + std::to_string(seed);
}

struct EpisodeResult {
    EpisodeLog log;
    EpisodeMetrics metrics;
};

inline EpisodeResult run_one(const ExperimentConfig& cfg,
                             const StrategyConfig& strategy,
                             const EcdfModel* model, bool calibration,
                             int index, bool stop_on_goal) {
    const SceneConfig sc = make_scene_config(cfg, calibration, index);
    const GroundTruthGrid truth = generate_scene(sc);
    auto rng = std::make_shared<Rng>(derive_seed(
        cfg.master_seed, calibration ? "scorer-cal" : "scorer-eval", index));
    OracleScorerConfig scorer = cfg.scorer;
    scorer.rng_seed = cfg.master_seed;
    EpisodeOptions options = cfg.episode;
    options.stop_on_goal = stop_on_goal;

    EpisodeResult result;
    result.log = run_episode(truth, sc, strategy,
                             make_oracle_score_fn(scorer, rng, truth.diameter()),
                             model, options,
                             episode_name(calibration, index, sc.rng_seed));
    result.metrics = compute_metrics(result.log, truth);
    return result;
}

// Run the baseline agent over the calibration ensemble and label every
// frontier of every step.
inline std::vector<CalibrationSample> collect_calibration(
    const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<CalibrationSample> samples;
    StrategyConfig baseline{StrategyKind::vlm_only, 0.5, ""};
    for (int i = 0; i < cfg.calibration_scene_count; ++i) {
        const EpisodeResult r = run_one(cfg, baseline, nullptr, true, i,
                                        cfg.episode.stop_on_goal);
        for (const StepRecord& step : r.log.steps) {
            if (step.frontiers.empty()) continue;
            const size_t argmax = step_argmax(step.normalized_scores);
            for (size_t f = 0; f < step.frontiers.size(); ++f) {
                CalibrationSample s;
                s.episode_id = r.log.episode_id;
                s.step_index = step.step_index;
                s.frontier_id = step.frontiers[f].id;
                s.score = step.normalized_scores[f];
                s.is_bad = oracle_label(step.observations[f], cfg.labeler);
                s.is_step_argmax = f == argmax;
                samples.push_back(std::move(s));
            }
        }
    }
    return samples;
}

inline std::vector<EpisodeResult> run_ensemble(const ExperimentConfig& cfg,
                                               const StrategyConfig& strategy,
                                               const EcdfModel* model,
                                               bool stop_on_goal) {
    cfg.validate();
    std::vector<EpisodeResult> results;
    results.reserve(cfg.scene_count);
    for (int i = 0; i < cfg.scene_count; ++i)
        results.push_back(run_one(cfg, strategy, model, false, i, stop_on_goal));
    return results;
}

// --- CSV ------------------------------------------------------------------

inline const char* kMetricsCsvHeader =
    "episode_id,strategy,alpha,seed,coverage_auc,curvature_deg,spl,"
    "success_score,steps_used,oscillation_count";

inline void write_metrics_row(std::ostream& os, const EpisodeResult& r) {
    using detail::format_double;
    os << r.log.episode_id << ',' << r.log.strategy_name << ','
       << format_double(r.log.alpha) << ',' << r.log.scene_seed << ','
       << format_double(r.metrics.coverage_auc) << ','
       << format_double(r.metrics.curvature_deg) << ','
       << format_double(r.metrics.spl) << ','
       << format_double(r.metrics.success_score) << ',' << r.metrics.steps_used
       << ',' << r.metrics.oscillation_count << '\n';
}

inline void write_metrics_csv(std::ostream& os,
                              const std::vector<EpisodeResult>& results) {
    os << kMetricsCsvHeader << '\n';
    for (const EpisodeResult& r : results) write_metrics_row(os, r);
}

struct MetricsRow {
    std::string episode_id;
    std::string strategy;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double coverage_auc = 0.0;
    double curvature_deg = 0.0;
    double spl = 0.0;
    double success_score = 0.0;
    int steps_used = 0;
    int oscillation_count = 0;
};

inline std::vector<MetricsRow> read_metrics_csv(std::istream& is) {
    std::vector<MetricsRow> rows;
    std::string line;
    if (!std::getline(is, line) || line != kMetricsCsvHeader)
        throw std::runtime_error("metrics csv: bad header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        size_t pos = 0;
        while (true) {
            const size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 10)
            throw std::runtime_error("metrics csv: bad row '" + line + "'");
        MetricsRow r;
        r.episode_id = fields[0];
        r.strategy = fields[1];
        r.alpha = std::stod(fields[2]);
        r.seed = std::stoull(fields[3]);
        r.coverage_auc = std::stod(fields[4]);
        r.curvature_deg = std::stod(fields[5]);
        r.spl = std::stod(fields[6]);
        r.success_score = std::stod(fields[7]);
        r.steps_used = std::stoi(fields[8]);
        r.oscillation_count = std::stoi(fields[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

// --- aggregate report -------------------------------------------------------

struct StrategySummary {
    std::string strategy;
    double alpha = 0.0;
    int episodes = 0;
    BootstrapCi coverage_auc;
    BootstrapCi curvature_deg;
    BootstrapCi spl;
    BootstrapCi success_score;
    double mean_steps = 0.0;
    double mean_oscillations = 0.0;
};

inline std::vector<StrategySummary> summarize(
    const std::vector<MetricsRow>& rows, int bootstrap_resamples = 2000,
    std::uint64_t bootstrap_seed = 0x9d2c5680u) {
    std::map<std::pair<std::string, double>, std::vector<MetricsRow>> groups;
    for (const MetricsRow& r : rows) groups[{r.strategy, r.alpha}].push_back(r);

    std::vector<StrategySummary> out;
    for (const auto& [key, group] : groups) {
        StrategySummary s;
        s.strategy = key.first;
        s.alpha = key.second;
        s.episodes = static_cast<int>(group.size());
        std::vector<double> auc, curv, spl, success, steps, osc;
        for (const MetricsRow& r : group) {
            auc.push_back(r.coverage_auc);
            curv.push_back(r.curvature_deg);
            spl.push_back(r.spl);
            success.push_back(r.success_score);
            steps.push_back(r.steps_used);
            osc.push_back(r.oscillation_count);
        }
        const std::uint64_t seed =
            derive_seed(bootstrap_seed, "bootstrap-" + s.strategy,
                        static_cast<std::uint64_t>(s.alpha * 1000));
        s.coverage_auc = bootstrap_mean_ci(auc, bootstrap_resamples, seed);
        s.curvature_deg =
            bootstrap_mean_ci(curv, bootstrap_resamples, splitmix64(seed + 1));
        s.spl = bootstrap_mean_ci(spl, bootstrap_resamples, splitmix64(seed + 2));
        s.success_score =
            bootstrap_mean_ci(success, bootstrap_resamples, splitmix64(seed + 3));
        s.mean_steps = mean_of(steps);
        s.mean_oscillations = mean_of(osc);
        out.push_back(std::move(s));
    }
    return out;
}

inline void write_summary(std::ostream& os,
                          const std::vector<StrategySummary>& summaries) {
    using detail::format_double;
    os << "strategy,alpha,episodes,"
          "coverage_auc_mean,coverage_auc_lo,coverage_auc_hi,"
          "curvature_mean,curvature_lo,curvature_hi,"
          "spl_mean,spl_lo,spl_hi,success_mean,success_lo,success_hi,"
          "mean_steps,mean_oscillations\n";
    for (const StrategySummary& s : summaries) {
        os << s.strategy << ',' << format_double(s.alpha) << ',' << s.episodes
           << ',' << format_double(s.coverage_auc.mean) << ','
           << format_double(s.coverage_auc.lo) << ','
           << format_double(s.coverage_auc.hi) << ','
           << format_double(s.curvature_deg.mean) << ','
           << format_double(s.curvature_deg.lo) << ','
           << format_double(s.curvature_deg.hi) << ','
           << format_double(s.spl.mean) << ',' << format_double(s.spl.lo) << ','
           << format_double(s.spl.hi) << ',' << format_double(s.success_score.mean)
           << ',' << format_double(s.success_score.lo) << ','
           << format_double(s.success_score.hi) << ','
           << format_double(s.mean_steps) << ','
           << format_double(s.mean_oscillations) << '\n';
    }
}

// --- sweeps -----------------------------------------------------------------

struct AlphaRow {
    double alpha = 0.0;
    double coverage_auc = 0.0;   // full-budget runs
    double curvature_deg = 0.0;  // full-budget runs
    double spl = 0.0;            // stop-on-goal runs
    double success_score = 0.0;  // stop-on-goal runs
    double mean_pruned_per_step = 0.0;
};

inline double mean_pruned_per_step(const std::vector<EpisodeResult>& results) {
    long long pruned = 0, steps = 0;
    for (const EpisodeResult& r : results) {
        for (const StepRecord& s : r.log.steps) {
            if (!s.prune) continue;
            pruned += static_cast<long long>(s.frontiers.size()) -
                      s.prune->reject_count;
            ++steps;
        }
    }
    return steps == 0 ? 0.0 : static_cast<double>(pruned) / steps;
}

// Coverage metrics come from full-budget runs, answer metrics from
// stop-on-goal runs; identical seeds everywhere, so rows differ only
// through pruning strictness.
inline std::vector<AlphaRow> sweep_alpha(const ExperimentConfig& cfg,
                                         const std::vector<double>& alphas,
                                         const EcdfModel& model) {
    std::vector<AlphaRow> rows;
    for (double alpha : alphas) {
        StrategyConfig strategy{StrategyKind::prune_then_plan, alpha, ""};
        const auto coverage = run_ensemble(cfg, strategy, &model, false);
        const auto answer = run_ensemble(cfg, strategy, &model, true);
        AlphaRow row;
        row.alpha = alpha;
        std::vector<double> auc, curv, spl, success;
        for (const EpisodeResult& r : coverage) {
            auc.push_back(r.metrics.coverage_auc);
            curv.push_back(r.metrics.curvature_deg);
        }
        for (const EpisodeResult& r : answer) {
            spl.push_back(r.metrics.spl);
            success.push_back(r.metrics.success_score);
        }
        row.coverage_auc = mean_of(auc);
        row.curvature_deg = mean_of(curv);
        row.spl = mean_of(spl);
        row.success_score = mean_of(success);
        row.mean_pruned_per_step = mean_pruned_per_step(coverage);
        rows.push_back(row);
    }
    return rows;
}

inline void write_alpha_csv(std::ostream& os, const std::vector<AlphaRow>& rows) {
    using detail::format_double;
    os << "alpha,coverage_auc,curvature_deg,spl,success_score,"
          "mean_pruned_per_step\n";
    for (const AlphaRow& r : rows)
        os << format_double(r.alpha) << ',' << format_double(r.coverage_auc)
           << ',' << format_double(r.curvature_deg) << ','
           << format_double(r.spl) << ',' << format_double(r.success_score)
           << ',' << format_double(r.mean_pruned_per_step) << '\n';
}

struct NoiseRow {
    double flip_fraction = 0.0;
    int pool_size = 0;
    double coverage_auc = 0.0;
    double curvature_deg = 0.0;
    double spl = 0.0;
    double success_score = 0.0;
};

// Rebuild the ECDF from label-flipped samples and re-run the evaluation
// ensemble. One shared noise stream makes smaller flip sets prefixes of
// larger ones.
inline std::vector<NoiseRow> noise_ablation(
    const ExperimentConfig& cfg, const std::vector<double>& flip_fractions,
    const std::vector<CalibrationSample>& samples) {
    std::vector<NoiseRow> rows;
    for (double fraction : flip_fractions) {
        Rng noise_rng(derive_seed(cfg.master_seed, "label-noise"));
        const std::vector<CalibrationSample> noisy =
            inject_label_noise(samples, fraction, noise_rng);
        const EcdfModel model = build_pool(noisy);
        StrategyConfig strategy{StrategyKind::prune_then_plan, cfg.alpha, ""};
        const auto coverage = run_ensemble(cfg, strategy, &model, false);
        const auto answer = run_ensemble(cfg, strategy, &model, true);
        NoiseRow row;
        row.flip_fraction = fraction;
        row.pool_size = model.sample_size();
        std::vector<double> auc, curv, spl, success;
        for (const EpisodeResult& r : coverage) {
            auc.push_back(r.metrics.coverage_auc);
            curv.push_back(r.metrics.curvature_deg);
        }
        for (const EpisodeResult& r : answer) {
            spl.push_back(r.metrics.spl);
            success.push_back(r.metrics.success_score);
        }
        row.coverage_auc = mean_of(auc);
        row.curvature_deg = mean_of(curv);
        row.spl = mean_of(spl);
        row.success_score = mean_of(success);
        rows.push_back(row);
    }
    return rows;
}

inline void write_noise_csv(std::ostream& os, const std::vector<NoiseRow>& rows) {
    using detail::format_double;
    os << "flip_fraction,pool_size,coverage_auc,curvature_deg,spl,"
          "success_score\n";
    for (const NoiseRow& r : rows)
        os << format_double(r.flip_fraction) << ',' << r.pool_size << ','
           << format_double(r.coverage_auc) << ','
           << format_double(r.curvature_deg) << ',' << format_double(r.spl)
           << ',' << format_double(r.success_score) << '\n';
}

// --- manifest ----------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
    return h;
}

inline std::uint64_t file_hash(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(is)),
                      std::istreambuf_iterator<char>());
    return fnv1a64(bytes);
}

inline nlohmann::json config_json(const ExperimentConfig& cfg) {
    return nlohmann::json{
        {"master_seed", cfg.master_seed},
        {"scene_count", cfg.scene_count},
        {"calibration_scene_count", cfg.calibration_scene_count},
        {"scene",
         {{"room_count", cfg.scene.room_count},
          {"corridor_width", cfg.scene.corridor_width},
          {"dead_end_count", cfg.scene.dead_end_count},
          {"width", cfg.scene.width},
          {"height", cfg.scene.height},
          {"sensor_range", cfg.scene.sensor_range},
          {"sensor_fov_deg", cfg.scene.sensor_fov_deg}}},
        {"scorer",
         {{"relevance_weight", cfg.scorer.relevance_weight},
          {"novelty_weight", cfg.scorer.novelty_weight},
          {"temperature", cfg.scorer.temperature},
          {"noise_sigma", cfg.scorer.noise_sigma},
          {"distractor_prob", cfg.scorer.distractor_prob}}},
        {"labeler",
         {{"relevance_margin", cfg.labeler.relevance_margin},
          {"novelty_floor", cfg.labeler.novelty_floor}}},
        {"episode",
         {{"step_budget", cfg.episode.step_budget},
          {"stride", cfg.episode.stride},
          {"min_cluster", cfg.episode.min_cluster},
          {"stop_on_goal", cfg.episode.stop_on_goal}}},
        {"alpha", cfg.alpha}};
}

inline void write_manifest(const std::filesystem::path& path,
                           const ExperimentConfig& cfg,
                           const std::map<std::string, std::string>& inputs,
                           const std::vector<std::string>& outputs) {
    nlohmann::json inputs_json = nlohmann::json::object();
    for (const auto& [name, file] : inputs)
        inputs_json[name] = {{"path", file},
                             {"fnv1a64", file_hash(file)}};
    nlohmann::json j{{"tool", "ptp"},
                     {"config", config_json(cfg)},
                     {"inputs", inputs_json},
                     {"outputs", outputs}};
    std::ofstream os(path);
    os << j.dump(2) << '\n';
}

}  // namespace ptp

// Command-line front end: scene generation, calibration, strategy
// evaluation, the alpha sweep, the label-noise ablation, and report
// aggregation. A text config file may supply any option; flags override it.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptp/ptp.hpp"

namespace fs = std::filesystem;

namespace {

struct CliOptions {
    ptp::ExperimentConfig experiment;
    std::string out_dir = "out";
    std::string ecdf_file;
    std::string samples_file;
    std::string strategy = "prune_then_plan";
    std::vector<double> alphas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> fractions = {0.0, 0.05, 0.10};
    int scene_file_count = 10;
    bool calibration_scenes = false;
    std::vector<std::string> report_inputs;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    auto& cfg = opt.experiment;
    cmd->add_option("--master-seed", cfg.master_seed, "master seed for all streams");
    cmd->add_option("--scenes", cfg.scene_count, "evaluation ensemble size");
    cmd->add_option("--cal-scenes", cfg.calibration_scene_count,
                    "calibration ensemble size");
    cmd->add_option("--width", cfg.scene.width, "scene width in cells");
    cmd->add_option("--height", cfg.scene.height, "scene height in cells");
    cmd->add_option("--rooms", cfg.scene.room_count, "rooms per scene");
    cmd->add_option("--corridor-width", cfg.scene.corridor_width,
                    "corridor width in cells");
    cmd->add_option("--dead-ends", cfg.scene.dead_end_count,
                    "dead-end corridors per scene");
    cmd->add_option("--sensor-range", cfg.scene.sensor_range,
                    "sensor range in cells (Chebyshev)");
    cmd->add_option("--sensor-fov", cfg.scene.sensor_fov_deg,
                    "sensor field of view in degrees");
    cmd->add_option("--relevance-weight", cfg.scorer.relevance_weight,
                    "oracle weight on goal direction");
    cmd->add_option("--novelty-weight", cfg.scorer.novelty_weight,
                    "oracle weight on novelty");
    cmd->add_option("--temperature", cfg.scorer.temperature,
                    "softmax temperature (<1 sharpens)");
    cmd->add_option("--noise-sigma", cfg.scorer.noise_sigma,
                    "logit noise standard deviation");
    cmd->add_option("--distractor-prob", cfg.scorer.distractor_prob,
                    "per-step probability of a boosted bad frontier");
    cmd->add_option("--relevance-margin", cfg.labeler.relevance_margin,
                    "labeler margin on goal_delta");
    cmd->add_option("--novelty-floor", cfg.labeler.novelty_floor,
                    "labeler minimum novelty");
    cmd->add_option("--budget", cfg.episode.step_budget, "step budget");
    cmd->add_option("--stride", cfg.episode.stride, "cells moved per step");
    cmd->add_option("--min-cluster", cfg.episode.min_cluster,
                    "minimum frontier cluster size");
    cmd->add_flag("--stop-on-goal,!--no-stop-on-goal", cfg.episode.stop_on_goal,
                  "terminate once the goal region has been observed");
    cmd->add_option("--alpha", cfg.alpha, "pruning strictness");
    cmd->add_option("--out", opt.out_dir, "output directory");
}

fs::path prepare_out_dir(const CliOptions& opt) {
    fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    return dir;
}

int cmd_gen_scenes(const CliOptions& opt) {
    const fs::path dir = prepare_out_dir(opt);
    for (int i = 0; i < opt.scene_file_count; ++i) {
        const ptp::SceneConfig sc = ptp::make_scene_config(
            opt.experiment, opt.calibration_scenes, i);
        const ptp::GroundTruthGrid grid = ptp::generate_scene(sc);
        const fs::path file =
            dir / ("scene-" + std::to_string(sc.rng_seed) + ".grid");
        std::ofstream os(file);
        ptp::save_scene(grid, os);
        std::cout << file.string() << '\n';
    }
    return 0;
}

int cmd_calibrate(const CliOptions& opt) {
    const fs::path dir = prepare_out_dir(opt);
    const std::vector<ptp::CalibrationSample> samples =
        ptp::collect_calibration(opt.experiment);
    const ptp::EcdfModel model = ptp::build_pool(samples);

    const fs::path samples_path = dir / "samples.jsonl";
    const fs::path ecdf_path = dir / "ecdf.txt";
    {
        std::ofstream os(samples_path);
        ptp::save_samples(samples, os);
    }
    {
        std::ofstream os(ecdf_path);
        ptp::save_ecdf(model, os);
    }
    ptp::write_manifest(dir / "manifest.json", opt.experiment, {},
                        {samples_path.string(), ecdf_path.string()});
    std::cout << "samples: " << samples.size() << " -> " << samples_path.string()
              << "\npool: " << model.sample_size() << " -> "
              << ecdf_path.string() << '\n';
    return 0;
}

ptp::EcdfModel load_ecdf_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open ecdf file '" + path + "'");
    return ptp::load_ecdf(is);
}

int cmd_run(const CliOptions& opt) {
    const fs::path dir = prepare_out_dir(opt);
    ptp::StrategyConfig strategy;
    strategy.kind = ptp::strategy_from_string(opt.strategy);
    strategy.alpha = opt.experiment.alpha;
    strategy.ecdf_path = opt.ecdf_file;

    std::optional<ptp::EcdfModel> model;
    std::map<std::string, std::string> inputs;
    if (strategy.kind == ptp::StrategyKind::prune_then_plan) {
        if (opt.ecdf_file.empty())
            throw std::invalid_argument("prune_then_plan needs --ecdf");
        model = load_ecdf_file(opt.ecdf_file);
        inputs["ecdf"] = opt.ecdf_file;
    }

    const std::vector<ptp::EpisodeResult> results =
        ptp::run_ensemble(opt.experiment, strategy, model ? &*model : nullptr,
                          opt.experiment.episode.stop_on_goal);

    const fs::path metrics_path = dir / "metrics.csv";
    const fs::path episodes_path = dir / "episodes.jsonl";
    const fs::path summary_path = dir / "summary.csv";
    {
        std::ofstream os(metrics_path);
        ptp::write_metrics_csv(os, results);
    }
    {
        std::ofstream os(episodes_path);
        for (const ptp::EpisodeResult& r : results)
            os << ptp::to_json(r.log).dump() << '\n';
    }
    std::vector<ptp::MetricsRow> rows;
    {
        std::ifstream is(metrics_path);
        rows = ptp::read_metrics_csv(is);
    }
    const std::vector<ptp::StrategySummary> summaries = ptp::summarize(rows);
    {
        std::ofstream os(summary_path);
        ptp::write_summary(os, summaries);
    }
    ptp::write_manifest(dir / "manifest.json", opt.experiment, inputs,
                        {metrics_path.string(), episodes_path.string(),
                         summary_path.string()});

    for (const ptp::StrategySummary& s : summaries)
        std::cout << s.strategy << " alpha=" << s.alpha << " n=" << s.episodes
                  << " auc=" << s.coverage_auc.mean
                  << " curvature=" << s.curvature_deg.mean
                  << " spl=" << s.spl.mean
                  << " success=" << s.success_score.mean << '\n';
    return 0;
}

int cmd_sweep_alpha(const CliOptions& opt) {
    const fs::path dir = prepare_out_dir(opt);
    if (opt.ecdf_file.empty())
        throw std::invalid_argument("sweep-alpha needs --ecdf");
    const ptp::EcdfModel model = load_ecdf_file(opt.ecdf_file);

    const std::vector<ptp::AlphaRow> rows =
        ptp::sweep_alpha(opt.experiment, opt.alphas, model);
    const fs::path out = dir / "alpha_sweep.csv";
    {
        std::ofstream os(out);
        ptp::write_alpha_csv(os, rows);
    }
    ptp::write_manifest(dir / "manifest.json", opt.experiment,
                        {{"ecdf", opt.ecdf_file}}, {out.string()});
    for (const ptp::AlphaRow& r : rows)
        std::cout << "alpha=" << r.alpha << " auc=" << r.coverage_auc
                  << " curvature=" << r.curvature_deg << " spl=" << r.spl
                  << " success=" << r.success_score
                  << " kept/step=" << r.mean_pruned_per_step << '\n';
    return 0;
}

int cmd_noise_ablation(const CliOptions& opt) {
    const fs::path dir = prepare_out_dir(opt);
    if (opt.samples_file.empty())
        throw std::invalid_argument("noise-ablation needs --samples");
    std::ifstream is(opt.samples_file);
    if (!is)
        throw std::runtime_error("cannot open samples file '" +
                                 opt.samples_file + "'");
    const std::vector<ptp::CalibrationSample> samples = ptp::load_samples(is);

    const std::vector<ptp::NoiseRow> rows =
        ptp::noise_ablation(opt.experiment, opt.fractions, samples);
    const fs::path out = dir / "noise_ablation.csv";
    {
        std::ofstream os(out);
        ptp::write_noise_csv(os, rows);
    }
    ptp::write_manifest(dir / "manifest.json", opt.experiment,
                        {{"samples", opt.samples_file}}, {out.string()});
    for (const ptp::NoiseRow& r : rows)
        std::cout << "flip=" << r.flip_fraction << " pool=" << r.pool_size
                  << " auc=" << r.coverage_auc << " spl=" << r.spl
                  << " success=" << r.success_score << '\n';
    return 0;
}

int cmd_report(const CliOptions& opt) {
    std::vector<ptp::MetricsRow> rows;
    for (const std::string& file : opt.report_inputs) {
        std::ifstream is(file);
        if (!is) throw std::runtime_error("cannot open '" + file + "'");
        const std::vector<ptp::MetricsRow> part = ptp::read_metrics_csv(is);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const std::vector<ptp::StrategySummary> summaries = ptp::summarize(rows);

    std::cout << std::left << std::setw(18) << "strategy" << std::setw(7)
              << "alpha" << std::setw(5) << "n" << std::setw(26)
              << "coverage_auc [95% CI]" << std::setw(26)
              << "curvature [95% CI]" << std::setw(12) << "spl"
              << "success\n";
    for (const ptp::StrategySummary& s : summaries) {
        std::ostringstream auc, curv;
        auc << std::fixed << std::setprecision(3) << s.coverage_auc.mean << " ["
            << s.coverage_auc.lo << ", " << s.coverage_auc.hi << "]";
        curv << std::fixed << std::setprecision(1) << s.curvature_deg.mean
             << " [" << s.curvature_deg.lo << ", " << s.curvature_deg.hi << "]";
        std::cout << std::left << std::setw(18) << s.strategy << std::setw(7)
                  << s.alpha << std::setw(5) << s.episodes << std::setw(26)
                  << auc.str() << std::setw(26) << curv.str() << std::setw(12)
                  << std::setprecision(3) << s.spl.mean << s.success_score.mean
                  << '\n';
    }
    if (!opt.out_dir.empty()) {
        const fs::path dir = prepare_out_dir(opt);
        std::ofstream os(dir / "summary.csv");
        ptp::write_summary(os, summaries);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prune-then-plan frontier exploration simulator"};
    app.set_config("--config", "", "read options from a text config file");
    app.require_subcommand(1);

    CliOptions opt;

    CLI::App* gen = app.add_subcommand("gen-scenes", "write scene grid files");
    add_common_options(gen, opt);
    gen->add_option("--count", opt.scene_file_count, "number of scenes to write");
    gen->add_flag("--calibration", opt.calibration_scenes,
                  "use calibration-ensemble seeds");

    CLI::App* cal = app.add_subcommand(
        "calibrate", "run the baseline agent and fit the bad-frontier ECDF");
    add_common_options(cal, opt);

    CLI::App* run = app.add_subcommand("run", "evaluate one strategy");
    add_common_options(run, opt);
    run->add_option("--strategy", opt.strategy,
                    "vlm_only | closest_frontier | prune_then_plan");
    run->add_option("--ecdf", opt.ecdf_file, "fitted ECDF file");

    CLI::App* sweep = app.add_subcommand("sweep-alpha",
                                         "prune_then_plan across alpha values");
    add_common_options(sweep, opt);
    sweep->add_option("--alphas", opt.alphas, "alpha grid")->delimiter(',');
    sweep->add_option("--ecdf", opt.ecdf_file, "fitted ECDF file");

    CLI::App* noise = app.add_subcommand(
        "noise-ablation", "rebuild the ECDF under label noise and re-evaluate");
    add_common_options(noise, opt);
    noise->add_option("--fractions", opt.fractions, "label flip fractions")
        ->delimiter(',');
    noise->add_option("--samples", opt.samples_file, "calibration samples file");

    CLI::App* report = app.add_subcommand("report", "aggregate metrics CSVs");
    report->add_option("inputs", opt.report_inputs, "metrics.csv files")
        ->required();
    report->add_option("--out", opt.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_scenes(opt);
        if (cal->parsed()) return cmd_calibrate(opt);
        if (run->parsed()) return cmd_run(opt);
        if (sweep->parsed()) return cmd_sweep_alpha(opt);
        if (noise->parsed()) return cmd_noise_ablation(opt);
        if (report->parsed()) return cmd_report(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

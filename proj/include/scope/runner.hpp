#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scope/episode.hpp"
#include "scope/metrics.hpp"
#include "scope/remote.hpp"

namespace scope {

struct SceneSource {
    bool generate = true;
    GenParams params;
    std::vector<std::string> files;  // used when generate == false
};

/// Harness thresholds for the ablation comparisons; committed to the run
/// manifest so reports are judged against the configuration that produced
/// them.
struct AblationTargets {
    double min_full_minus_random_sr = 10.0;
    double min_full_minus_nopg_sr = 2.0;
    int min_seed_agreement = 4;
};

enum class EstimatorKind { Oracle, Remote };
enum class ValidatorKind { Oracle, Remote };

struct RunConfig {
    SceneSource scenes;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<std::uint64_t> metric_seeds{1};
    std::vector<Variant> variants{Variant::Full};
    EpisodeConfig episode;  // knob values; per-job seeds are derived
    EstimatorKind estimator_kind = EstimatorKind::Oracle;
    ValidatorKind validator_kind = ValidatorKind::Oracle;
    RemoteConfig remote;
    AblationTargets targets;
    std::string out_dir = "out/run";
    int workers = 0;  // 0 = hardware concurrency
    bool dump_graph = false;
};

/// Parses the JSON run configuration (see README for the schema). Unknown
/// fields are rejected; NoPotentialGraph as the sole variant forbids explicit
/// graph overrides.
RunConfig parse_run_config(const std::string& json_text);

struct RunResult {
    // Canonical order: (scene seed, variant, metric seed), independent of
    // worker scheduling.
    std::vector<EpisodeTrace> traces;
};

/// Executes the seed x variant x metric-seed grid with a bounded worker
/// pool. Episodes share nothing mutable; per-episode results depend only on
/// their (scene seed, variant, metric seed) triple.
RunResult run_grid(const RunConfig& cfg);

/// Per-variant metric summary across metric seeds.
struct VariantMetrics {
    Variant variant = Variant::Full;
    std::vector<std::uint64_t> metric_seeds;
    std::vector<double> sr;
    std::vector<double> spl;
    std::vector<double> efficiency;
    std::vector<double> ece_x100;
    ReconsiderationStats recon;  // pooled over all seeds
    bool has_recon = false;
};

std::vector<VariantMetrics> summarize(const RunResult& result);

std::string report_csv(const std::vector<VariantMetrics>& metrics);
std::string report_long_csv(const std::vector<VariantMetrics>& metrics);
std::string report_json(const std::vector<VariantMetrics>& metrics, const AblationTargets* targets);

std::string build_manifest(const RunConfig& cfg);
std::string trace_filename(Variant variant, std::uint64_t scene_seed, std::uint64_t metric_seed);

/// Writes manifest.json, traces/*.jsonl, report.csv, report_long.csv, and
/// report.json under cfg.out_dir.
void write_run_outputs(const RunConfig& cfg, const RunResult& result);

/// Reads every *.jsonl under the directory back into traces (sorted by file
/// name). Throws EmptyInput when none exist.
std::vector<EpisodeTrace> read_trace_dir(const std::string& dir);

}  // namespace scope

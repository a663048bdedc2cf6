#pragma once

#include <functional>

#include "scope/policy.hpp"
#include "scope/potential_graph.hpp"
#include "scope/trace.hpp"

namespace scope {

/// What to do when a remote component fails after retries: substitute a
/// neutral result (0.5 scores; CONFIRM at 0.5 confidence for validators) and
/// keep going, or fail the subtask.
enum class RemoteFallback { NeutralScore, FailEpisode };

struct EpisodeConfig {
    SensorConfig sensor;
    OracleEstimatorConfig estimator;
    OracleValidatorConfig validator;
    PotentialGraphConfig graph;
    MatcherConfig matcher;
    double goal_glimpse_bonus = 0.25;
    int min_cluster_size = 2;
    int retry_limit = 3;
    int max_steps = 250;  // decision budget per subtask
    Variant variant = Variant::Full;
    std::uint64_t frontier_seed = 0;
    RemoteFallback fallback = RemoteFallback::NeutralScore;

    // Remote plug-ins; the seeded oracles are used when null.
    PotentialEstimator* estimator_override = nullptr;
    ActionValidator* validator_override = nullptr;

    // Optional per-step observer (graph dumps, debugging).
    std::function<void(int step, const PotentialGraph&)> graph_observer;
};

/// Runs the sense -> frontier -> estimate -> propagate -> decide loop over
/// the scene's goal list with persistent belief, memory, and graph. Failures
/// are encoded in the trace, never thrown.
EpisodeTrace run_episode(const SceneMap& scene, const EpisodeConfig& cfg, std::uint64_t scene_seed = 0,
                         std::uint64_t metric_seed = 0);

}  // namespace scope

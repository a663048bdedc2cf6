#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "scope/frontier.hpp"
#include "scope/scene.hpp"

namespace scope {

struct PotentialVector {
    double sem = 0.0;
    double explore = 0.0;
    double goal = 0.0;
};

enum class EstimateSource { Oracle, Remote };

struct PotentialEstimate {
    PotentialVector vector;
    double aggregate = 0.0;
    EstimateSource source = EstimateSource::Oracle;
};

/// Unweighted mean of the three dimensions.
double aggregate_potential(const PotentialVector& v);

/// Seeded stress knob standing in for estimator error: additive noise of the
/// given standard deviation plus a chance of replacing a score with a uniform
/// draw. Streams are keyed by (seed, step, region id), so estimates are
/// reproducible regardless of evaluation order.
struct OracleNoise {
    std::uint64_t seed = 0;
    double sigma = 0.0;
    double flip_rate = 0.0;
};

struct OracleEstimatorConfig {
    double sem_cap = 6.0;     // objects saturating semantic richness
    double area_cap = 100.0;  // cells saturating explorability
    double co_cap = 4.0;      // same-category co-occurrences saturating soft goal relevance
    OracleNoise noise;
};

/// Everything an estimator may look at for one frontier. The oracle peeks at
/// ground truth behind the frontier; remote adapters only use the snapshot.
struct EstimateContext {
    const SceneMap& scene;
    const OccupancyBelief& belief;
    const FrontierRegion& region;
    int step = 0;
};

/// Per-snapshot outcome of a batch call. error is empty on success,
/// otherwise "remote_unavailable" or "malformed_response".
struct EstimateResult {
    PotentialEstimate value;
    std::string error;

    bool ok() const { return error.empty(); }
};

class PotentialEstimator {
  public:
    virtual ~PotentialEstimator() = default;
    virtual PotentialEstimate estimate(const FrontierSnapshot& snapshot, const GoalSpec& goal,
                                       const EstimateContext& ctx) = 0;

    /// Scores one step's frontiers. The default runs sequentially; remote
    /// adapters may overlap requests, but results always come back in input
    /// order with per-item errors captured.
    virtual std::vector<EstimateResult> estimate_batch(const std::vector<const FrontierSnapshot*>& snapshots,
                                                       const GoalSpec& goal,
                                                       const std::vector<const EstimateContext*>& contexts);
};

/// Deterministic ground-truth estimator: scores the Unknown component behind
/// the frontier by object density, area, and goal presence, then applies the
/// configured noise and clamps to [0, 1].
class OraclePotentialEstimator final : public PotentialEstimator {
  public:
    explicit OraclePotentialEstimator(OracleEstimatorConfig cfg) : cfg_(cfg) {}

    PotentialEstimate estimate(const FrontierSnapshot& snapshot, const GoalSpec& goal,
                               const EstimateContext& ctx) override;

    const OracleEstimatorConfig& config() const { return cfg_; }

  private:
    OracleEstimatorConfig cfg_;
};

/// The 4-connected component of Unknown cells adjacent to the region's
/// frontier cells — the space a frontier is a gateway to.
std::vector<Cell> hidden_component(const OccupancyBelief& belief, const FrontierRegion& region);

}  // namespace scope

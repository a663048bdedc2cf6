#pragma once

#include <string>

#include "scope/estimator.hpp"
#include "scope/policy.hpp"

namespace scope {

/// Connection settings for the external scoring service. Endpoint and token
/// default from SCOPE_VLM_ENDPOINT / SCOPE_VLM_TOKEN when unset.
struct RemoteConfig {
    std::string endpoint;  // e.g. http://127.0.0.1:8791/score
    std::string auth_token;
    int timeout_ms = 2000;
    int retries = 2;       // extra attempts on RemoteUnavailable-class failures
    int max_inflight = 4;  // concurrent requests per batch

    static RemoteConfig from_env();
};

/// POSTs a JSON body and returns the parsed JSON response. Connection
/// failures, timeouts, and non-200 statuses raise RemoteUnavailable after the
/// configured retries; non-JSON bodies raise MalformedResponse.
std::string remote_post(const RemoteConfig& cfg, const std::string& body);

/// Scores frontiers through the remote contract:
///   request  {goal, snapshot: {objects, unknown_ray_fraction, viewpoint}, dimensions}
///   response {scores: {semantic_richness, explorability, goal_relevance}, aggregate}
/// All values must be in [0, 1] or the response is rejected as malformed. A
/// remote aggregate more than 0.2 from the mean of the scores is kept but
/// warned about on stderr.
class RemotePotentialEstimator final : public PotentialEstimator {
  public:
    explicit RemotePotentialEstimator(RemoteConfig cfg) : cfg_(std::move(cfg)) {}

    PotentialEstimate estimate(const FrontierSnapshot& snapshot, const GoalSpec& goal,
                               const EstimateContext& ctx) override;

    /// Bounded-concurrent dispatch (cfg.max_inflight workers); results return
    /// in input order regardless of completion order.
    std::vector<EstimateResult> estimate_batch(const std::vector<const FrontierSnapshot*>& snapshots,
                                               const GoalSpec& goal,
                                               const std::vector<const EstimateContext*>& contexts) override;

  private:
    RemoteConfig cfg_;
};

/// Validates memory actions remotely:
///   request  {goal, snapshot: {objects, viewpoint}, object}
///   response {verdict: CONFIRM|REJECT, confidence}
class RemoteValidator final : public ActionValidator {
  public:
    explicit RemoteValidator(RemoteConfig cfg) : cfg_(std::move(cfg)) {}

    Verdict validate(const GoalSpec& goal, const MemorySnapshot& snapshot, int object_id,
                     const ValidationContext& ctx) override;

  private:
    RemoteConfig cfg_;
};

}  // namespace scope

#include "scope/remote.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "scope/errors.hpp"

namespace scope {

using json = nlohmann::json;

RemoteConfig RemoteConfig::from_env() {
    RemoteConfig cfg;
    if (const char* ep = std::getenv("SCOPE_VLM_ENDPOINT")) cfg.endpoint = ep;
    if (const char* tok = std::getenv("SCOPE_VLM_TOKEN")) cfg.auth_token = tok;
    return cfg;
}

namespace {

struct SplitUrl {
    std::string base;  // scheme://host:port
    std::string path;
};

SplitUrl split_url(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("remote endpoint must include a scheme: " + endpoint);
    const auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

double score_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number())
        throw MalformedResponse(std::string("response missing numeric field '") + key + "'");
    const double v = it->get<double>();
    if (v < 0.0 || v > 1.0)
        throw MalformedResponse(std::string("response field '") + key + "' outside [0, 1]");
    return v;
}

json snapshot_to_json(const std::vector<VisibleObject>& objects, const Vec2& viewpoint, double heading) {
    json snap;
    json objs = json::array();
    for (const auto& vo : objects) {
        json jo;
        jo["id"] = vo.id;
        jo["category"] = vo.category;
        jo["attributes"] = vo.attributes;
        objs.push_back(std::move(jo));
    }
    snap["objects"] = std::move(objs);
    snap["viewpoint"] = {{"position", {viewpoint.x, viewpoint.y}}, {"heading", heading}};
    return snap;
}

}  // namespace

std::string remote_post(const RemoteConfig& cfg, const std::string& body) {
    if (cfg.endpoint.empty()) throw ConfigError("remote endpoint not configured");
    const SplitUrl url = split_url(cfg.endpoint);

    std::string last_error;
    for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
        httplib::Client client(url.base);
        client.set_connection_timeout(0, cfg.timeout_ms * 1000);
        client.set_read_timeout(0, cfg.timeout_ms * 1000);
        client.set_write_timeout(0, cfg.timeout_ms * 1000);
        httplib::Headers headers;
        if (!cfg.auth_token.empty()) headers.emplace("Authorization", "Bearer " + cfg.auth_token);

        auto res = client.Post(url.path, headers, body, "application/json");
        if (!res) {
            last_error = "transport error " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        return res->body;
    }
    throw RemoteUnavailable("remote endpoint " + cfg.endpoint + " unavailable (" + last_error + ")");
}

PotentialEstimate RemotePotentialEstimator::estimate(const FrontierSnapshot& snapshot,
                                                     const GoalSpec& goal,
                                                     const EstimateContext& /*ctx*/) {
    json req;
    req["goal"] = goal.describe();
    json snap = snapshot_to_json(snapshot.visible_objects, snapshot.viewpoint, snapshot.heading);
    snap["unknown_ray_fraction"] = snapshot.unknown_ray_fraction;
    req["snapshot"] = std::move(snap);
    req["dimensions"] = {"semantic_richness", "explorability", "goal_relevance"};

    const std::string body = remote_post(cfg_, req.dump());
    json res;
    try {
        res = json::parse(body);
    } catch (const json::parse_error&) {
        throw MalformedResponse("response is not valid JSON");
    }
    if (!res.is_object() || !res.contains("scores") || !res["scores"].is_object())
        throw MalformedResponse("response missing 'scores' object");

    PotentialEstimate est;
    est.vector.sem = score_field(res["scores"], "semantic_richness");
    est.vector.explore = score_field(res["scores"], "explorability");
    est.vector.goal = score_field(res["scores"], "goal_relevance");
    est.aggregate = score_field(res, "aggregate");
    est.source = EstimateSource::Remote;

    const double expected = aggregate_potential(est.vector);
    if (std::abs(est.aggregate - expected) > 0.2) {
        std::cerr << "[scope] warning: remote aggregate " << est.aggregate
                  << " differs from score mean " << expected << " by more than 0.2\n";
    }
    return est;
}

std::vector<EstimateResult> RemotePotentialEstimator::estimate_batch(
    const std::vector<const FrontierSnapshot*>& snapshots, const GoalSpec& goal,
    const std::vector<const EstimateContext*>& contexts) {
    std::vector<EstimateResult> out(snapshots.size());
    std::atomic<size_t> cursor{0};
    const int workers = std::max(1, std::min<int>(cfg_.max_inflight, static_cast<int>(snapshots.size())));

    auto worker = [&]() {
        while (true) {
            const size_t i = cursor.fetch_add(1);
            if (i >= snapshots.size()) return;
            try {
                out[i].value = estimate(*snapshots[i], goal, *contexts[i]);
            } catch (const RemoteUnavailable&) {
                out[i].error = "remote_unavailable";
            } catch (const MalformedResponse&) {
                out[i].error = "malformed_response";
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

Verdict RemoteValidator::validate(const GoalSpec& goal, const MemorySnapshot& snapshot, int object_id,
                                  const ValidationContext& /*ctx*/) {
    json req;
    req["goal"] = goal.describe();
    req["snapshot"] = snapshot_to_json(snapshot.visible_objects, snapshot.viewpoint, snapshot.heading);
    req["object"] = object_id;

    const std::string body = remote_post(cfg_, req.dump());
    json res;
    try {
        res = json::parse(body);
    } catch (const json::parse_error&) {
        throw MalformedResponse("response is not valid JSON");
    }
    if (!res.is_object() || !res.contains("verdict") || !res["verdict"].is_string())
        throw MalformedResponse("response missing 'verdict'");
    const std::string verdict = res["verdict"].get<std::string>();
    if (verdict != "CONFIRM" && verdict != "REJECT")
        throw MalformedResponse("verdict must be CONFIRM or REJECT");

    Verdict v;
    v.kind = verdict == "CONFIRM" ? VerdictKind::Confirm : VerdictKind::Reject;
    v.confidence = score_field(res, "confidence");
    if (res.contains("rationale") && res["rationale"].is_string())
        v.rationale = res["rationale"].get<std::string>();
    return v;
}

}  // namespace scope

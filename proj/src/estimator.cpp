#include "scope/estimator.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "scope/rng.hpp"

namespace scope {

double aggregate_potential(const PotentialVector& v) { return (v.sem + v.explore + v.goal) / 3.0; }

std::vector<EstimateResult> PotentialEstimator::estimate_batch(
    const std::vector<const FrontierSnapshot*>& snapshots, const GoalSpec& goal,
    const std::vector<const EstimateContext*>& contexts) {
    std::vector<EstimateResult> out(snapshots.size());
    for (size_t i = 0; i < snapshots.size(); ++i) {
        try {
            out[i].value = estimate(*snapshots[i], goal, *contexts[i]);
        } catch (const RemoteUnavailable&) {
            out[i].error = "remote_unavailable";
        } catch (const MalformedResponse&) {
            out[i].error = "malformed_response";
        }
    }
    return out;
}

std::vector<Cell> hidden_component(const OccupancyBelief& belief, const FrontierRegion& region) {
    std::set<Cell> seen;
    std::deque<Cell> queue;
    for (const Cell c : region.cells) {
        for (const Cell d : kNeighbors4) {
            const Cell n = offset(c, d);
            if (belief.unknown(n) && seen.insert(n).second) queue.push_back(n);
        }
    }
    std::vector<Cell> comp;
    while (!queue.empty()) {
        const Cell cur = queue.front();
        queue.pop_front();
        comp.push_back(cur);
        for (const Cell d : kNeighbors4) {
            const Cell n = offset(cur, d);
            if (belief.unknown(n) && seen.insert(n).second) queue.push_back(n);
        }
    }
    std::sort(comp.begin(), comp.end());
    return comp;
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double perturb(double score, const OracleNoise& noise, int step, int region_id, int component) {
    Rng rng{noise.seed, static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(region_id),
            static_cast<std::uint64_t>(component)};
    // Draw order is fixed so streams stay aligned whatever the knob values.
    const bool flip = rng.bernoulli(noise.flip_rate);
    const double uniform = rng.uniform01();
    const double jitter = rng.gauss_approx();
    if (flip) return clamp01(uniform);
    return clamp01(score + noise.sigma * jitter);
}

}  // namespace

PotentialEstimate OraclePotentialEstimator::estimate(const FrontierSnapshot& /*snapshot*/,
                                                     const GoalSpec& goal, const EstimateContext& ctx) {
    const std::vector<Cell> comp = hidden_component(ctx.belief, ctx.region);
    const std::set<Cell> comp_set(comp.begin(), comp.end());

    int object_count = 0;
    bool goal_present = false;
    int co_occurrences = 0;
    const std::set<std::string> target_cats = goal_target_categories(ctx.scene, goal);
    for (const auto& obj : ctx.scene.objects) {
        if (!comp_set.count(obj.position)) continue;
        ++object_count;
        if (object_matches_goal(goal, obj))
            goal_present = true;
        else if (target_cats.count(obj.category))
            ++co_occurrences;
    }

    PotentialVector v;
    v.sem = clamp01(object_count / cfg_.sem_cap);
    v.explore = clamp01(static_cast<double>(comp.size()) / cfg_.area_cap);
    v.goal = goal_present ? 1.0 : clamp01(co_occurrences / cfg_.co_cap);

    v.sem = perturb(v.sem, cfg_.noise, ctx.step, ctx.region.id, 0);
    v.explore = perturb(v.explore, cfg_.noise, ctx.step, ctx.region.id, 1);
    v.goal = perturb(v.goal, cfg_.noise, ctx.step, ctx.region.id, 2);

    PotentialEstimate est;
    est.vector = v;
    est.aggregate = aggregate_potential(v);
    est.source = EstimateSource::Oracle;
    return est;
}

}  // namespace scope

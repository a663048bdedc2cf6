#include "scope/episode.hpp"

#include <algorithm>

#include "scope/errors.hpp"

namespace scope {

namespace {

PotentialEstimate neutral_estimate() {
    PotentialEstimate est;
    est.vector = {0.5, 0.5, 0.5};
    est.aggregate = 0.5;
    est.source = EstimateSource::Remote;
    return est;
}

}  // namespace

EpisodeTrace run_episode(const SceneMap& scene, const EpisodeConfig& cfg, std::uint64_t scene_seed,
                         std::uint64_t metric_seed) {
    EpisodeTrace trace;
    trace.scene_seed = scene_seed;
    trace.variant = cfg.variant;
    trace.metric_seed = metric_seed;

    AgentState agent;
    agent.position = scene.center(scene.spawn);
    OccupancyBelief belief(scene);
    ExploredMemory memory;
    PotentialGraph graph(scene.width, scene.height, scene.cell_size, cfg.graph);

    OraclePotentialEstimator oracle_estimator(cfg.estimator);
    PotentialEstimator& estimator =
        cfg.estimator_override != nullptr ? *cfg.estimator_override : oracle_estimator;
    OracleValidator oracle_validator(cfg.validator);
    ActionValidator& validator = cfg.validator_override != nullptr ? *cfg.validator_override : oracle_validator;

    PolicyConfig pcfg;
    pcfg.matcher = cfg.matcher;
    pcfg.goal_glimpse_bonus = cfg.goal_glimpse_bonus;
    pcfg.frontier_selection = cfg.variant == Variant::RandomFrontier ? FrontierSelection::UniformRandom
                                                                     : FrontierSelection::BestScore;
    pcfg.frontier_seed = cfg.frontier_seed;
    pcfg.retry_limit = cfg.retry_limit;
    pcfg.reconsider = cfg.variant != Variant::NoReconsideration;

    const bool use_graph = cfg.variant != Variant::NoPotentialGraph;
    const bool blank_frontier_images = cfg.variant == Variant::NoFrontierImage;

    int decision_idx = 0;
    graph.record_visit(scene.spawn);

    for (int sub = 0; sub < static_cast<int>(scene.goals.size()); ++sub) {
        const GoalSpec& goal = scene.goals[sub];
        const double path_at_start = agent.path_length;
        double p_opt = optimal_path_length(scene, agent.cell(scene.cell_size), goal);
        if (p_opt <= 0.0) p_opt = scene.cell_size;  // chained subtasks may start satisfied

        SubtaskResult result;
        result.index = sub;
        result.goal = goal;
        result.optimal_path_length = p_opt;
        result.final_kind = "frontier_timeout";
        result.confidence = 0.0;
        bool done = false;

        while (result.decisions < cfg.max_steps && !done) {
            MemorySnapshot snap = sense_panorama(scene, agent, belief, cfg.sensor);
            snap.step = decision_idx;
            memory.snapshots.push_back(std::move(snap));

            std::vector<FrontierRegion> regions =
                cluster_frontiers(extract_frontiers(belief), scene.cell_size, cfg.min_cluster_size);
            for (auto& region : regions)
                region.snapshot = snapshot_frontier(scene, belief, region, cfg.sensor);

            DecisionEvent ev;
            ev.step = decision_idx;
            ev.subtask = sub;
            ev.agent_pos = agent.position;
            ev.heading = agent.heading;

            // Estimate every frontier; remote failures fall back per config.
            std::vector<PotentialEstimate> estimates(regions.size());
            bool estimator_failed = false;
            if (!regions.empty()) {
                std::vector<EstimateContext> contexts;
                contexts.reserve(regions.size());
                for (const auto& region : regions)
                    contexts.push_back(EstimateContext{scene, belief, region, decision_idx});
                std::vector<const FrontierSnapshot*> snaps;
                std::vector<const EstimateContext*> ctxs;
                for (size_t i = 0; i < regions.size(); ++i) {
                    snaps.push_back(&regions[i].snapshot);
                    ctxs.push_back(&contexts[i]);
                }
                const std::vector<EstimateResult> results = estimator.estimate_batch(snaps, goal, ctxs);
                for (size_t i = 0; i < results.size(); ++i) {
                    if (results[i].ok()) {
                        estimates[i] = results[i].value;
                    } else if (cfg.fallback == RemoteFallback::NeutralScore) {
                        estimates[i] = neutral_estimate();
                        ++ev.estimator_fallbacks;
                    } else {
                        estimator_failed = true;
                    }
                }
            }
            if (estimator_failed) {
                result.final_kind = "estimator_error";
                break;
            }

            if (use_graph) {
                for (size_t i = 0; i < regions.size(); ++i) {
                    const Vec2 pos = scene.center(regions[i].representative);
                    graph.propagate(pos, estimates[i]);
                    ev.propagations.push_back(
                        {regions[i].id, pos, estimates[i].vector, estimates[i].aggregate});
                }
            }

            // Frontier candidates carry graph scores (or raw aggregates when
            // the graph is disabled) and possibly image-blanked snapshots.
            std::vector<FrontierSnapshot> blanked;
            if (blank_frontier_images) {
                blanked.reserve(regions.size());
                for (const auto& region : regions) {
                    FrontierSnapshot s = region.snapshot;
                    s.visible_objects.clear();
                    blanked.push_back(std::move(s));
                }
            }
            std::vector<FrontierCandidate> candidates;
            for (size_t i = 0; i < regions.size(); ++i) {
                FrontierCandidate fc;
                fc.region_id = regions[i].id;
                fc.score = use_graph ? graph.score_frontier(regions[i]) : estimates[i].aggregate;
                fc.snapshot = blank_frontier_images ? &blanked[i] : &regions[i].snapshot;
                fc.representative = regions[i].representative;
                candidates.push_back(fc);
                ev.frontier_scores.push_back({regions[i].id, regions[i].representative, fc.score});
            }

            if (cfg.graph_observer) cfg.graph_observer(decision_idx, graph);

            PolicyKnowledge knowledge{scene, memory, std::move(candidates), decision_idx};
            const ValidationContext vctx{scene, belief, agent.cell(scene.cell_size), decision_idx};

            Action action;
            DecisionRecord record;
            try {
                std::tie(action, record) = decide(goal, knowledge, pcfg, validator, vctx);
            } catch (const NoActionAvailable&) {
                result.final_kind = "no_action";
                break;
            }
            ev.record = record;

            if (action.kind == Action::Kind::Memory) {
                const ObjectInstance* obj = scene.object_by_id(action.object_id);
                const Cell target = memory_action_target(belief, agent.cell(scene.cell_size),
                                                         obj->position, scene.cell_size);
                const std::vector<Cell> path = plan_path(belief, agent.cell(scene.cell_size), target);
                agent = move_along(scene, agent, path);
                for (const Cell c : path) graph.record_visit(c);
                ev.path = path;
                result.success = goal_satisfied(scene, goal, agent.position);
                ev.truth = result.success;
                result.truth = result.success;
                result.final_kind = "memory";
                result.confidence = record.confidence;
                result.forced = record.forced;
                done = true;
            } else {
                const FrontierRegion* chosen = nullptr;
                for (const auto& region : regions) {
                    if (region.id == action.region_id) {
                        chosen = &region;
                        break;
                    }
                }
                const std::vector<Cell> path =
                    plan_path(belief, agent.cell(scene.cell_size), chosen->representative);
                agent = move_along(scene, agent, path);
                for (const Cell c : path) graph.record_visit(c);
                ev.path = path;
            }

            trace.decisions.push_back(std::move(ev));
            ++result.decisions;
            ++decision_idx;
        }

        result.agent_path_length = agent.path_length - path_at_start;
        trace.subtasks.push_back(std::move(result));
    }

    trace.total_path_length = agent.path_length;
    trace.all_success = !trace.subtasks.empty() &&
                        std::all_of(trace.subtasks.begin(), trace.subtasks.end(),
                                    [](const SubtaskResult& s) { return s.success; });
    return trace;
}

}  // namespace scope

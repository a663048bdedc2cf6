#include "scope/policy.hpp"

#include <algorithm>
#include <deque>

#include "scope/errors.hpp"
#include "scope/rng.hpp"

namespace scope {

Cell memory_action_target(const OccupancyBelief& belief, Cell agent_cell, Cell object_cell,
                          double cell_size) {
    // BFS over observed-free space; pick the reached cell whose center is
    // closest to the object, ties row-major.
    Grid2D<std::uint8_t> seen(belief.width(), belief.height(), 0);
    std::deque<Cell> queue{agent_cell};
    seen.at(agent_cell) = 1;
    Cell best = agent_cell;
    double best_d = distance(cell_center(agent_cell, cell_size), cell_center(object_cell, cell_size));
    while (!queue.empty()) {
        const Cell cur = queue.front();
        queue.pop_front();
        const double d = distance(cell_center(cur, cell_size), cell_center(object_cell, cell_size));
        if (d < best_d || (d == best_d && cur < best)) {
            best = cur;
            best_d = d;
        }
        for (const Cell dd : kNeighbors4) {
            const Cell next = offset(cur, dd);
            if (belief.known_free(next) && !seen.at(next)) {
                seen.at(next) = 1;
                queue.push_back(next);
            }
        }
    }
    return best;
}

bool memory_action_truth(const GoalSpec& goal, int object_id, const ValidationContext& ctx) {
    const ObjectInstance* obj = ctx.scene.object_by_id(object_id);
    if (obj == nullptr) return false;
    if (!object_matches_goal(goal, *obj)) return false;
    const Cell target =
        memory_action_target(ctx.belief, ctx.agent_cell, obj->position, ctx.scene.cell_size);
    return goal_satisfied(ctx.scene, goal, ctx.scene.center(target));
}

Verdict OracleValidator::validate(const GoalSpec& goal, const MemorySnapshot& snapshot, int object_id,
                                  const ValidationContext& ctx) {
    const bool truth = memory_action_truth(goal, object_id, ctx);
    Rng rng{cfg_.seed, static_cast<std::uint64_t>(ctx.step), static_cast<std::uint64_t>(snapshot.step),
            static_cast<std::uint64_t>(object_id)};
    const bool flip = rng.bernoulli(truth ? cfg_.fn_rate : cfg_.fp_rate);
    const bool confirm = truth != flip;
    Verdict v;
    v.kind = confirm ? VerdictKind::Confirm : VerdictKind::Reject;
    v.confidence = confirm ? 1.0 - cfg_.fp_rate : 1.0 - cfg_.fn_rate;
    return v;
}

bool needs_refinement(const Action& a) { return a.kind == Action::Kind::Memory; }

namespace {

bool is_excluded(const Action& a, const std::vector<Action>& excluded) {
    return std::find(excluded.begin(), excluded.end(), a) != excluded.end();
}

bool snapshot_shows_goal(const FrontierSnapshot& snap, const GoalSpec& goal) {
    for (const auto& vo : snap.visible_objects) {
        ObjectInstance probe{vo.id, vo.category, vo.attributes, {}};
        if (object_matches_goal(goal, probe)) return true;
    }
    return false;
}

}  // namespace

Action propose(const GoalSpec& goal, const PolicyKnowledge& knowledge,
               const std::vector<Action>& excluded, const PolicyConfig& cfg) {
    // Memory route first: any snapshot/object pair the matcher accepts.
    const std::set<std::string> decoy_cats = goal_target_categories(knowledge.scene, goal);
    int best_snapshot = -1;
    int best_object = -1;
    for (int i = 0; i < static_cast<int>(knowledge.memory.snapshots.size()); ++i) {
        const MemorySnapshot& snap = knowledge.memory.snapshots[i];
        for (const auto& vo : snap.visible_objects) {
            const Action cand = Action::memory(i, vo.id);
            if (is_excluded(cand, excluded)) continue;
            ObjectInstance probe{vo.id, vo.category, vo.attributes, {}};
            bool accepted = object_matches_goal(goal, probe);
            if (!accepted && cfg.matcher.m_err > 0.0 && decoy_cats.count(vo.category)) {
                // Seeded per (step, snapshot, object): the same spurious match
                // fires consistently within one decision.
                Rng rng{cfg.matcher.seed, static_cast<std::uint64_t>(knowledge.step),
                        static_cast<std::uint64_t>(snap.step), static_cast<std::uint64_t>(vo.id)};
                accepted = rng.bernoulli(cfg.matcher.m_err);
            }
            if (!accepted) continue;
            if (i > best_snapshot || (i == best_snapshot && vo.id < best_object)) {
                best_snapshot = i;
                best_object = vo.id;
            }
        }
    }
    if (best_snapshot >= 0) return Action::memory(best_snapshot, best_object);

    std::vector<const FrontierCandidate*> open;
    for (const auto& fc : knowledge.frontiers) {
        if (!is_excluded(Action::frontier(fc.region_id), excluded)) open.push_back(&fc);
    }
    if (open.empty()) throw NoActionAvailable("memory and frontiers exhausted");

    std::sort(open.begin(), open.end(),
              [](const FrontierCandidate* a, const FrontierCandidate* b) { return a->region_id < b->region_id; });

    if (cfg.frontier_selection == FrontierSelection::UniformRandom) {
        Rng rng{cfg.frontier_seed, static_cast<std::uint64_t>(knowledge.step)};
        return Action::frontier(open[rng.pick_index(static_cast<int>(open.size()))]->region_id);
    }

    const FrontierCandidate* best = nullptr;
    double best_score = 0.0;
    for (const FrontierCandidate* fc : open) {
        double score = fc->score;
        if (fc->snapshot != nullptr && cfg.goal_glimpse_bonus > 0.0 &&
            snapshot_shows_goal(*fc->snapshot, goal))
            score += cfg.goal_glimpse_bonus;
        if (best == nullptr || score > best_score) {
            best = fc;
            best_score = score;
        }
    }
    return Action::frontier(best->region_id);
}

std::pair<Action, DecisionRecord> decide(const GoalSpec& goal, const PolicyKnowledge& knowledge,
                                         const PolicyConfig& cfg, ActionValidator& validator,
                                         const ValidationContext& vctx) {
    DecisionRecord record;
    record.step = knowledge.step;
    std::vector<Action> excluded;
    int rejections = 0;

    while (true) {
        const Action cand = propose(goal, knowledge, excluded, cfg);
        record.candidates.push_back(cand);

        if (!needs_refinement(cand)) {
            record.final_action = cand;
            record.confidence = 1.0;
            break;
        }
        if (!cfg.reconsider) {
            // Reconsideration disabled: execute the primary action as-is. The
            // matcher error knob is the only confidence signal available.
            record.final_action = cand;
            record.confidence = 1.0 - cfg.matcher.m_err;
            break;
        }

        const Verdict verdict =
            validator.validate(goal, knowledge.memory.snapshots[cand.snapshot_index], cand.object_id, vctx);
        record.verdicts.push_back(verdict);

        if (verdict.kind == VerdictKind::Confirm) {
            record.final_action = cand;
            record.confidence = verdict.confidence;
            break;
        }

        ++rejections;
        if (rejections >= cfg.retry_limit) {
            // Retry limit reached: the rejected candidate executes anyway.
            record.final_action = cand;
            record.confidence = 1.0 - verdict.confidence;
            record.forced = true;
            break;
        }
        excluded.push_back(cand);
    }

    return {record.final_action, record};
}

std::vector<Cell> plan_path(const OccupancyBelief& belief, Cell from, Cell to) {
    if (from == to) return {};
    if (!belief.known_free(to)) throw Unreachable("target cell not observed free");

    Grid2D<Cell> parent(belief.width(), belief.height(), Cell{-1, -1});
    Grid2D<std::uint8_t> seen(belief.width(), belief.height(), 0);
    std::deque<Cell> queue{from};
    if (belief.in_bounds(from)) seen.at(from) = 1;
    bool found = false;
    while (!queue.empty() && !found) {
        const Cell cur = queue.front();
        queue.pop_front();
        for (const Cell d : kNeighbors4) {
            const Cell next = offset(cur, d);
            if (!belief.known_free(next) || seen.at(next)) continue;
            seen.at(next) = 1;
            parent.at(next) = cur;
            if (next == to) {
                found = true;
                break;
            }
            queue.push_back(next);
        }
    }
    if (!found) throw Unreachable("no observed-free path to target");

    std::vector<Cell> path;
    for (Cell c = to; c != from; c = parent.at(c)) path.push_back(c);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace scope

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scope/estimator.hpp"
#include "scope/frontier.hpp"
#include "scope/potential_graph.hpp"
#include "scope/sim.hpp"

namespace scope {

struct Action {
    enum class Kind { Memory, Frontier };

    Kind kind = Kind::Frontier;
    int snapshot_index = -1;  // Memory: index into ExploredMemory
    int object_id = -1;       // Memory: selected goal candidate
    int region_id = -1;       // Frontier: active region id

    static Action memory(int snapshot_index, int object_id) {
        return {Kind::Memory, snapshot_index, object_id, -1};
    }
    static Action frontier(int region_id) { return {Kind::Frontier, -1, -1, region_id}; }

    bool operator==(const Action&) const = default;
};

enum class VerdictKind { Confirm, Reject };

struct Verdict {
    VerdictKind kind = VerdictKind::Reject;
    double confidence = 0.0;
    std::string rationale;  // empty for oracle validators
};

struct ValidationContext {
    const SceneMap& scene;
    const OccupancyBelief& belief;
    Cell agent_cell;
    int step = 0;
};

class ActionValidator {
  public:
    virtual ~ActionValidator() = default;
    virtual Verdict validate(const GoalSpec& goal, const MemorySnapshot& snapshot, int object_id,
                             const ValidationContext& ctx) = 0;
};

/// Ground-truth validator with seeded error knobs: a true CONFIRM flips to
/// REJECT with fn_rate, a true REJECT flips with fp_rate. Confidence carries
/// the knob-derived reliability of the verdict (1 - fp_rate for CONFIRM,
/// 1 - fn_rate for REJECT).
struct OracleValidatorConfig {
    double fp_rate = 0.0;
    double fn_rate = 0.0;
    std::uint64_t seed = 0;
};

class OracleValidator final : public ActionValidator {
  public:
    explicit OracleValidator(OracleValidatorConfig cfg) : cfg_(cfg) {}
    Verdict validate(const GoalSpec& goal, const MemorySnapshot& snapshot, int object_id,
                     const ValidationContext& ctx) override;

  private:
    OracleValidatorConfig cfg_;
};

/// Where executing memory(i, o) would take the agent: the reachable observed
/// cell nearest to the object's center (ties row-major). Executing the action
/// succeeds iff the goal is satisfied there.
Cell memory_action_target(const OccupancyBelief& belief, Cell agent_cell, Cell object_cell,
                          double cell_size);

/// Ground truth of a memory action: the object matches the goal and walking
/// to its target satisfies it. This is what the oracle validator perturbs.
bool memory_action_truth(const GoalSpec& goal, int object_id, const ValidationContext& ctx);

struct MatcherConfig {
    double m_err = 0.0;  // probability a same-category decoy is proposed
    std::uint64_t seed = 0;
};

enum class FrontierSelection { BestScore, UniformRandom };

struct PolicyConfig {
    MatcherConfig matcher;
    double goal_glimpse_bonus = 0.25;  // added when a frontier snapshot shows a goal match
    FrontierSelection frontier_selection = FrontierSelection::BestScore;
    std::uint64_t frontier_seed = 0;  // UniformRandom draws
    int retry_limit = 3;
    bool reconsider = true;  // false: always execute the first candidate
};

struct FrontierCandidate {
    int region_id = 0;
    double score = 0.0;
    const FrontierSnapshot* snapshot = nullptr;
    Cell representative;
};

struct PolicyKnowledge {
    const SceneMap& scene;
    const ExploredMemory& memory;
    std::vector<FrontierCandidate> frontiers;
    int step = 0;
};

/// Memory-first heuristic policy: the best non-excluded matching
/// (snapshot, object) pair if any (ties: most recent snapshot, then lowest
/// object id), otherwise the best-scoring non-excluded frontier (ties: lowest
/// region id). Throws NoActionAvailable when both routes are exhausted.
Action propose(const GoalSpec& goal, const PolicyKnowledge& knowledge,
               const std::vector<Action>& excluded, const PolicyConfig& cfg);

/// Refinement triggers only for memory actions.
bool needs_refinement(const Action& a);

struct DecisionRecord {
    int step = 0;
    std::vector<Action> candidates;
    std::vector<Verdict> verdicts;
    Action final_action;
    double confidence = 1.0;
    bool forced = false;  // executed despite rejection at the retry limit
};

/// The reconsideration loop: frontier candidates and confirmed memory
/// candidates are final; rejected candidates are excluded and re-proposed.
/// After retry_limit rejections the last candidate executes anyway, flagged
/// forced.
std::pair<Action, DecisionRecord> decide(const GoalSpec& goal, const PolicyKnowledge& knowledge,
                                         const PolicyConfig& cfg, ActionValidator& validator,
                                         const ValidationContext& vctx);

/// Shortest 4-connected path over observed-free cells from `from` to `to`,
/// excluding `from` itself; ties broken by lexicographic neighbor order.
/// Empty iff from == to. Throws Unreachable when no such path exists.
std::vector<Cell> plan_path(const OccupancyBelief& belief, Cell from, Cell to);

}  // namespace scope

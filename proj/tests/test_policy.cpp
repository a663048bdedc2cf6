#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scope/policy.hpp"
#include "support/oracles.hpp"
#include "support/scripted_validator.hpp"

using namespace scope;
using oracles::ScriptedValidator;

namespace {

// Three chairs in an open walled room, goal "chair". Snapshots 0..2 each
// show one distinct chair, so successive proposals walk backwards through
// memory: (2, id 2), (1, id 1), (0, id 0).
struct PolicyFixture {
    SceneMap map;
    OccupancyBelief belief;
    ExploredMemory memory;
    GoalSpec goal = GoalSpec::by_category("chair");
    FrontierSnapshot frontier_snapshot;

    PolicyFixture() {
        std::vector<std::string> rows(12, std::string(12, '.'));
        for (int i = 0; i < 12; ++i) {
            rows[0][i] = rows[11][i] = '#';
            rows[i][0] = rows[i][11] = '#';
        }
        std::vector<ObjectInstance> objects = {
            {0, "chair", {"red"}, {2, 2}},
            {1, "chair", {"blue"}, {2, 8}},
            {2, "chair", {"green"}, {8, 8}},
            {3, "lamp", {"white"}, {8, 2}},
        };
        map = oracles::make_scene(rows, {5, 5}, objects);
        belief.cells = Grid2D<CellKnowledge>(12, 12, CellKnowledge::FreeObserved);
        for (int i = 0; i < 12; ++i) {
            belief.cells.at({0, i}) = CellKnowledge::OccupiedObserved;
            belief.cells.at({11, i}) = CellKnowledge::OccupiedObserved;
            belief.cells.at({i, 0}) = CellKnowledge::OccupiedObserved;
            belief.cells.at({i, 11}) = CellKnowledge::OccupiedObserved;
        }
        for (int i = 0; i < 3; ++i) {
            MemorySnapshot snap;
            snap.step = i;
            snap.viewpoint = map.center({5, 5});
            const auto& obj = map.objects[i];
            snap.visible_objects.push_back({obj.id, obj.category, obj.attributes});
            memory.snapshots.push_back(snap);
        }
    }

    PolicyKnowledge knowledge(std::vector<FrontierCandidate> frontiers = {}, int step = 10) {
        return {map, memory, std::move(frontiers), step};
    }

    ValidationContext vctx(int step = 10) const { return {map, belief, {5, 5}, step}; }

    FrontierCandidate frontier(int id, double score, Cell rep = {1, 1}) {
        return {id, score, &frontier_snapshot, rep};
    }
};

}  // namespace

TEST_CASE("propose prefers matching memory, most recent snapshot, lowest id") {
    PolicyFixture fx;
    PolicyConfig cfg;

    SUBCASE("memory match wins over frontiers") {
        const Action a = propose(fx.goal, fx.knowledge({fx.frontier(0, 0.9)}), {}, cfg);
        CHECK(a == Action::memory(2, 2));
    }
    SUBCASE("excluding candidates walks to older snapshots") {
        const std::vector<Action> excluded = {Action::memory(2, 2)};
        CHECK(propose(fx.goal, fx.knowledge(), excluded, cfg) == Action::memory(1, 1));
    }
    SUBCASE("lowest object id breaks ties within one snapshot") {
        PolicyFixture two;
        MemorySnapshot snap;
        snap.step = 3;
        snap.visible_objects.push_back({2, "chair", {"green"}, {}});
        snap.visible_objects.push_back({0, "chair", {"red"}, {}});
        two.memory.snapshots.push_back(snap);
        CHECK(propose(two.goal, two.knowledge(), {}, cfg) == Action::memory(3, 0));
    }
    SUBCASE("no match falls through to the best frontier") {
        PolicyFixture empty;
        empty.memory.snapshots.clear();
        const Action a =
            propose(empty.goal, empty.knowledge({empty.frontier(0, 0.3), empty.frontier(1, 0.7)}), {}, cfg);
        CHECK(a == Action::frontier(1));
    }
    SUBCASE("frontier ties break by lowest region id") {
        PolicyFixture empty;
        empty.memory.snapshots.clear();
        const Action a =
            propose(empty.goal, empty.knowledge({empty.frontier(2, 0.5), empty.frontier(1, 0.5)}), {}, cfg);
        CHECK(a == Action::frontier(1));
    }
    SUBCASE("excluded memory with no other match falls to frontier") {
        PolicyFixture one;
        one.memory.snapshots.resize(1);  // only snapshot 0 with chair id 0
        const std::vector<Action> excluded = {Action::memory(0, 0)};
        const Action a = propose(one.goal, one.knowledge({one.frontier(4, 0.2)}), excluded, cfg);
        CHECK(a == Action::frontier(4));
    }
    SUBCASE("nothing left raises NoActionAvailable") {
        PolicyFixture empty;
        empty.memory.snapshots.clear();
        CHECK_THROWS_AS(propose(empty.goal, empty.knowledge(), {}, cfg), NoActionAvailable);
        const std::vector<Action> excluded = {Action::frontier(0)};
        CHECK_THROWS_AS(propose(empty.goal, empty.knowledge({empty.frontier(0, 0.4)}), excluded, cfg),
                        NoActionAvailable);
    }
}

TEST_CASE("goal glimpses add a frontier bonus") {
    PolicyFixture fx;
    fx.memory.snapshots.clear();
    PolicyConfig cfg;
    cfg.goal_glimpse_bonus = 0.25;
    FrontierSnapshot showing;
    showing.visible_objects.push_back({0, "chair", {"red"}, {}});
    FrontierCandidate low{0, 0.5, &showing, {1, 1}};
    FrontierCandidate high{1, 0.6, &fx.frontier_snapshot, {1, 2}};
    CHECK(propose(fx.goal, fx.knowledge({low, high}), {}, cfg) == Action::frontier(0));
    // Blanked snapshot (image withheld): the bonus disappears.
    FrontierSnapshot blank = showing;
    blank.visible_objects.clear();
    FrontierCandidate low_blank{0, 0.5, &blank, {1, 1}};
    CHECK(propose(fx.goal, fx.knowledge({low_blank, high}), {}, cfg) == Action::frontier(1));
}

TEST_CASE("matcher error knob proposes same-category decoys deterministically") {
    PolicyFixture fx;
    // Instance goal for chair id 0; chairs 1 and 2 are decoys.
    const GoalSpec goal = GoalSpec::by_instance(0);
    PolicyConfig cfg;
    cfg.matcher.m_err = 1.0;  // every decoy fires
    cfg.matcher.seed = 42;
    const Action a = propose(goal, fx.knowledge(), {}, cfg);
    // Snapshot 2 shows chair id 2, a decoy that must now be proposed.
    CHECK(a == Action::memory(2, 2));

    cfg.matcher.m_err = 0.0;
    const Action honest = propose(goal, fx.knowledge(), {}, cfg);
    CHECK(honest == Action::memory(0, 0));

    // Same seed, same step: identical proposal stream.
    cfg.matcher.m_err = 0.35;
    const Action r1 = propose(goal, fx.knowledge(), {}, cfg);
    const Action r2 = propose(goal, fx.knowledge(), {}, cfg);
    CHECK(r1 == r2);
}

TEST_CASE("refinement triggers only for memory actions") {
    CHECK(needs_refinement(Action::memory(0, 5)));
    CHECK_FALSE(needs_refinement(Action::frontier(2)));
    CHECK_FALSE(needs_refinement(Action::frontier(0)));
}

TEST_CASE("oracle validator checks truth and applies seeded error knobs") {
    PolicyFixture fx;

    SUBCASE("correct goal object confirms with no false negatives") {
        OracleValidator validator({0.0, 0.0, 1});
        const Verdict v = validator.validate(fx.goal, fx.memory.snapshots[0], 0, fx.vctx());
        CHECK(v.kind == VerdictKind::Confirm);
        CHECK(v.confidence == 1.0);
        CHECK(v.rationale.empty());
    }
    SUBCASE("same-category decoy for an instance goal rejects") {
        OracleValidator validator({0.0, 0.0, 1});
        const GoalSpec goal = GoalSpec::by_instance(0);
        const Verdict v = validator.validate(goal, fx.memory.snapshots[2], 2, fx.vctx());
        CHECK(v.kind == VerdictKind::Reject);
    }
    SUBCASE("fn_rate one rejects every true positive") {
        OracleValidator validator({0.0, 1.0, 7});
        for (int step = 0; step < 10; ++step) {
            const Verdict v = validator.validate(fx.goal, fx.memory.snapshots[0], 0, fx.vctx(step));
            CHECK(v.kind == VerdictKind::Reject);
        }
    }
    SUBCASE("fp_rate one confirms every decoy") {
        OracleValidator validator({1.0, 0.0, 7});
        const GoalSpec goal = GoalSpec::by_instance(0);
        for (int step = 0; step < 10; ++step) {
            const Verdict v = validator.validate(goal, fx.memory.snapshots[2], 2, fx.vctx(step));
            CHECK(v.kind == VerdictKind::Confirm);
        }
    }
    SUBCASE("verdicts are deterministic per seed") {
        OracleValidator a({0.5, 0.5, 99});
        OracleValidator b({0.5, 0.5, 99});
        for (int step = 0; step < 20; ++step) {
            const Verdict va = a.validate(fx.goal, fx.memory.snapshots[1], 1, fx.vctx(step));
            const Verdict vb = b.validate(fx.goal, fx.memory.snapshots[1], 1, fx.vctx(step));
            CHECK(va.kind == vb.kind);
        }
    }
}

TEST_CASE("validator truth accounts for where execution would stop") {
    // The goal object sits deep in an unobserved room: every observed cell in
    // the outer corridor is farther than the success distance, so executing
    // the memory action there cannot succeed yet.
    std::vector<std::string> rows = {
        "##############",
        "#............#",
        "#.##########.#",
        "#.#........#.#",
        "#.#........#.#",
        "#.#........#.#",
        "#.#........#.#",
        "#.#........#.#",
        "#.#........#.#",
        "#.#........#.#",
        "#.##.#######.#",
        "#............#",
        "##############",
    };
    std::vector<ObjectInstance> objects = {{0, "chair", {}, {6, 7}}};
    const SceneMap map = oracles::make_scene(rows, {1, 1}, objects);
    OccupancyBelief belief;
    belief.cells = Grid2D<CellKnowledge>(14, 13, CellKnowledge::Unknown);
    // Only the outer corridor is observed.
    for (int r = 0; r < 13; ++r) {
        for (int c = 0; c < 14; ++c) {
            if (map.occupancy.at({r, c}) == Terrain::Free && (r == 1 || r == 11 || c == 1 || c == 12))
                belief.cells.at({r, c}) = CellKnowledge::FreeObserved;
        }
    }
    const ValidationContext ctx{map, belief, {1, 1}, 0};
    CHECK_FALSE(memory_action_truth(GoalSpec::by_category("chair"), 0, ctx));

    // Once the room is observed, its doorway makes the object reachable.
    OccupancyBelief open = belief;
    for (int r = 0; r < 13; ++r) {
        for (int c = 0; c < 14; ++c) {
            if (map.occupancy.at({r, c}) == Terrain::Free)
                open.cells.at({r, c}) = CellKnowledge::FreeObserved;
        }
    }
    const ValidationContext ctx2{map, open, {1, 1}, 0};
    CHECK(memory_action_truth(GoalSpec::by_category("chair"), 0, ctx2));
}

TEST_CASE("decide implements the reconsideration recursion") {
    PolicyFixture fx;
    PolicyConfig cfg;
    cfg.retry_limit = 3;

    SUBCASE("frontier candidates are final with zero validations") {
        PolicyFixture empty;
        empty.memory.snapshots.clear();
        ScriptedValidator validator({});
        auto [action, record] =
            decide(empty.goal, empty.knowledge({empty.frontier(0, 0.4)}), cfg, validator, empty.vctx());
        CHECK(action == Action::frontier(0));
        CHECK(record.candidates.size() == 1);
        CHECK(record.verdicts.empty());
        CHECK(validator.calls == 0);
        CHECK_FALSE(record.forced);
    }
    SUBCASE("confirmed memory candidate is final after one validation") {
        ScriptedValidator validator({VerdictKind::Confirm});
        auto [action, record] = decide(fx.goal, fx.knowledge(), cfg, validator, fx.vctx());
        CHECK(action == Action::memory(2, 2));
        CHECK(record.candidates.size() == 1);
        CHECK(record.verdicts.size() == 1);
        CHECK(record.confidence == 0.9);
        CHECK_FALSE(record.forced);
    }
    SUBCASE("reject-reject-confirm returns the third candidate") {
        ScriptedValidator validator({VerdictKind::Reject, VerdictKind::Reject, VerdictKind::Confirm});
        auto [action, record] = decide(fx.goal, fx.knowledge(), cfg, validator, fx.vctx());
        CHECK(action == Action::memory(0, 0));
        REQUIRE(record.candidates.size() == 3);
        CHECK(record.candidates[0] == Action::memory(2, 2));
        CHECK(record.candidates[1] == Action::memory(1, 1));
        CHECK(record.candidates[2] == Action::memory(0, 0));
        REQUIRE(record.verdicts.size() == 3);
        CHECK(record.verdicts[0].kind == VerdictKind::Reject);
        CHECK(record.verdicts[1].kind == VerdictKind::Reject);
        CHECK(record.verdicts[2].kind == VerdictKind::Confirm);
        CHECK_FALSE(record.forced);
    }
    SUBCASE("rejections at the retry limit force the last candidate") {
        ScriptedValidator validator({VerdictKind::Reject, VerdictKind::Reject, VerdictKind::Reject});
        auto [action, record] = decide(fx.goal, fx.knowledge(), cfg, validator, fx.vctx());
        CHECK(action == Action::memory(0, 0));
        CHECK(record.candidates.size() == 3);
        CHECK(record.verdicts.size() == 3);
        CHECK(record.forced);
        CHECK(record.confidence == doctest::Approx(1.0 - 0.8));
    }
    SUBCASE("rejected memory falls through to a frontier mid-loop") {
        PolicyFixture one;
        one.memory.snapshots.resize(1);
        ScriptedValidator validator({VerdictKind::Reject});
        auto [action, record] =
            decide(one.goal, one.knowledge({one.frontier(3, 0.2)}), cfg, validator, one.vctx());
        CHECK(action == Action::frontier(3));
        CHECK(record.candidates.size() == 2);
        CHECK(record.verdicts.size() == 1);
        CHECK_FALSE(record.forced);
    }
    SUBCASE("no candidate repeats within one decision") {
        ScriptedValidator validator({VerdictKind::Reject, VerdictKind::Reject, VerdictKind::Reject});
        auto [action, record] = decide(fx.goal, fx.knowledge(), cfg, validator, fx.vctx());
        for (size_t i = 0; i < record.candidates.size(); ++i) {
            for (size_t j = i + 1; j < record.candidates.size(); ++j) {
                CHECK(!(record.candidates[i] == record.candidates[j]));
            }
        }
    }
    SUBCASE("reconsideration disabled always executes the primary action") {
        PolicyConfig no_recon = cfg;
        no_recon.reconsider = false;
        no_recon.matcher.m_err = 0.2;
        ScriptedValidator validator({VerdictKind::Reject});
        auto [action, record] = decide(fx.goal, fx.knowledge(), no_recon, validator, fx.vctx());
        CHECK(action == Action::memory(2, 2));
        CHECK(validator.calls == 0);
        CHECK(record.verdicts.empty());
        CHECK(record.confidence == doctest::Approx(0.8));
    }
}

TEST_CASE("random frontier selection is seeded and uniform over regions") {
    PolicyFixture fx;
    fx.memory.snapshots.clear();
    PolicyConfig cfg;
    cfg.frontier_selection = FrontierSelection::UniformRandom;
    cfg.frontier_seed = 77;
    std::set<int> chosen;
    for (int step = 0; step < 40; ++step) {
        const Action a = propose(fx.goal,
                                 fx.knowledge({fx.frontier(0, 0.9), fx.frontier(1, 0.1),
                                               fx.frontier(2, 0.5)},
                                              step),
                                 {}, cfg);
        chosen.insert(a.region_id);
        // Same step and seed always picks the same region.
        const Action b = propose(fx.goal,
                                 fx.knowledge({fx.frontier(0, 0.9), fx.frontier(1, 0.1),
                                               fx.frontier(2, 0.5)},
                                              step),
                                 {}, cfg);
        CHECK(a == b);
    }
    CHECK(chosen.size() == 3);  // all regions get picked over 40 draws
}

TEST_CASE("plan_path finds deterministic shortest observed paths") {
    OccupancyBelief belief;
    belief.cells = Grid2D<CellKnowledge>(10, 10, CellKnowledge::FreeObserved);

    SUBCASE("from equals to yields the empty path") {
        CHECK(plan_path(belief, {2, 2}, {2, 2}).empty());
    }
    SUBCASE("straight corridor of six cells") {
        const auto path = plan_path(belief, {4, 1}, {4, 7});
        CHECK(path.size() == 6);
        CHECK(path.front() == Cell{4, 2});
        CHECK(path.back() == Cell{4, 7});
    }
    SUBCASE("ties resolve by lexicographic neighbor order") {
        // Two equal-length routes to the diagonal cell; BFS with (up, left,
        // right, down) neighbor order discovers (2,2) from (1,2).
        const auto path = plan_path(belief, {1, 1}, {2, 2});
        REQUIRE(path.size() == 2);
        CHECK(path[0] == Cell{1, 2});
        CHECK(path[1] == Cell{2, 2});
    }
    SUBCASE("path length matches the BFS oracle on a generated scene") {
        const SceneMap map = generate_scene(23, {});
        OccupancyBelief full(map);
        for (int r = 0; r < map.height; ++r) {
            for (int c = 0; c < map.width; ++c) {
                full.cells.at({r, c}) = map.is_free({r, c}) ? CellKnowledge::FreeObserved
                                                            : CellKnowledge::OccupiedObserved;
            }
        }
        const Cell from = map.spawn;
        const Cell to = map.objects.front().position;
        const auto path = plan_path(full, from, to);
        CHECK(static_cast<int>(path.size()) == oracles::bfs_hops(map, from, to));
    }
    SUBCASE("unknown gaps are not traversable") {
        OccupancyBelief gap;
        gap.cells = Grid2D<CellKnowledge>(10, 10, CellKnowledge::FreeObserved);
        for (int r = 0; r < 10; ++r) gap.cells.at({r, 5}) = CellKnowledge::Unknown;
        CHECK_THROWS_AS(plan_path(gap, {2, 2}, {2, 8}), Unreachable);
    }
}

TEST_CASE("memory action target is the closest reachable observed cell") {
    OccupancyBelief belief;
    belief.cells = Grid2D<CellKnowledge>(10, 10, CellKnowledge::FreeObserved);
    for (int r = 0; r < 10; ++r) belief.cells.at({r, 6}) = CellKnowledge::Unknown;
    // Object sits beyond the unknown column; the best observed cell hugs it.
    const Cell target = memory_action_target(belief, {5, 1}, {5, 8}, 0.25);
    CHECK(target == Cell{5, 5});
    // An observed object cell is its own target.
    OccupancyBelief open;
    open.cells = Grid2D<CellKnowledge>(10, 10, CellKnowledge::FreeObserved);
    CHECK(memory_action_target(open, {5, 1}, {5, 8}, 0.25) == Cell{5, 8});
}

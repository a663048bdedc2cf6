#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scope/estimator.hpp"
#include "support/oracles.hpp"

using namespace scope;

namespace {

// Observed corridor on the left opening into an unknown room on the right.
// The frontier column sits at col 3; everything right of it is hidden.
struct Fixture {
    SceneMap map;
    OccupancyBelief belief;
    FrontierRegion region;

    explicit Fixture(std::vector<ObjectInstance> objects) {
        std::vector<std::string> scene_rows = {
            "##########",
            "#........#",
            "#........#",
            "#........#",
            "#........#",
            "##########",
        };
        map = oracles::make_scene(scene_rows, {2, 1}, std::move(objects));
        std::vector<std::string> belief_rows = {
            "####??????",
            "#...??????",
            "#...??????",
            "#...??????",
            "#...??????",
            "####??????",
        };
        belief = oracles::make_belief(belief_rows);
        region.id = 0;
        region.cells = {{1, 3}, {2, 3}, {3, 3}, {4, 3}};
        region.representative = {2, 3};
        region.centroid = cell_center({2, 3}, map.cell_size);
    }

    EstimateContext ctx(int step = 0) const { return {map, belief, region, step}; }
};

}  // namespace

TEST_CASE("aggregate is the mean of the three dimensions") {
    CHECK(aggregate_potential({0.0, 0.0, 0.0}) == 0.0);
    CHECK(aggregate_potential({1.0, 1.0, 1.0}) == 1.0);
    CHECK(aggregate_potential({0.2, 0.4, 0.9}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hidden component is the unknown space behind the frontier") {
    Fixture fx({});
    const std::vector<Cell> comp = hidden_component(fx.belief, fx.region);
    // Everything unknown is 4-connected to the frontier here: cols 4..9 of
    // rows 1..4 plus the unknown wall rows at top/bottom (cols 4..9).
    std::set<Cell> expect;
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 10; ++c) {
            if (fx.belief.unknown({r, c})) expect.insert({r, c});
        }
    }
    // Flood from the region's unknown neighbors only reaches the connected part.
    CHECK(std::set<Cell>(comp.begin(), comp.end()) == expect);
    CHECK(std::is_sorted(comp.begin(), comp.end()));
}

TEST_CASE("empty hidden space scores zero semantics and goal") {
    Fixture fx({});
    OraclePotentialEstimator est({});
    const GoalSpec goal = GoalSpec::by_category("chair");
    const PotentialEstimate e = est.estimate(fx.region.snapshot, goal, fx.ctx());
    CHECK(e.vector.sem == 0.0);
    CHECK(e.vector.goal == 0.0);
    const double area = static_cast<double>(hidden_component(fx.belief, fx.region).size());
    CHECK(e.vector.explore == doctest::Approx(area / 100.0).epsilon(1e-12));
    CHECK(e.aggregate == doctest::Approx(aggregate_potential(e.vector)).epsilon(1e-12));
    CHECK(e.source == EstimateSource::Oracle);
}

TEST_CASE("goal object behind the frontier forces goal relevance to one") {
    Fixture fx({{0, "chair", {"red", "wood"}, {2, 6}}});
    OraclePotentialEstimator est({});
    const PotentialEstimate e =
        est.estimate(fx.region.snapshot, GoalSpec::by_category("chair"), fx.ctx());
    CHECK(e.vector.goal == 1.0);
    CHECK(e.vector.sem == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("three hidden objects at sem_cap six give 0.5 semantic richness") {
    Fixture fx({
        {0, "lamp", {}, {1, 5}},
        {1, "sofa", {}, {2, 6}},
        {2, "bed", {}, {3, 7}},
    });
    OraclePotentialEstimator est({});
    const PotentialEstimate e =
        est.estimate(fx.region.snapshot, GoalSpec::by_category("chair"), fx.ctx());
    CHECK(e.vector.sem == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.vector.goal == 0.0);
}

TEST_CASE("same-category co-occurrences give the soft goal score") {
    // Instance goal for a chair outside the component; two decoy chairs inside.
    Fixture fx({
        {0, "chair", {"red"}, {1, 1}},  // the target, already observed
        {1, "chair", {"blue"}, {2, 6}},
        {2, "chair", {"green"}, {3, 7}},
    });
    OracleEstimatorConfig cfg;
    cfg.co_cap = 4.0;
    OraclePotentialEstimator est(cfg);
    const PotentialEstimate e = est.estimate(fx.region.snapshot, GoalSpec::by_instance(0), fx.ctx());
    CHECK(e.vector.goal == doctest::Approx(2.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("adding a goal match never lowers noiseless goal relevance") {
    // Instance goal: first the target sits outside the component (soft score
    // from the decoy), then inside it.
    Fixture without({{0, "chair", {"red"}, {1, 1}}, {1, "chair", {"blue"}, {2, 6}}});
    Fixture with({{0, "chair", {"red"}, {3, 6}}, {1, "chair", {"blue"}, {2, 6}}});
    OraclePotentialEstimator est({});
    const GoalSpec goal = GoalSpec::by_instance(0);
    const double before = est.estimate(without.region.snapshot, goal, without.ctx()).vector.goal;
    const double after = est.estimate(with.region.snapshot, goal, with.ctx()).vector.goal;
    CHECK(before == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
    CHECK(after >= before);
    CHECK(after == 1.0);
}

TEST_CASE("noise keeps scores in range and stays deterministic") {
    Fixture fx({
        {0, "chair", {}, {2, 6}},
        {1, "sofa", {}, {3, 7}},
    });
    const GoalSpec goal = GoalSpec::by_category("chair");

    OracleEstimatorConfig noisy;
    noisy.noise = {12345, 5.0, 0.5};  // absurd sigma to stress the clamp
    OraclePotentialEstimator est(noisy);
    for (int step = 0; step < 50; ++step) {
        const PotentialEstimate e = est.estimate(fx.region.snapshot, goal, fx.ctx(step));
        CHECK(e.vector.sem >= 0.0);
        CHECK(e.vector.sem <= 1.0);
        CHECK(e.vector.explore >= 0.0);
        CHECK(e.vector.explore <= 1.0);
        CHECK(e.vector.goal >= 0.0);
        CHECK(e.vector.goal <= 1.0);
        CHECK(e.aggregate >= 0.0);
        CHECK(e.aggregate <= 1.0);
    }

    OraclePotentialEstimator twin(noisy);
    for (int step = 0; step < 10; ++step) {
        const PotentialEstimate a = est.estimate(fx.region.snapshot, goal, fx.ctx(step));
        const PotentialEstimate b = twin.estimate(fx.region.snapshot, goal, fx.ctx(step));
        CHECK(a.vector.sem == b.vector.sem);
        CHECK(a.vector.explore == b.vector.explore);
        CHECK(a.vector.goal == b.vector.goal);
        CHECK(a.aggregate == b.aggregate);
    }

    // Different seed, different draws.
    OracleEstimatorConfig other = noisy;
    other.noise.seed = 999;
    OraclePotentialEstimator shifted(other);
    const PotentialEstimate a = est.estimate(fx.region.snapshot, goal, fx.ctx(0));
    const PotentialEstimate b = shifted.estimate(fx.region.snapshot, goal, fx.ctx(0));
    CHECK(a.vector.sem != b.vector.sem);
}

TEST_CASE("zero noise is the exact oracle value") {
    Fixture fx({{0, "chair", {}, {2, 6}}});
    OracleEstimatorConfig cfg;
    cfg.noise = {7, 0.0, 0.0};
    OraclePotentialEstimator est(cfg);
    const PotentialEstimate e =
        est.estimate(fx.region.snapshot, GoalSpec::by_category("chair"), fx.ctx());
    CHECK(e.vector.goal == 1.0);
    CHECK(e.vector.sem == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("default batch estimation preserves order") {
    Fixture fx({{0, "chair", {}, {2, 6}}});
    OraclePotentialEstimator est({});
    const GoalSpec goal = GoalSpec::by_category("chair");
    const EstimateContext c0 = fx.ctx(0);
    const EstimateContext c1 = fx.ctx(1);
    const std::vector<const FrontierSnapshot*> snaps{&fx.region.snapshot, &fx.region.snapshot};
    const std::vector<const EstimateContext*> ctxs{&c0, &c1};
    const auto results = est.estimate_batch(snaps, goal, ctxs);
    REQUIRE(results.size() == 2);
    CHECK(results[0].ok());
    CHECK(results[1].ok());
    CHECK(results[0].value.vector.goal == 1.0);
}

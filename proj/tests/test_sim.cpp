#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scope/rng.hpp"
#include "scope/sim.hpp"
#include "support/oracles.hpp"

using namespace scope;

namespace {

SceneMap empty_room(int size) {
    std::vector<std::string> rows(size, std::string(size, '.'));
    for (int i = 0; i < size; ++i) {
        rows[0][i] = rows[size - 1][i] = '#';
        rows[i][0] = rows[i][size - 1] = '#';
    }
    return oracles::make_scene(rows, {size / 2, size / 2});
}

AgentState agent_at(const SceneMap& map, Cell cell) {
    AgentState agent;
    agent.position = map.center(cell);
    return agent;
}

}  // namespace

TEST_CASE("panorama in a small room observes every cell") {
    // 7x7 room (5x5 free interior), range comfortably over the diagonal.
    const SceneMap map = empty_room(7);
    OccupancyBelief belief(map);
    SensorConfig cfg;
    cfg.range_m = 2.0;
    const AgentState agent = agent_at(map, {3, 3});

    sense_panorama(map, agent, belief, cfg);

    for (int r = 0; r < 7; ++r) {
        for (int c = 0; c < 7; ++c) {
            const Cell cell{r, c};
            if (map.is_free(cell))
                CHECK(belief.at(cell) == CellKnowledge::FreeObserved);
            else if (r > 0 && r < 6 && c > 0 && c < 6)
                CHECK(belief.at(cell) == CellKnowledge::OccupiedObserved);
        }
    }
}

TEST_CASE("sensing never contradicts ground truth and knowledge grows") {
    GenParams params;
    SensorConfig cfg;
    for (std::uint64_t seed : {5ull, 21ull, 77ull}) {
        const SceneMap map = generate_scene(seed, params);
        OccupancyBelief belief(map);
        AgentState agent = agent_at(map, map.spawn);
        Rng rng{seed, 0xabc};
        int known_before = 0;
        for (int step = 0; step < 8; ++step) {
            sense_panorama(map, agent, belief, cfg);
            int known = 0;
            for (int r = 0; r < map.height; ++r) {
                for (int c = 0; c < map.width; ++c) {
                    const Cell cell{r, c};
                    const CellKnowledge k = belief.at(cell);
                    if (k == CellKnowledge::FreeObserved) CHECK(map.occupancy.at(cell) == Terrain::Free);
                    if (k == CellKnowledge::OccupiedObserved) CHECK(map.occupancy.at(cell) == Terrain::Wall);
                    if (k != CellKnowledge::Unknown) ++known;
                }
            }
            CHECK(known >= known_before);
            known_before = known;

            // Wander one observed-free step to vary the pose.
            const Cell here = agent.cell(map.cell_size);
            std::vector<Cell> moves;
            for (const Cell d : kNeighbors4) {
                const Cell n = offset(here, d);
                if (belief.known_free(n)) moves.push_back(n);
            }
            REQUIRE(!moves.empty());
            agent = move_along(map, agent, {moves[rng.pick_index(static_cast<int>(moves.size()))]});
        }
    }
}

TEST_CASE("objects behind walls are not visible") {
    std::vector<std::string> rows = {
        "########",
        "#..#...#",
        "#..#...#",
        "#..#...#",
        "#..#...#",
        "#..#...#",
        "#......#",
        "########",
    };
    std::vector<ObjectInstance> objects = {
        {0, "lamp", {}, {1, 1}},   // same side as the agent
        {1, "sofa", {}, {2, 5}},   // across the wall
    };
    const SceneMap map = oracles::make_scene(rows, {2, 1}, objects);
    SensorConfig cfg;
    cfg.range_m = 2.5;
    OccupancyBelief belief(map);
    const AgentState agent = agent_at(map, {2, 1});

    const MemorySnapshot snap = sense_panorama(map, agent, belief, cfg);

    const auto oracle_ids = oracles::visible_object_ids(map, agent.position, cfg.range_m);
    std::set<int> got;
    for (const auto& vo : snap.visible_objects) got.insert(vo.id);
    CHECK(got == oracle_ids);
    CHECK(got.count(0) == 1);
    CHECK(got.count(1) == 0);
}

TEST_CASE("visibility equals the brute-force oracle on random scenes") {
    GenParams params;
    params.size = 24;
    SensorConfig cfg;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SceneMap map = generate_scene(seed, params);
        OccupancyBelief belief(map);
        const AgentState agent = agent_at(map, map.spawn);
        const MemorySnapshot snap = sense_panorama(map, agent, belief, cfg);
        std::set<int> got;
        for (const auto& vo : snap.visible_objects) got.insert(vo.id);
        CHECK(got == oracles::visible_object_ids(map, agent.position, cfg.range_m));
    }
}

TEST_CASE("three 120-degree views cover the full circle") {
    SensorConfig cfg;
    CHECK(cfg.views * cfg.hfov_deg == doctest::Approx(360.0));

    // A panorama from the center of a ring of walls must observe the entire
    // ring: any angular gap would leave some wall cell unknown.
    const SceneMap map = empty_room(9);
    OccupancyBelief belief(map);
    cfg.range_m = 2.5;
    sense_panorama(map, agent_at(map, {4, 4}), belief, cfg);
    for (int i = 0; i < 9; ++i) {
        CHECK(belief.at({0, i}) == CellKnowledge::OccupiedObserved);
        CHECK(belief.at({8, i}) == CellKnowledge::OccupiedObserved);
        CHECK(belief.at({i, 0}) == CellKnowledge::OccupiedObserved);
        CHECK(belief.at({i, 8}) == CellKnowledge::OccupiedObserved);
    }
}

TEST_CASE("move_along accumulates path length and step count") {
    const SceneMap map = empty_room(12);
    AgentState agent = agent_at(map, {5, 2});

    SUBCASE("empty waypoint list is the identity") {
        const AgentState next = move_along(map, agent, {});
        CHECK(next.position == agent.position);
        CHECK(next.path_length == agent.path_length);
        CHECK(next.step_count == agent.step_count);
    }
    SUBCASE("four straight cells add one meter") {
        const std::vector<Cell> path = {{5, 3}, {5, 4}, {5, 5}, {5, 6}};
        const AgentState next = move_along(map, agent, path);
        CHECK(next.path_length == doctest::Approx(1.0));
        CHECK(next.step_count == 4);
        CHECK(next.position == map.center({5, 6}));
    }
    SUBCASE("wall waypoint throws") {
        CHECK_THROWS_AS(move_along(map, agent, {{5, 3}, {5, 4}, {0, 4}}), InvalidPath);
        CHECK_THROWS_AS(move_along(map, agent, std::vector<Cell>{{0, 2}}), InvalidPath);
    }
    SUBCASE("non-adjacent hop throws") {
        CHECK_THROWS_AS(move_along(map, agent, {{5, 4}}), InvalidPath);
        CHECK_THROWS_AS(move_along(map, agent, {{5, 3}, {6, 4}}), InvalidPath);
    }
}

TEST_CASE("path length never decreases over an episode of moves") {
    const SceneMap map = empty_room(12);
    AgentState agent = agent_at(map, {5, 5});
    Rng rng{99};
    double last = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Cell here = agent.cell(map.cell_size);
        std::vector<Cell> moves;
        for (const Cell d : kNeighbors4) {
            const Cell n = offset(here, d);
            if (map.is_free(n)) moves.push_back(n);
        }
        agent = move_along(map, agent, {moves[rng.pick_index(static_cast<int>(moves.size()))]});
        CHECK(agent.path_length >= last);
        last = agent.path_length;
        CHECK(map.is_free(agent.cell(map.cell_size)));
    }
}

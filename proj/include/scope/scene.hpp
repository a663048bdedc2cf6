#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "scope/errors.hpp"
#include "scope/grid.hpp"

namespace scope {

/// Distance (meters) within which stopping next to a matching object counts
/// as success.
inline constexpr double kSuccessDistance = 1.0;

enum class Terrain : std::uint8_t { Free, Wall };

struct ObjectInstance {
    int id = 0;
    std::string category;
    std::set<std::string> attributes;
    Cell position;

    bool operator==(const ObjectInstance&) const = default;
};

enum class GoalKind { Category, Instance, Description };

/// A navigation target. Exactly one payload is meaningful depending on kind:
/// a category label, an object id, or an attribute set that matching objects
/// must contain.
struct GoalSpec {
    GoalKind kind = GoalKind::Category;
    std::string category;
    int object_id = -1;
    std::set<std::string> attributes;

    static GoalSpec by_category(std::string cat);
    static GoalSpec by_instance(int id);
    static GoalSpec by_description(std::set<std::string> attrs);

    /// Stable human-readable rendering, used in traces and remote requests.
    std::string describe() const;

    bool operator==(const GoalSpec&) const = default;
};

/// Ground-truth world: occupancy, labeled objects, spawn, and the goal list
/// executed sequentially by an episode. Immutable after construction.
struct SceneMap {
    int width = 0;
    int height = 0;
    double cell_size = 0.25;
    Grid2D<Terrain> occupancy;
    std::vector<ObjectInstance> objects;
    Cell spawn;
    std::vector<GoalSpec> goals;

    bool in_bounds(Cell c) const { return occupancy.in_bounds(c); }
    bool is_free(Cell c) const { return in_bounds(c) && occupancy.at(c) == Terrain::Free; }
    Vec2 center(Cell c) const { return cell_center(c, cell_size); }
    const ObjectInstance* object_by_id(int id) const;

    bool operator==(const SceneMap&) const = default;
};

struct GenParams {
    int rooms = 4;
    int objects_per_room = 3;
    int size = 32;
    double cell_size = 0.25;
    int goals = 1;
};

/// Procedurally generates a scene: axis-aligned rooms from recursive splits,
/// 1-2 cell doorways, objects drawn from a fixed category/attribute palette,
/// and a spawn whose geodesic to every goal exceeds the success distance.
/// Identical seed+params yield a byte-identical scene. Throws GenerationFailed
/// when the constraints cannot be met (bounded retries).
SceneMap generate_scene(std::uint64_t seed, const GenParams& params);

/// Strict JSON scene file round-trip. load_scene rejects unknown fields and
/// validates every invariant; save(load(x)) and load(save(m)) are identities.
SceneMap load_scene(const std::string& text);
std::string save_scene(const SceneMap& map);

/// Throws InvariantViolation naming the first violated invariant.
void validate_scene(const SceneMap& map);

bool object_matches_goal(const GoalSpec& goal, const ObjectInstance& obj);

/// Categories an imperfect matcher could confuse with the goal: the target's
/// own category for instance goals, categories of all attribute matches for
/// description goals.
std::set<std::string> goal_target_categories(const SceneMap& map, const GoalSpec& goal);

/// True iff agent_pos lies within success_distance of the cell center of some
/// object matching the goal.
bool goal_satisfied(const SceneMap& map, const GoalSpec& goal, const Vec2& agent_pos,
                    double success_distance = kSuccessDistance);

/// 4-connected BFS hop counts over Free cells from start; -1 = unreachable.
Grid2D<int> bfs_distances(const SceneMap& map, Cell start);

/// Geodesic length (meters) from start to the nearest cell whose center
/// satisfies the goal. Returns -1 if no satisfying cell is reachable.
double optimal_path_length(const SceneMap& map, Cell start, const GoalSpec& goal,
                           double success_distance = kSuccessDistance);

}  // namespace scope

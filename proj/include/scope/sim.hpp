#pragma once

#include <string>
#include <vector>

#include "scope/grid.hpp"
#include "scope/scene.hpp"

namespace scope {

struct AgentState {
    Vec2 position;
    double heading = 0.0;
    int step_count = 0;
    double path_length = 0.0;

    Cell cell(double cell_size) const { return cell_of(position, cell_size); }
};

enum class CellKnowledge : std::uint8_t { Unknown, FreeObserved, OccupiedObserved };

/// The agent's partial map. Sensing is noiseless, so observed states always
/// agree with ground truth and never regress to Unknown.
struct OccupancyBelief {
    Grid2D<CellKnowledge> cells;

    OccupancyBelief() = default;
    explicit OccupancyBelief(const SceneMap& map)
        : cells(map.width, map.height, CellKnowledge::Unknown) {}

    int width() const { return cells.width(); }
    int height() const { return cells.height(); }
    bool in_bounds(Cell c) const { return cells.in_bounds(c); }
    CellKnowledge at(Cell c) const { return cells.at(c); }
    bool known_free(Cell c) const { return in_bounds(c) && cells.at(c) == CellKnowledge::FreeObserved; }
    bool unknown(Cell c) const { return in_bounds(c) && cells.at(c) == CellKnowledge::Unknown; }

    bool operator==(const OccupancyBelief&) const = default;
};

struct VisibleObject {
    int id = 0;
    std::string category;
    std::set<std::string> attributes;

    bool operator==(const VisibleObject&) const = default;
};

struct MemorySnapshot {
    int step = 0;
    Vec2 viewpoint;
    double heading = 0.0;
    std::vector<VisibleObject> visible_objects;
    std::string view_descriptor;
};

struct ExploredMemory {
    std::vector<MemorySnapshot> snapshots;
};

struct SensorConfig {
    double range_m = 2.5;      // 10 cells at the default cell size
    int views = 3;             // directional views per panorama
    double hfov_deg = 120.0;   // horizontal field of view per view
    int rays_per_view = 120;
    int frontier_rays = 72;    // rays for frontier snapshot statistics
};

/// Casts one panoramic sweep (views x hfov covering the full circle) from the
/// agent's pose, marking traversed cells FreeObserved and blocking cells
/// OccupiedObserved, and returns a snapshot of objects with unobstructed
/// line of sight within range. The belief is updated in place.
MemorySnapshot sense_panorama(const SceneMap& map, const AgentState& agent, OccupancyBelief& belief,
                              const SensorConfig& cfg);

/// Objects within range and Bresenham line of sight of a viewpoint.
std::vector<VisibleObject> visible_objects_from(const SceneMap& map, const Vec2& viewpoint,
                                                double range_m);

/// Walks the agent through a 4-connected chain of free cells starting
/// adjacent to its current cell. Throws InvalidPath on a wall cell or a
/// non-adjacent hop. An empty waypoint list leaves the state unchanged.
AgentState move_along(const SceneMap& map, const AgentState& agent, const std::vector<Cell>& waypoints);

}  // namespace scope

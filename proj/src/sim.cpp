#include "scope/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scope/raycast.hpp"

namespace scope {

std::vector<VisibleObject> visible_objects_from(const SceneMap& map, const Vec2& viewpoint,
                                                double range_m) {
    const Cell origin = cell_of(viewpoint, map.cell_size);
    std::vector<VisibleObject> out;
    for (const auto& obj : map.objects) {
        if (distance(viewpoint, map.center(obj.position)) > range_m) continue;
        const bool clear = line_of_sight(origin, obj.position, [&](Cell c) {
            return !map.in_bounds(c) || map.occupancy.at(c) == Terrain::Wall;
        });
        if (clear) out.push_back({obj.id, obj.category, obj.attributes});
    }
    return out;
}

MemorySnapshot sense_panorama(const SceneMap& map, const AgentState& agent, OccupancyBelief& belief,
                              const SensorConfig& cfg) {
    const double step_deg = cfg.hfov_deg / cfg.rays_per_view;
    for (int view = 0; view < cfg.views; ++view) {
        const double view_heading = agent.heading + view * (2.0 * kPi / cfg.views);
        for (int k = 0; k < cfg.rays_per_view; ++k) {
            // Rays offset by half a step so view boundaries are not cast twice.
            const double angle =
                view_heading + (-cfg.hfov_deg / 2.0 + (k + 0.5) * step_deg) * kPi / 180.0;
            walk_ray(agent.position, angle, cfg.range_m, map.cell_size, [&](Cell c) {
                if (!map.in_bounds(c)) return false;
                if (map.occupancy.at(c) == Terrain::Wall) {
                    belief.cells.at(c) = CellKnowledge::OccupiedObserved;
                    return false;
                }
                belief.cells.at(c) = CellKnowledge::FreeObserved;
                return true;
            });
        }
    }

    MemorySnapshot snap;
    snap.step = agent.step_count;
    snap.viewpoint = agent.position;
    snap.heading = agent.heading;
    snap.visible_objects = visible_objects_from(map, agent.position, cfg.range_m);
    std::ostringstream desc;
    const Cell c = agent.cell(map.cell_size);
    desc << "view@" << c.row << "," << c.col << "#" << agent.step_count;
    snap.view_descriptor = desc.str();
    return snap;
}

AgentState move_along(const SceneMap& map, const AgentState& agent, const std::vector<Cell>& waypoints) {
    AgentState next = agent;
    Cell prev = agent.cell(map.cell_size);
    for (const Cell w : waypoints) {
        if (!map.is_free(w)) throw InvalidPath("waypoint on wall or out of bounds");
        if (std::abs(w.row - prev.row) + std::abs(w.col - prev.col) != 1)
            throw InvalidPath("waypoints must advance one 4-connected cell at a time");
        const Vec2 target = map.center(w);
        next.path_length += distance(next.position, target);
        next.heading = std::atan2(target.y - next.position.y, target.x - next.position.x);
        next.position = target;
        next.step_count += 1;
        prev = w;
    }
    return next;
}

}  // namespace scope

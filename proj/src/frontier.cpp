#include "scope/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "scope/raycast.hpp"

namespace scope {

std::vector<Cell> extract_frontiers(const OccupancyBelief& belief) {
    std::vector<Cell> out;
    for (int r = 0; r < belief.height(); ++r) {
        for (int c = 0; c < belief.width(); ++c) {
            const Cell cell{r, c};
            if (!belief.known_free(cell)) continue;
            for (const Cell d : kNeighbors4) {
                if (belief.unknown(offset(cell, d))) {
                    out.push_back(cell);
                    break;
                }
            }
        }
    }
    return out;
}

std::vector<FrontierRegion> cluster_frontiers(const std::vector<Cell>& cells, double cell_size,
                                              int min_cluster_size) {
    const std::set<Cell> pool(cells.begin(), cells.end());
    std::set<Cell> seen;
    std::vector<std::vector<Cell>> components;
    for (const Cell start : pool) {
        if (seen.count(start)) continue;
        std::vector<Cell> comp;
        std::deque<Cell> queue{start};
        seen.insert(start);
        while (!queue.empty()) {
            const Cell cur = queue.front();
            queue.pop_front();
            comp.push_back(cur);
            for (const Cell d : kNeighbors8) {
                const Cell next = offset(cur, d);
                if (pool.count(next) && !seen.count(next)) {
                    seen.insert(next);
                    queue.push_back(next);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        if (static_cast<int>(comp.size()) >= min_cluster_size) components.push_back(std::move(comp));
    }

    std::sort(components.begin(), components.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });

    std::vector<FrontierRegion> regions;
    for (int i = 0; i < static_cast<int>(components.size()); ++i) {
        FrontierRegion region;
        region.id = i;
        region.cells = std::move(components[i]);
        Vec2 sum{0.0, 0.0};
        for (const Cell c : region.cells) sum = sum + cell_center(c, cell_size);
        region.centroid = sum * (1.0 / static_cast<double>(region.cells.size()));
        double best = -1.0;
        for (const Cell c : region.cells) {
            const double d = distance(cell_center(c, cell_size), region.centroid);
            if (best < 0.0 || d < best) {
                best = d;
                region.representative = c;
            }
        }
        regions.push_back(std::move(region));
    }
    return regions;
}

FrontierSnapshot snapshot_frontier(const SceneMap& map, const OccupancyBelief& belief,
                                   const FrontierRegion& region, const SensorConfig& cfg) {
    FrontierSnapshot snap;
    snap.viewpoint = map.center(region.representative);

    // Heading: mean of unit vectors toward the region's adjacent Unknown cells.
    std::set<Cell> unknowns;
    for (const Cell c : region.cells) {
        for (const Cell d : kNeighbors4) {
            const Cell n = offset(c, d);
            if (belief.unknown(n)) unknowns.insert(n);
        }
    }
    Vec2 dir{0.0, 0.0};
    for (const Cell u : unknowns) {
        const Vec2 v = map.center(u) - snap.viewpoint;
        const double len = v.norm();
        if (len > 0.0) dir = dir + v * (1.0 / len);
    }
    snap.heading = (dir.x == 0.0 && dir.y == 0.0) ? 0.0 : std::atan2(dir.y, dir.x);

    // Only content the agent has actually observed shows up in the snapshot;
    // occlusion still follows ground-truth walls.
    for (auto& vo : visible_objects_from(map, snap.viewpoint, cfg.range_m)) {
        const ObjectInstance* obj = map.object_by_id(vo.id);
        if (obj != nullptr && belief.known_free(obj->position)) snap.visible_objects.push_back(std::move(vo));
    }

    int unknown_hits = 0;
    for (int k = 0; k < cfg.frontier_rays; ++k) {
        const double angle = (k + 0.5) * 2.0 * kPi / cfg.frontier_rays;
        bool terminated_unknown = false;
        walk_ray(snap.viewpoint, angle, cfg.range_m, map.cell_size, [&](Cell c) {
            if (!belief.in_bounds(c)) return false;
            if (belief.at(c) == CellKnowledge::FreeObserved) return true;
            terminated_unknown = belief.at(c) == CellKnowledge::Unknown;
            return false;
        });
        if (terminated_unknown) ++unknown_hits;
    }
    snap.unknown_ray_fraction = static_cast<double>(unknown_hits) / cfg.frontier_rays;
    return snap;
}

}  // namespace scope

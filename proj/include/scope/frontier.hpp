#pragma once

#include <vector>

#include "scope/sim.hpp"

namespace scope {

struct FrontierSnapshot {
    Vec2 viewpoint;
    double heading = 0.0;
    std::vector<VisibleObject> visible_objects;
    double unknown_ray_fraction = 0.0;
};

/// An 8-connected cluster of frontier cells treated as one exploration
/// candidate. Ids are assigned per extraction (descending size, then
/// row-major first cell) and are not persistent across steps.
struct FrontierRegion {
    int id = 0;
    std::vector<Cell> cells;  // sorted row-major
    Vec2 centroid;
    Cell representative;
    FrontierSnapshot snapshot;
};

/// Exactly the FreeObserved cells with at least one Unknown 4-neighbor,
/// sorted row-major.
std::vector<Cell> extract_frontiers(const OccupancyBelief& belief);

/// Partitions frontier cells into 8-connected components, dropping
/// components smaller than min_cluster_size. Snapshots are left empty;
/// callers fill them via snapshot_frontier.
std::vector<FrontierRegion> cluster_frontiers(const std::vector<Cell>& cells, double cell_size,
                                              int min_cluster_size = 2);

/// Viewpoint at the representative cell center, heading toward the mean
/// direction of the region's adjacent Unknown cells, with visibility and
/// unknown-ray statistics computed by ray casting over the belief.
FrontierSnapshot snapshot_frontier(const SceneMap& map, const OccupancyBelief& belief,
                                   const FrontierRegion& region, const SensorConfig& cfg);

}  // namespace scope

#pragma once

#include "scope/estimator.hpp"
#include "scope/frontier.hpp"
#include "scope/grid.hpp"

namespace scope {

struct PotentialNode {
    double potential = 0.0;
    double sem = 0.0;
    double explore = 0.0;
    double goal = 0.0;
    int visits = 0;
};

struct GraphWeights {
    double pot = 0.25;
    double sem = 0.25;
    double explore = 0.25;
    double goal = 0.25;

    double sum() const { return pot + sem + explore + goal; }
};

struct PotentialGraphConfig {
    double radius_m = 2.0;  // propagation radius R
    GraphWeights weights;
    double gamma = 0.5;  // revisit decay coefficient
};

/// Grid-aligned spatial memory of propagated frontier potential. Each node
/// blends incoming estimates by distance (nodes at the source take the new
/// value outright, nodes at the radius are untouched) and tracks how often
/// the agent has traversed its cell.
///
/// Updates are order-dependent by construction: propagation is an
/// exponential-style blend, so replaying an episode's update log reproduces
/// the graph exactly, but updates do not commute.
class PotentialGraph {
  public:
    PotentialGraph(int width, int height, double cell_size, PotentialGraphConfig cfg);

    /// Blends the estimate into every node within the radius:
    /// value <- (1 - a) * value + a * incoming, a = max(0, 1 - d/R).
    void propagate(const Vec2& frontier_pos, const PotentialEstimate& estimate);

    /// Counts one traversal of the cell. Called once per cell the agent's
    /// executed path crosses.
    void record_visit(Cell cell);

    /// Weighted node score scaled by the inverse visitation factor
    /// 1 / (1 + gamma * visits).
    double exploration_value(Cell cell) const;

    /// exploration_value at the region's representative cell.
    double score_frontier(const FrontierRegion& region) const;

    const PotentialNode& node(Cell cell) const { return nodes_.at(cell); }
    int width() const { return nodes_.width(); }
    int height() const { return nodes_.height(); }
    double cell_size() const { return cell_size_; }
    const PotentialGraphConfig& config() const { return cfg_; }

  private:
    Grid2D<PotentialNode> nodes_;
    double cell_size_;
    PotentialGraphConfig cfg_;
};

/// CSV dump (row, col, potential, sem, explore, goal, visits, exploration
/// value) for offline heatmap plotting.
std::string graph_to_csv(const PotentialGraph& graph);

}  // namespace scope

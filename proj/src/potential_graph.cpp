#include "scope/potential_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "scope/errors.hpp"

namespace scope {

PotentialGraph::PotentialGraph(int width, int height, double cell_size, PotentialGraphConfig cfg)
    : nodes_(width, height), cell_size_(cell_size), cfg_(cfg) {
    if (std::abs(cfg_.weights.sum() - 1.0) > 1e-9)
        throw ConfigError("potential graph weights must sum to 1");
    if (cfg_.weights.pot < 0.0 || cfg_.weights.sem < 0.0 || cfg_.weights.explore < 0.0 ||
        cfg_.weights.goal < 0.0)
        throw ConfigError("potential graph weights must be non-negative");
    if (cfg_.gamma <= 0.0) throw ConfigError("gamma must be positive");
    if (cfg_.radius_m <= 0.0) throw ConfigError("radius must be positive");
}

void PotentialGraph::propagate(const Vec2& frontier_pos, const PotentialEstimate& estimate) {
    // Only cells strictly inside the radius can change; restrict the sweep
    // to the enclosing cell window.
    const double r = cfg_.radius_m;
    const int row_lo = std::max(0, static_cast<int>(std::floor((frontier_pos.y - r) / cell_size_)));
    const int row_hi =
        std::min(height() - 1, static_cast<int>(std::ceil((frontier_pos.y + r) / cell_size_)));
    const int col_lo = std::max(0, static_cast<int>(std::floor((frontier_pos.x - r) / cell_size_)));
    const int col_hi =
        std::min(width() - 1, static_cast<int>(std::ceil((frontier_pos.x + r) / cell_size_)));

    for (int row = row_lo; row <= row_hi; ++row) {
        for (int col = col_lo; col <= col_hi; ++col) {
            const Cell cell{row, col};
            const double d = distance(cell_center(cell, cell_size_), frontier_pos);
            const double alpha = std::max(0.0, 1.0 - d / r);
            if (alpha <= 0.0) continue;
            PotentialNode& n = nodes_.at(cell);
            n.potential = (1.0 - alpha) * n.potential + alpha * estimate.aggregate;
            n.sem = (1.0 - alpha) * n.sem + alpha * estimate.vector.sem;
            n.explore = (1.0 - alpha) * n.explore + alpha * estimate.vector.explore;
            n.goal = (1.0 - alpha) * n.goal + alpha * estimate.vector.goal;
        }
    }
}

void PotentialGraph::record_visit(Cell cell) {
    if (!nodes_.in_bounds(cell)) return;
    nodes_.at(cell).visits += 1;
}

double PotentialGraph::exploration_value(Cell cell) const {
    const PotentialNode& n = nodes_.at(cell);
    const double weighted = cfg_.weights.pot * n.potential + cfg_.weights.sem * n.sem +
                            cfg_.weights.explore * n.explore + cfg_.weights.goal * n.goal;
    return weighted / (1.0 + cfg_.gamma * n.visits);
}

double PotentialGraph::score_frontier(const FrontierRegion& region) const {
    return exploration_value(region.representative);
}

std::string graph_to_csv(const PotentialGraph& graph) {
    std::string out = "row,col,potential,sem,explore,goal,visits,exploration_value\n";
    char buf[160];
    for (int r = 0; r < graph.height(); ++r) {
        for (int c = 0; c < graph.width(); ++c) {
            const Cell cell{r, c};
            const PotentialNode& n = graph.node(cell);
            std::snprintf(buf, sizeof(buf), "%d,%d,%.9g,%.9g,%.9g,%.9g,%d,%.9g\n", r, c, n.potential,
                          n.sem, n.explore, n.goal, n.visits, graph.exploration_value(cell));
            out += buf;
        }
    }
    return out;
}

}  // namespace scope

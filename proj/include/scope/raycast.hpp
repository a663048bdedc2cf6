#pragma once

#include <cmath>
#include <limits>

#include "scope/grid.hpp"

namespace scope {

// Grid ray traversal (Amanatides-Woo). Visits the origin cell first, then
// every cell the ray crosses in order, stopping once the entry distance
// exceeds max_dist or the visitor returns false. Consecutive cells always
// share an edge: exactly one axis advances per step, and when the ray hits a
// cell corner exactly the column axis steps first. That tie rule is part of
// the traversal contract; independent reimplementations must follow it.
template <typename Visit>
void walk_ray(const Vec2& origin, double angle, double max_dist, double cell_size, Visit&& visit) {
    const double dir_x = std::cos(angle);
    const double dir_y = std::sin(angle);

    Cell cell = cell_of(origin, cell_size);
    if (!visit(cell)) return;

    const int step_col = dir_x > 0.0 ? 1 : (dir_x < 0.0 ? -1 : 0);
    const int step_row = dir_y > 0.0 ? 1 : (dir_y < 0.0 ? -1 : 0);

    const double inf = std::numeric_limits<double>::infinity();
    const double t_delta_x = step_col != 0 ? cell_size / std::abs(dir_x) : inf;
    const double t_delta_y = step_row != 0 ? cell_size / std::abs(dir_y) : inf;

    // Ray parameter at which the next vertical / horizontal grid line is hit.
    double t_max_x = inf;
    if (step_col != 0) {
        const double next_x = (step_col > 0 ? (cell.col + 1) : cell.col) * cell_size;
        t_max_x = (next_x - origin.x) / dir_x;
    }
    double t_max_y = inf;
    if (step_row != 0) {
        const double next_y = (step_row > 0 ? (cell.row + 1) : cell.row) * cell_size;
        t_max_y = (next_y - origin.y) / dir_y;
    }

    while (true) {
        double entry;
        if (t_max_x <= t_max_y) {
            entry = t_max_x;
            cell.col += step_col;
            t_max_x += t_delta_x;
        } else {
            entry = t_max_y;
            cell.row += step_row;
            t_max_y += t_delta_y;
        }
        if (entry > max_dist) return;
        if (!visit(cell)) return;
    }
}

// Integer Bresenham line from a to b (8-connected, corner-skipping).
// Returns true when no strictly-interior cell is blocked; the endpoints are
// never tested. Directional: callers pass observer first, target second.
template <typename Blocked>
bool line_of_sight(Cell a, Cell b, Blocked&& blocked) {
    int row = a.row;
    int col = a.col;
    const int d_row = std::abs(b.row - a.row);
    const int d_col = std::abs(b.col - a.col);
    const int s_row = a.row < b.row ? 1 : -1;
    const int s_col = a.col < b.col ? 1 : -1;
    int err = d_col - d_row;

    while (true) {
        if (row == b.row && col == b.col) return true;
        if (!(row == a.row && col == a.col) && blocked(Cell{row, col})) return false;
        const int e2 = 2 * err;
        if (e2 > -d_row) {
            err -= d_row;
            col += s_col;
        }
        if (e2 < d_col) {
            err += d_col;
            row += s_row;
        }
    }
}

}  // namespace scope

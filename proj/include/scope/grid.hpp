#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace scope {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Integer grid coordinate, row-major convention (row 0 at the top).
struct Cell {
    int row = 0;
    int col = 0;

    auto operator<=>(const Cell&) const = default;
};

/// Continuous planar position in meters. x grows with columns, y with rows.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const = default;

    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Center of a cell in meters for a given cell size.
inline Vec2 cell_center(Cell c, double cell_size) {
    return {(c.col + 0.5) * cell_size, (c.row + 0.5) * cell_size};
}

/// Cell containing a continuous position.
inline Cell cell_of(const Vec2& p, double cell_size) {
    return {static_cast<int>(std::floor(p.y / cell_size)),
            static_cast<int>(std::floor(p.x / cell_size))};
}

// Neighbor offsets in lexicographic (drow, dcol) order; planning and
// flood fills rely on this ordering for deterministic tie-breaking.
inline constexpr Cell kNeighbors4[4] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
inline constexpr Cell kNeighbors8[8] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                        {0, 1},   {1, -1}, {1, 0},  {1, 1}};

inline Cell offset(Cell c, Cell d) { return {c.row + d.row, c.col + d.col}; }

/// Fixed-size 2D array addressed by Cell.
template <typename T>
class Grid2D {
  public:
    Grid2D() = default;
    Grid2D(int width, int height, T fill = T{})
        : width_(width), height_(height), data_(static_cast<size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(Cell c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }

    T& at(Cell c) { return data_[static_cast<size_t>(c.row) * width_ + c.col]; }
    const T& at(Cell c) const { return data_[static_cast<size_t>(c.row) * width_ + c.col]; }

    std::vector<T>& raw() { return data_; }
    const std::vector<T>& raw() const { return data_; }

    bool operator==(const Grid2D&) const = default;

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

}  // namespace scope

template <>
struct std::hash<scope::Cell> {
    size_t operator()(const scope::Cell& c) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.row)) << 32) |
                                          static_cast<std::uint32_t>(c.col));
    }
};

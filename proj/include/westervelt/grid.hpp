#ifndef WESTERVELT_GRID_HPP
#define WESTERVELT_GRID_HPP

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "westervelt/types.hpp"

namespace westervelt {

struct Normal {
    double x = 0.0;
    double y = 0.0;
};

struct BoundaryNode {
    int flat = -1;
    Normal normal;
};

/// Uniform node grid on a rectangle with boundary classification, outward
/// normals and trapezoidal quadrature weights for area and perimeter
/// integrals. Immutable after construction.
class Grid {
public:
    Grid(double width, double height, int nx, int ny, double x0 = 0.0, double y0 = 0.0)
        : nx_(nx), ny_(ny), x0_(x0), y0_(y0), width_(width), height_(height) {
        if (nx < 3 || ny < 3)
            throw DimensionError("grid requires nx >= 3 and ny >= 3");
        if (!(width > 0.0) || !(height > 0.0))
            throw DimensionError("grid extents must be positive");
        hx_ = width / (nx - 1);
        hy_ = height / (ny - 1);

        area_weight_.assign(static_cast<size_t>(nx_) * ny_, 0.0);
        for (int j = 0; j < ny_; ++j) {
            const double cy = (j == 0 || j == ny_ - 1) ? 0.5 : 1.0;
            for (int i = 0; i < nx_; ++i) {
                const double cx = (i == 0 || i == nx_ - 1) ? 0.5 : 1.0;
                area_weight_[idx(i, j)] = hx_ * hy_ * cx * cy;
            }
        }

        // Counterclockwise boundary walk starting at the lower-left corner.
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        auto corner_normal = [&](int i, int j) -> Normal {
            const double sx = (i == 0) ? -1.0 : 1.0;
            const double sy = (j == 0) ? -1.0 : 1.0;
            return {sx * inv_sqrt2, sy * inv_sqrt2};
        };
        auto push = [&](int i, int j, Normal n) {
            const bool cx = (i == 0 || i == nx_ - 1);
            const bool cy = (j == 0 || j == ny_ - 1);
            if (cx && cy) n = corner_normal(i, j);
            boundary_.push_back({idx(i, j), n});
            boundary_weight_.push_back(boundary_segment_weight(i, j));
        };
        for (int i = 0; i < nx_; ++i) push(i, 0, {0.0, -1.0});
        for (int j = 1; j < ny_; ++j) push(nx_ - 1, j, {1.0, 0.0});
        for (int i = nx_ - 2; i >= 0; --i) push(i, ny_ - 1, {0.0, 1.0});
        for (int j = ny_ - 2; j >= 1; --j) push(0, j, {-1.0, 0.0});

        boundary_index_of_.assign(size(), -1);
        for (size_t b = 0; b < boundary_.size(); ++b)
            boundary_index_of_[boundary_[b].flat] = static_cast<int>(b);
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double width() const { return width_; }
    double height() const { return height_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }
    size_t size() const { return static_cast<size_t>(nx_) * ny_; }

    int idx(int i, int j) const { return j * nx_ + i; }
    std::array<int, 2> ij(int flat) const { return {flat % nx_, flat / nx_}; }
    double x(int i) const { return x0_ + i * hx_; }
    double y(int j) const { return y0_ + j * hy_; }
    std::array<double, 2> coords(int flat) const {
        const auto p = ij(flat);
        return {x(p[0]), y(p[1])};
    }

    bool is_boundary(int flat) const { return boundary_index_of_[flat] >= 0; }
    bool is_interior(int flat) const { return boundary_index_of_[flat] < 0; }
    /// Position of a node in the boundary walk, -1 for interior nodes.
    int boundary_index_of(int flat) const { return boundary_index_of_[flat]; }

    const std::vector<BoundaryNode>& boundary() const { return boundary_; }
    size_t boundary_count() const { return boundary_.size(); }

    double area_weight(int flat) const { return area_weight_[flat]; }
    double boundary_weight(int b) const { return boundary_weight_[b]; }

    /// Arclength along the counterclockwise boundary walk, starting at the
    /// lower-left corner.
    double arclength(int b) const {
        const int nb = nx_ - 1;  // segments per horizontal side
        const int mb = ny_ - 1;
        if (b < nx_) return b * hx_;
        if (b < nx_ + mb) return nb * hx_ + (b - nb) * hy_;
        if (b < nx_ + mb + nb) return nb * hx_ + mb * hy_ + (b - nb - mb) * hx_;
        return 2 * nb * hx_ + mb * hy_ + (b - 2 * nb - mb) * hy_;
    }
    double perimeter() const { return 2.0 * (width_ + height_); }

private:
    double boundary_segment_weight(int i, int j) const {
        const bool cx = (i == 0 || i == nx_ - 1);
        const bool cy = (j == 0 || j == ny_ - 1);
        if (cx && cy) return 0.5 * (hx_ + hy_);
        return cy ? hx_ : hy_;  // horizontal sides carry hx, vertical hy
    }

    int nx_, ny_;
    double x0_, y0_, width_, height_, hx_, hy_;
    std::vector<double> area_weight_;
    std::vector<BoundaryNode> boundary_;
    std::vector<double> boundary_weight_;
    std::vector<int> boundary_index_of_;
};

inline Grid build_grid(double width, double height, int nx, int ny) {
    return Grid(width, height, nx, ny);
}

/// Trapezoidal approximation of the area integral of f over the rectangle.
inline cplx integrate_interior(const Grid& g, std::span<const cplx> f) {
    if (f.size() != g.size())
        throw ShapeMismatchError("interior integrand size does not match grid");
    cplx acc{0.0, 0.0};
    for (size_t n = 0; n < f.size(); ++n) acc += g.area_weight(static_cast<int>(n)) * f[n];
    return acc;
}

/// Trapezoidal approximation of the perimeter integral; f is ordered like
/// Grid::boundary().
inline cplx integrate_boundary(const Grid& g, std::span<const cplx> f) {
    if (f.size() != g.boundary_count())
        throw ShapeMismatchError("boundary integrand size does not match grid boundary");
    cplx acc{0.0, 0.0};
    for (size_t b = 0; b < f.size(); ++b) acc += g.boundary_weight(static_cast<int>(b)) * f[b];
    return acc;
}

}  // namespace westervelt

#endif

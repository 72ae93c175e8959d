#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fvfp {

/** Nonuniform 1D cell partition of [a,b].
 *
 * Stored edge-first; centers, widths and half-widths h_{j+1/2} are derived
 * once at construction and never recomputed, so rebuilding a grid from its
 * own widths reproduces every coordinate bit-identically.
 */
struct Grid1D {
    std::vector<double> edges;        // N+1 ascending
    std::vector<double> centers;      // N, x_j = x_{j-1/2} + h_j/2
    std::vector<double> widths;       // N, h_j > 0
    std::vector<double> half_widths;  // N-1, h_{j+1/2} = (h_j + h_{j+1})/2
    bool uniform = false;             // all widths bit-identical

    int n() const { return static_cast<int>(widths.size()); }
    double a() const { return edges.front(); }
    double b() const { return edges.back(); }
};

Grid1D build_grid_1d(double a, double b, std::span<const double> widths);
Grid1D uniform_grid_1d(double a, double b, int n);

/** Tensor-product 2D grid; cell (i,j) has area hx_i * hy_j. */
struct Grid2D {
    Grid1D gx;
    Grid1D gy;

    int nx() const { return gx.n(); }
    int ny() const { return gy.n(); }
    int cells() const { return nx() * ny(); }
    // row-major in i: x runs fastest
    int index(int i, int j) const { return j * nx() + i; }
};

Grid2D build_grid_2d(Grid1D gx, Grid1D gy);
Grid2D uniform_grid_2d(double ax, double bx, int nx, double ay, double by, int ny);

/** Cell-average density vector; length n() in 1D, nx*ny row-major in 2D. */
struct Field {
    std::vector<double> values;

    Field() = default;
    explicit Field(std::size_t n, double v = 0.0) : values(n, v) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

double min_value(const Field& f);
double max_value(const Field& f);

// Per-cell averages by two-point Gauss quadrature (exact through degree 3).
Field cell_average_init_1d(const std::function<double(double)>& f, const Grid1D& grid);
Field cell_average_init_2d(const std::function<double(double, double)>& f, const Grid2D& grid);

}  // namespace fvfp

#include "fvfp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fvfp {

namespace {

Grid1D assemble(double a, std::span<const double> widths) {
    Grid1D g;
    const std::size_t n = widths.size();
    g.edges.resize(n + 1);
    g.centers.resize(n);
    g.widths.assign(widths.begin(), widths.end());
    g.edges[0] = a;
    for (std::size_t j = 0; j < n; ++j) {
        g.edges[j + 1] = g.edges[j] + widths[j];
        g.centers[j] = g.edges[j] + 0.5 * widths[j];
    }
    g.half_widths.resize(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
        g.half_widths[j] = 0.5 * (widths[j] + widths[j + 1]);
    g.uniform = std::all_of(widths.begin(), widths.end(),
                            [&](double w) { return w == widths[0]; });
    return g;
}

}  // namespace

Grid1D build_grid_1d(double a, double b, std::span<const double> widths) {
    if (widths.size() < 2)
        throw std::invalid_argument("build_grid_1d: need at least 2 cells");
    if (!(b > a))
        throw std::invalid_argument("build_grid_1d: domain bounds must satisfy a < b");
    double sum = 0.0;
    for (double w : widths) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("build_grid_1d: non-positive cell width");
        sum += w;
    }
    if (std::abs(sum - (b - a)) > 1e-12 * (b - a))
        throw std::invalid_argument("build_grid_1d: widths sum to " + std::to_string(sum) +
                                    ", expected " + std::to_string(b - a));
    return assemble(a, widths);
}

namespace {
// 2D axes may be a single cell (degenerate direction of an N x 1 grid)
Grid1D uniform_axis(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("grid axis needs at least 1 cell");
    if (!(b > a)) throw std::invalid_argument("grid axis requires a < b");
    std::vector<double> widths(static_cast<std::size_t>(n), (b - a) / n);
    return assemble(a, widths);
}
}  // namespace

Grid1D uniform_grid_1d(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("uniform_grid_1d: need at least 2 cells");
    return uniform_axis(a, b, n);
}

Grid2D build_grid_2d(Grid1D gx, Grid1D gy) {
    Grid2D g;
    g.gx = std::move(gx);
    g.gy = std::move(gy);
    return g;
}

Grid2D uniform_grid_2d(double ax, double bx, int nx, double ay, double by, int ny) {
    return build_grid_2d(uniform_axis(ax, bx, nx), uniform_axis(ay, by, ny));
}

double min_value(const Field& f) {
    return *std::min_element(f.values.begin(), f.values.end());
}

double max_value(const Field& f) {
    return *std::max_element(f.values.begin(), f.values.end());
}

namespace {
// two-point Gauss abscissa offset from the cell midpoint, in half-widths
constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)

double checked(double v, double x) {
    if (!std::isfinite(v))
        throw std::domain_error("cell_average_init: non-finite value at x=" + std::to_string(x));
    return v;
}
}  // namespace

Field cell_average_init_1d(const std::function<double(double)>& f, const Grid1D& grid) {
    const int n = grid.n();
    Field out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double mid = grid.centers[j];
        const double off = 0.5 * grid.widths[j] * kGauss;
        out[j] = 0.5 * (checked(f(mid - off), mid - off) + checked(f(mid + off), mid + off));
    }
    return out;
}

Field cell_average_init_2d(const std::function<double(double, double)>& f, const Grid2D& grid) {
    Field out(static_cast<std::size_t>(grid.cells()));
    for (int j = 0; j < grid.ny(); ++j) {
        const double ymid = grid.gy.centers[j];
        const double yoff = 0.5 * grid.gy.widths[j] * kGauss;
        for (int i = 0; i < grid.nx(); ++i) {
            const double xmid = grid.gx.centers[i];
            const double xoff = 0.5 * grid.gx.widths[i] * kGauss;
            double s = 0.0;
            for (double y : {ymid - yoff, ymid + yoff})
                for (double x : {xmid - xoff, xmid + xoff})
                    s += checked(f(x, y), x);
            out[grid.index(i, j)] = 0.25 * s;
        }
    }
    return out;
}

}  // namespace fvfp

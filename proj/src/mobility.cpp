#include "fvfp/mobility.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fvfp {

namespace {

constexpr double kExponentGuard = 700.0;

[[noreturn]] void bad_kernel(double s) {
    throw std::domain_error("interaction kernel is non-finite at displacement " +
                            std::to_string(s));
}

double guarded_exp(double exponent, double x) {
    if (!(std::abs(exponent) <= kExponentGuard))
        throw std::range_error("mobility exponent " + std::to_string(exponent) + " at x=" +
                               std::to_string(x) + " exceeds the overflow guard");
    return std::exp(-exponent);
}

// Kernel values by displacement index on a uniform grid. Entry `skip` marks
// the singular self pair, whose contribution is defined to be zero.
struct KernelTable1D {
    std::vector<double> w;  // index d + n-1, displacement d*h + shift
    int offset = 0;

    double at(int d) const { return w[static_cast<std::size_t>(d + offset)]; }
};

KernelTable1D build_table_1d(const std::function<double(double)>& W, int n, double h,
                             double shift, bool skip_zero) {
    KernelTable1D t;
    t.offset = n - 1;
    t.w.resize(static_cast<std::size_t>(2 * n - 1));
    for (int d = -(n - 1); d <= n - 1; ++d) {
        const double s = d * h + shift;
        if (skip_zero && d == 0 && shift == 0.0) {
            t.w[static_cast<std::size_t>(d + t.offset)] = 0.0;
            continue;
        }
        const double v = W(s);
        if (!std::isfinite(v)) bad_kernel(s);
        t.w[static_cast<std::size_t>(d + t.offset)] = v;
    }
    return t;
}

}  // namespace

bool singular_interaction(const ProblemSpec1D& spec) {
    return spec.W && !std::isfinite(spec.W(0.0));
}

bool singular_interaction(const ProblemSpec2D& spec) {
    return spec.W && !std::isfinite(spec.W(0.0, 0.0));
}

double convolve_1d(const Grid1D& grid, const ProblemSpec1D& spec, const Field& rho, double x) {
    if (!spec.W) return 0.0;
    if (rho.size() != static_cast<std::size_t>(grid.n()))
        throw std::invalid_argument("convolve_1d: field length does not match grid");
    const bool skip_singular = singular_interaction(spec);
    double sum = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        const double s = grid.centers[i] - x;
        const double w = spec.W(s);
        if (!std::isfinite(w)) {
            if (skip_singular && s == 0.0) continue;
            bad_kernel(s);
        }
        sum += grid.widths[i] * w * rho[i];
    }
    return sum;
}

double convolve_2d(const Grid2D& grid, const ProblemSpec2D& spec, const Field& rho,
                   double x, double y) {
    if (!spec.W) return 0.0;
    if (rho.size() != static_cast<std::size_t>(grid.cells()))
        throw std::invalid_argument("convolve_2d: field length does not match grid");
    const bool skip_singular = singular_interaction(spec);
    double sum = 0.0;
    for (int l = 0; l < grid.ny(); ++l) {
        const double sy = grid.gy.centers[l] - y;
        for (int k = 0; k < grid.nx(); ++k) {
            const double sx = grid.gx.centers[k] - x;
            const double w = spec.W(sx, sy);
            if (!std::isfinite(w)) {
                if (skip_singular && sx == 0.0 && sy == 0.0) continue;
                bad_kernel(std::hypot(sx, sy));
            }
            sum += grid.gx.widths[k] * grid.gy.widths[l] * w * rho[grid.index(k, l)];
        }
    }
    return sum;
}

std::vector<double> convolve_at_centers_1d(const Grid1D& grid, const ProblemSpec1D& spec,
                                           const Field& rho) {
    const int n = grid.n();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (!spec.W) return out;
    const bool skip = singular_interaction(spec);
    if (grid.uniform) {
        const KernelTable1D tab = build_table_1d(spec.W, n, grid.widths[0], 0.0, skip);
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += grid.widths[i] * tab.at(i - j) * rho[i];
            out[static_cast<std::size_t>(j)] = sum;
        }
        return out;
    }
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (skip && i == j) continue;
            const double s = grid.centers[i] - grid.centers[j];
            const double w = spec.W(s);
            if (!std::isfinite(w)) bad_kernel(s);
            sum += grid.widths[i] * w * rho[i];
        }
        out[static_cast<std::size_t>(j)] = sum;
    }
    return out;
}

namespace {

// convolution at the interior interfaces x_{j+1/2}, j = 0..n-2
std::vector<double> convolve_at_interfaces_1d(const Grid1D& grid, const ProblemSpec1D& spec,
                                              const Field& rho) {
    const int n = grid.n();
    std::vector<double> out(static_cast<std::size_t>(n - 1), 0.0);
    if (!spec.W) return out;
    if (grid.uniform) {
        const double h = grid.widths[0];
        const KernelTable1D tab = build_table_1d(spec.W, n, h, -0.5 * h, false);
        for (int j = 0; j + 1 < n; ++j) {
            double sum = 0.0;
            // x_i - x_{j+1/2} = (i-j)h - h/2
            for (int i = 0; i < n; ++i) sum += grid.widths[i] * tab.at(i - j) * rho[i];
            out[static_cast<std::size_t>(j)] = sum;
        }
        return out;
    }
    for (int j = 0; j + 1 < n; ++j) {
        const double p = grid.edges[j + 1];
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double s = grid.centers[i] - p;
            const double w = spec.W(s);
            if (!std::isfinite(w)) bad_kernel(s);
            sum += grid.widths[i] * w * rho[i];
        }
        out[static_cast<std::size_t>(j)] = sum;
    }
    return out;
}

}  // namespace

double mobility_value_1d(const Grid1D& grid, const ProblemSpec1D& spec, const Field& rho,
                         double x) {
    const double v = spec.V ? spec.V(x) : 0.0;
    return guarded_exp(v + spec.intensity * convolve_1d(grid, spec, rho, x), x);
}

MobilityProfile mobility_profile_1d(const Grid1D& grid, const ProblemSpec1D& spec,
                                    const Field& rho) {
    if (rho.size() != static_cast<std::size_t>(grid.n()))
        throw std::invalid_argument("mobility_profile_1d: field length does not match grid");
    const int n = grid.n();
    MobilityProfile prof;
    prof.at_centers.resize(static_cast<std::size_t>(n));
    prof.at_interfaces.resize(static_cast<std::size_t>(n - 1));
    const std::vector<double> gc = convolve_at_centers_1d(grid, spec, rho);
    const std::vector<double> gi = convolve_at_interfaces_1d(grid, spec, rho);
    for (int j = 0; j < n; ++j) {
        const double x = grid.centers[j];
        const double v = spec.V ? spec.V(x) : 0.0;
        prof.at_centers[static_cast<std::size_t>(j)] =
            guarded_exp(v + spec.intensity * gc[static_cast<std::size_t>(j)], x);
    }
    for (int j = 0; j + 1 < n; ++j) {
        const double x = grid.edges[j + 1];
        const double v = spec.V ? spec.V(x) : 0.0;
        prof.at_interfaces[static_cast<std::size_t>(j)] =
            guarded_exp(v + spec.intensity * gi[static_cast<std::size_t>(j)], x);
    }
    return prof;
}

namespace {

struct KernelTable2D {
    std::vector<double> w;  // (2nx-1)*(2ny-1), row-major in dx
    int ox = 0, oy = 0, row = 0;

    double at(int dx, int dy) const {
        return w[static_cast<std::size_t>((dy + oy) * row + (dx + ox))];
    }
    const double* row_ptr(int dy) const {
        return w.data() + static_cast<std::size_t>((dy + oy) * row);
    }
};

KernelTable2D build_table_2d(const std::function<double(double, double)>& W, int nx, int ny,
                             double hx, double hy, double shift_x, double shift_y,
                             bool skip_zero) {
    KernelTable2D t;
    t.ox = nx - 1;
    t.oy = ny - 1;
    t.row = 2 * nx - 1;
    t.w.resize(static_cast<std::size_t>(t.row * (2 * ny - 1)));
    for (int dy = -(ny - 1); dy <= ny - 1; ++dy) {
        const double sy = dy * hy + shift_y;
        for (int dx = -(nx - 1); dx <= nx - 1; ++dx) {
            const double sx = dx * hx + shift_x;
            double v;
            if (skip_zero && dx == 0 && dy == 0 && shift_x == 0.0 && shift_y == 0.0) {
                v = 0.0;
            } else {
                v = W(sx, sy);
                if (!std::isfinite(v)) bad_kernel(std::hypot(sx, sy));
            }
            t.w[static_cast<std::size_t>((dy + t.oy) * t.row + (dx + t.ox))] = v;
        }
    }
    return t;
}

// area-weighted density, laid out like the field
std::vector<double> weighted_density(const Grid2D& grid, const Field& rho) {
    std::vector<double> w(static_cast<std::size_t>(grid.cells()));
    for (int l = 0; l < grid.ny(); ++l)
        for (int k = 0; k < grid.nx(); ++k)
            w[static_cast<std::size_t>(grid.index(k, l))] =
                grid.gx.widths[k] * grid.gy.widths[l] * rho[grid.index(k, l)];
    return w;
}

// tabulated correlation: sum_{k,l} table(k-i, l-j) * wrho_{k,l}
double table_sum(const KernelTable2D& tab, const std::vector<double>& wrho, int nx, int ny,
                 int i, int j) {
    double sum = 0.0;
    for (int l = 0; l < ny; ++l) {
        const double* row = tab.row_ptr(l - j) + (tab.ox - i);
        const double* wr = wrho.data() + static_cast<std::size_t>(l * nx);
        double acc = 0.0;
        for (int k = 0; k < nx; ++k) acc += row[k] * wr[k];
        sum += acc;
    }
    return sum;
}

std::vector<double> convolve_centers_direct(const Grid2D& grid, const ProblemSpec2D& spec,
                                            const Field& rho, bool skip) {
    std::vector<double> out(static_cast<std::size_t>(grid.cells()), 0.0);
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            double sum = 0.0;
            for (int l = 0; l < grid.ny(); ++l) {
                const double sy = grid.gy.centers[l] - grid.gy.centers[j];
                for (int k = 0; k < grid.nx(); ++k) {
                    if (skip && k == i && l == j) continue;
                    const double sx = grid.gx.centers[k] - grid.gx.centers[i];
                    const double w = spec.W(sx, sy);
                    if (!std::isfinite(w)) bad_kernel(std::hypot(sx, sy));
                    sum += grid.gx.widths[k] * grid.gy.widths[l] * w * rho[grid.index(k, l)];
                }
            }
            out[static_cast<std::size_t>(grid.index(i, j))] = sum;
        }
    return out;
}

bool grid_uniform(const Grid2D& g) { return g.gx.uniform && g.gy.uniform; }

}  // namespace

std::vector<double> convolve_at_centers_2d(const Grid2D& grid, const ProblemSpec2D& spec,
                                           const Field& rho) {
    if (!spec.W) return std::vector<double>(static_cast<std::size_t>(grid.cells()), 0.0);
    const bool skip = singular_interaction(spec);
    if (!grid_uniform(grid)) return convolve_centers_direct(grid, spec, rho, skip);
    const int nx = grid.nx(), ny = grid.ny();
    const KernelTable2D tab =
        build_table_2d(spec.W, nx, ny, grid.gx.widths[0], grid.gy.widths[0], 0.0, 0.0, skip);
    const std::vector<double> wrho = weighted_density(grid, rho);
    std::vector<double> out(static_cast<std::size_t>(grid.cells()));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out[static_cast<std::size_t>(grid.index(i, j))] = table_sum(tab, wrho, nx, ny, i, j);
    return out;
}

MobilityProfile2D mobility_profile_2d(const Grid2D& grid, const ProblemSpec2D& spec,
                                      const Field& rho) {
    if (rho.size() != static_cast<std::size_t>(grid.cells()))
        throw std::invalid_argument("mobility_profile_2d: field length does not match grid");
    const int nx = grid.nx(), ny = grid.ny();
    MobilityProfile2D prof;
    prof.at_centers.resize(static_cast<std::size_t>(nx * ny));
    prof.at_x_interfaces.resize(static_cast<std::size_t>((nx - 1) * ny));
    prof.at_y_interfaces.resize(static_cast<std::size_t>(nx * (ny - 1)));

    std::vector<double> gc, gxi, gyi;
    if (spec.W && grid_uniform(grid)) {
        const double hx = grid.gx.widths[0], hy = grid.gy.widths[0];
        const bool skip = singular_interaction(spec);
        const std::vector<double> wrho = weighted_density(grid, rho);
        const KernelTable2D tc = build_table_2d(spec.W, nx, ny, hx, hy, 0.0, 0.0, skip);
        const KernelTable2D tx = build_table_2d(spec.W, nx, ny, hx, hy, -0.5 * hx, 0.0, false);
        const KernelTable2D ty = build_table_2d(spec.W, nx, ny, hx, hy, 0.0, -0.5 * hy, false);
        gc.resize(prof.at_centers.size());
        gxi.resize(prof.at_x_interfaces.size());
        gyi.resize(prof.at_y_interfaces.size());
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                gc[static_cast<std::size_t>(j * nx + i)] = table_sum(tc, wrho, nx, ny, i, j);
        // x_k - x_{i+1/2} = (k-i)hx - hx/2
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i)
                gxi[static_cast<std::size_t>(j * (nx - 1) + i)] =
                    table_sum(tx, wrho, nx, ny, i, j);
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i)
                gyi[static_cast<std::size_t>(j * nx + i)] = table_sum(ty, wrho, nx, ny, i, j);
    } else if (spec.W) {
        const bool skip = singular_interaction(spec);
        gc = convolve_centers_direct(grid, spec, rho, skip);
        gxi.resize(prof.at_x_interfaces.size());
        gyi.resize(prof.at_y_interfaces.size());
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i)
                gxi[static_cast<std::size_t>(j * (nx - 1) + i)] =
                    convolve_2d(grid, spec, rho, grid.gx.edges[i + 1], grid.gy.centers[j]);
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i)
                gyi[static_cast<std::size_t>(j * nx + i)] =
                    convolve_2d(grid, spec, rho, grid.gx.centers[i], grid.gy.edges[j + 1]);
    } else {
        gc.assign(prof.at_centers.size(), 0.0);
        gxi.assign(prof.at_x_interfaces.size(), 0.0);
        gyi.assign(prof.at_y_interfaces.size(), 0.0);
    }

    auto mob = [&](double x, double y, double conv) {
        const double v = spec.V ? spec.V(x, y) : 0.0;
        return guarded_exp(v + spec.intensity * conv, x);
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            prof.at_centers[static_cast<std::size_t>(j * nx + i)] =
                mob(grid.gx.centers[i], grid.gy.centers[j],
                    gc[static_cast<std::size_t>(j * nx + i)]);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i)
            prof.at_x_interfaces[static_cast<std::size_t>(j * (nx - 1) + i)] =
                mob(grid.gx.edges[i + 1], grid.gy.centers[j],
                    gxi[static_cast<std::size_t>(j * (nx - 1) + i)]);
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i)
            prof.at_y_interfaces[static_cast<std::size_t>(j * nx + i)] =
                mob(grid.gx.centers[i], grid.gy.edges[j + 1],
                    gyi[static_cast<std::size_t>(j * nx + i)]);
    return prof;
}

}  // namespace fvfp

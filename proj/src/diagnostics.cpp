#include "fvfp/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace fvfp {

double total_mass(const Field& rho, const Grid1D& grid) {
    double sum = 0.0;
    for (int j = 0; j < grid.n(); ++j) sum += grid.widths[j] * rho[j];
    return sum;
}

double total_mass(const Field& rho, const Grid2D& grid) {
    double sum = 0.0;
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            sum += grid.gx.widths[i] * grid.gy.widths[j] * rho[grid.index(i, j)];
    return sum;
}

namespace {

double entropy_term(double rho) {
    if (rho < 0.0) throw std::domain_error("discrete_energy: negative density entry");
    return rho > 0.0 ? rho * std::log(rho) : 0.0;  // 0 log 0 := 0
}

double pair_dissipation(double coeff, double ga, double gb) {
    if (ga <= 0.0 || gb <= 0.0) return 0.0;  // vanishing-density pairs excluded
    return coeff * (gb - ga) * (std::log(gb) - std::log(ga));
}

}  // namespace

double discrete_energy_1d(const Field& rho, const Grid1D& grid, const ProblemSpec1D& spec) {
    const std::vector<double> conv = convolve_at_centers_1d(grid, spec, rho);
    double sum = 0.0;
    for (int j = 0; j < grid.n(); ++j) {
        const double v = spec.V ? spec.V(grid.centers[j]) : 0.0;
        const double g = spec.intensity * conv[static_cast<std::size_t>(j)];
        sum += grid.widths[j] * (entropy_term(rho[j]) + v * rho[j] + 0.5 * g * rho[j]);
    }
    return sum;
}

double discrete_energy_2d(const Field& rho, const Grid2D& grid, const ProblemSpec2D& spec) {
    const std::vector<double> conv = convolve_at_centers_2d(grid, spec, rho);
    double sum = 0.0;
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            const int p = grid.index(i, j);
            const double v = spec.V ? spec.V(grid.gx.centers[i], grid.gy.centers[j]) : 0.0;
            const double g = spec.intensity * conv[static_cast<std::size_t>(p)];
            sum += grid.gx.widths[i] * grid.gy.widths[j] *
                   (entropy_term(rho[p]) + v * rho[p] + 0.5 * g * rho[p]);
        }
    return sum;
}

double dissipation_1d(const Field& rho_next, const MobilityProfile& mob_n, const Grid1D& grid) {
    const int n = grid.n();
    double sum = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        const double ga = rho_next[j] / mob_n.at_centers[j];
        const double gb = rho_next[j + 1] / mob_n.at_centers[j + 1];
        sum += pair_dissipation(mob_n.at_interfaces[j] / grid.half_widths[j], ga, gb);
    }
    return sum;
}

double dissipation_2d(const Field& rho_next, const MobilityProfile2D& mob_n, const Grid2D& grid) {
    const int nx = grid.nx(), ny = grid.ny();
    double sum = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const double ga = rho_next[grid.index(i, j)] / mob_n.at_centers[grid.index(i, j)];
            const double gb =
                rho_next[grid.index(i + 1, j)] / mob_n.at_centers[grid.index(i + 1, j)];
            const double coeff = grid.gy.widths[j] *
                                 mob_n.at_x_interfaces[j * (nx - 1) + i] / grid.gx.half_widths[i];
            sum += pair_dissipation(coeff, ga, gb);
        }
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double ga = rho_next[grid.index(i, j)] / mob_n.at_centers[grid.index(i, j)];
            const double gb =
                rho_next[grid.index(i, j + 1)] / mob_n.at_centers[grid.index(i, j + 1)];
            const double coeff = grid.gx.widths[i] * mob_n.at_y_interfaces[j * nx + i] /
                                 grid.gy.half_widths[j];
            sum += pair_dissipation(coeff, ga, gb);
        }
    return sum;
}

namespace {

ErrorNorms weighted_norms(const Field& numeric, const Field& exact,
                          const std::function<double(int)>& weight, int n) {
    if (numeric.size() != exact.size())
        throw std::invalid_argument("error_norms: field sizes differ");
    ErrorNorms e;
    for (int j = 0; j < n; ++j) {
        const double d = std::abs(numeric[j] - exact[j]);
        e.l1 += weight(j) * d;
        e.linf = std::max(e.linf, d);
    }
    return e;
}

}  // namespace

ErrorNorms error_norms(const Field& numeric, const Field& exact_avgs, const Grid1D& grid) {
    return weighted_norms(numeric, exact_avgs, [&](int j) { return grid.widths[j]; }, grid.n());
}

ErrorNorms error_norms(const Field& numeric, const Field& exact_avgs, const Grid2D& grid) {
    const int nx = grid.nx();
    return weighted_norms(
        numeric, exact_avgs,
        [&](int p) { return grid.gx.widths[p % nx] * grid.gy.widths[p / nx]; }, grid.cells());
}

double doi_onsager_eta_residual(double eta, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("doi_onsager_eta_residual: alpha must be > 0");
    constexpr int kPoints = 1024;
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < kPoints; ++k) {
        const double x = (k + 0.5) * (kTwoPi / kPoints);
        const double e = std::exp(-eta * std::cos(2.0 * x));
        num += std::cos(2.0 * x) * e;
        den += e;
    }
    return num / den + 2.0 * eta / alpha;
}

}  // namespace fvfp

#pragma once

#include "fvfp/grid.hpp"
#include "fvfp/mobility.hpp"
#include "fvfp/problem.hpp"

namespace fvfp {

/** One CSV row of the per-step run log. `dissipation` on row n is I_h of the
 *  transition n-1 -> n (0 on row 0). */
struct EnergyReport {
    int step_index = 0;
    double time = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
};

double total_mass(const Field& rho, const Grid1D& grid);
double total_mass(const Field& rho, const Grid2D& grid);

// E_h = sum_j h_j (rho_j log rho_j + V_j rho_j + 1/2 g_j rho_j) with
// g_j = intensity * sum_i h_i W(x_i - x_j) rho_i and 0 log 0 := 0.
// Throws std::domain_error on negative entries.
double discrete_energy_1d(const Field& rho, const Grid1D& grid, const ProblemSpec1D& spec);
double discrete_energy_2d(const Field& rho, const Grid2D& grid, const ProblemSpec2D& spec);

// I_h = sum_j (M_{j+1/2}/h_{j+1/2}) (G_{j+1}-G_j)(log G_{j+1} - log G_j) >= 0
// with G = rho_next / M at centers; pairs with a nonpositive G are excluded
// (the continuous integrand vanishes with rho).
double dissipation_1d(const Field& rho_next, const MobilityProfile& mob_n, const Grid1D& grid);
double dissipation_2d(const Field& rho_next, const MobilityProfile2D& mob_n, const Grid2D& grid);

struct ErrorNorms {
    double l1 = 0.0;    // sum_j h_j |rho_j - exact_j|   (area-weighted in 2D)
    double linf = 0.0;  // max_j |rho_j - exact_j|
};

ErrorNorms error_norms(const Field& numeric, const Field& exact_avgs, const Grid1D& grid);
ErrorNorms error_norms(const Field& numeric, const Field& exact_avgs, const Grid2D& grid);

// Residual of the nematic-order equation
//   int cos(2x) e^{-eta cos 2x} dx / int e^{-eta cos 2x} dx + 2 eta / alpha
// over [0, 2pi], 1024-point uniform midpoint quadrature.
double doi_onsager_eta_residual(double eta, double alpha);

}  // namespace fvfp

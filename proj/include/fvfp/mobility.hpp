#pragma once

#include "fvfp/grid.hpp"
#include "fvfp/problem.hpp"

#include <vector>

namespace fvfp {

/** Mobility M = exp(-V - intensity * W*rho) sampled where the scheme needs it. */
struct MobilityProfile {
    std::vector<double> at_centers;     // M_j, length N
    std::vector<double> at_interfaces;  // M_{j+1/2}, length N-1
};

struct MobilityProfile2D {
    std::vector<double> at_centers;       // M_{i,j}, nx*ny row-major
    std::vector<double> at_x_interfaces;  // M_{i+1/2,j}, (nx-1)*ny, index j*(nx-1)+i
    std::vector<double> at_y_interfaces;  // M_{i,j+1/2}, nx*(ny-1), index j*nx+i
};

// True when the kernel is unbounded at zero displacement (probed by evaluating
// W at 0). Center-point convolutions then skip the self pair; the policy is
// surfaced in run metadata.
bool singular_interaction(const ProblemSpec1D& spec);
bool singular_interaction(const ProblemSpec2D& spec);

// sum_i h_i W(x_i - x) rho_i, ascending i, intensity NOT applied.
double convolve_1d(const Grid1D& grid, const ProblemSpec1D& spec, const Field& rho, double x);
double convolve_2d(const Grid2D& grid, const ProblemSpec2D& spec, const Field& rho,
                   double x, double y);

// Convolution at every cell center (used by mobility and by the discrete
// energy). On uniform grids the kernel is tabulated by displacement; the
// summation order stays ascending either way.
std::vector<double> convolve_at_centers_1d(const Grid1D& grid, const ProblemSpec1D& spec,
                                           const Field& rho);
std::vector<double> convolve_at_centers_2d(const Grid2D& grid, const ProblemSpec2D& spec,
                                           const Field& rho);

// Q1(x, rho) = exp(-V(x) - intensity * conv). Throws std::range_error when the
// exponent magnitude exceeds 700 (the positivity results need finite M > 0).
double mobility_value_1d(const Grid1D& grid, const ProblemSpec1D& spec, const Field& rho,
                         double x);

MobilityProfile mobility_profile_1d(const Grid1D& grid, const ProblemSpec1D& spec,
                                    const Field& rho);
MobilityProfile2D mobility_profile_2d(const Grid2D& grid, const ProblemSpec2D& spec,
                                      const Field& rho);

}  // namespace fvfp

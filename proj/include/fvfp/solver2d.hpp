#pragma once

#include "fvfp/grid.hpp"
#include "fvfp/limiter.hpp"
#include "fvfp/mobility.hpp"
#include "fvfp/problem.hpp"
#include "fvfp/solver1d.hpp"

#include <optional>
#include <vector>

namespace fvfp {

/** Five-band system over row-major (i,j) unknowns, strictly diagonally
 *  dominant; west/east couple i-neighbors, south/north couple j-neighbors. */
struct BandedSystem2D {
    int nx = 0, ny = 0;
    std::vector<double> center, west, east, south, north, rhs;

    int cells() const { return nx * ny; }
    int index(int i, int j) const { return j * nx + i; }
    bool strictly_diagonally_dominant() const;
};

// Symmetric Gauss-Seidel sweeps (forward then backward) to relative residual
// <= 1e-12 in the max norm, at most 1e5 sweeps; convergent under strict
// dominance. Throws std::runtime_error with the final residual otherwise.
std::vector<double> solve_banded_2d(const BandedSystem2D& sys);

struct SolverState2D {
    Field rho_curr;
    std::optional<Field> rho_prev;
    std::optional<Field> predictor;
    double time = 0.0;
    int step_index = 0;
    std::vector<StepRepairRecord> repair_log;
};

// Row (i,j):  h^x_i h^y_j rho^n_{i,j} =
//   (h^x_i h^y_j M_{i,j} + tau*(Mt_{i+1/2,j}+Mt_{i-1/2,j}+Mt_{i,j+1/2}+Mt_{i,j-1/2})) G_{i,j}
//   - tau Mt_{i+1/2,j} G_{i+1,j} - ... ,
// with Mt_{i+1/2,j} = (h^y_j / h^x_{i+1/2}) M_{i+1/2,j} and the y-analog;
// boundary rows omit out-of-domain flux terms.
BandedSystem2D assemble_first_order_2d(const Grid2D& grid, const MobilityProfile2D& mob,
                                       const Field& rho_n, double tau);

void step_first_order_2d(SolverState2D& state, const Grid2D& grid, const ProblemSpec2D& spec,
                         double tau, const StepOptions& opts = {},
                         MobilityProfile2D* mob_out = nullptr);

void step_second_order_2d(SolverState2D& state, const Grid2D& grid, const ProblemSpec2D& spec,
                          double tau, const StepOptions& opts = {},
                          MobilityProfile2D* mob_out = nullptr);

}  // namespace fvfp

#pragma once

#include "fvfp/grid.hpp"
#include "fvfp/limiter.hpp"
#include "fvfp/mobility.hpp"
#include "fvfp/problem.hpp"

#include <optional>
#include <vector>

namespace fvfp {

/** Tridiagonal system in the unknowns G = rho/M; strictly diagonally
 *  dominant by construction for any tau. sub[0] and super[n-1] are unused. */
struct BandedSystem1D {
    std::vector<double> sub, diag, super, rhs;

    int n() const { return static_cast<int>(diag.size()); }
    bool strictly_diagonally_dominant() const;
};

// Thomas elimination; stable under strict dominance, zero pivots cannot occur.
std::vector<double> solve_tridiagonal(const BandedSystem1D& sys);

/** What a step did to repair negativity, if anything. */
struct StepRepairRecord {
    int step_index = 0;
    double min_before = 0.0;             // most negative raw value
    int clamped_cells = 0;               // rounding-noise clamps to 0
    std::vector<LimiterAction> limiter;  // scaling-limiter repairs
};

struct SolverState1D {
    Field rho_curr;
    std::optional<Field> rho_prev;   // rho^{n-1}, present after the first step
    std::optional<Field> predictor;  // rho* of the latest second-order step
    double time = 0.0;
    int step_index = 0;
    std::vector<StepRepairRecord> repair_log;
};

struct StepOptions {
    bool limiter = false;  // run the scaling limiter on true negatives
};

// Rows of the implicit-in-G first-order system:
//   -lam_{j-1/2} M_{j-1/2} G_{j-1}
//   + (h_j M_j + lam_{j-1/2} M_{j-1/2} + lam_{j+1/2} M_{j+1/2}) G_j
//   - lam_{j+1/2} M_{j+1/2} G_{j+1} = h_j rho^n_j,     lam = tau / h_{j+1/2},
// boundary rows dropping the missing flux term (zero-flux).
BandedSystem1D assemble_first_order_1d(const Grid1D& grid, const MobilityProfile& mob,
                                       const Field& rho_n, double tau);

// IMEX step: mobility frozen at rho^n, flux implicit in rho^{n+1}.
// Nonnegative for any tau; mass conserved to solver rounding. An optional
// source adds h_j tau F(x_j, t_{n+1}) to the rhs. mob_out, when given,
// receives the mobility profile the step used.
void step_first_order_1d(SolverState1D& state, const Grid1D& grid, const ProblemSpec1D& spec,
                         double tau, const StepOptions& opts = {},
                         MobilityProfile* mob_out = nullptr);

// Forward-Euler reference stepper; mass telescopes exactly, positivity only
// under a CFL-type restriction. Source evaluated at t_n.
void step_explicit_euler_1d(SolverState1D& state, const Grid1D& grid, const ProblemSpec1D& spec,
                            double tau, const StepOptions& opts = {},
                            MobilityProfile* mob_out = nullptr);

// Predictor-corrector step: implicit half step to rho* with mobility at the
// extrapolation (3/2 rho^n - 1/2 rho^{n-1}), then rho^{n+1} = 2 rho* - rho^n.
// Requires rho_prev (take the first step with step_first_order_1d). Source
// adds h_j (tau/2) F(x_j, t_n + tau/2) to the predictor rhs.
void step_second_order_1d(SolverState1D& state, const Grid1D& grid, const ProblemSpec1D& spec,
                          double tau, const StepOptions& opts = {},
                          MobilityProfile* mob_out = nullptr);

}  // namespace fvfp

#include "fvfp/solver2d.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fvfp {

namespace {

constexpr double kClampRel = 1e-13;

void repair_negatives(Field& rho, const Grid2D& grid, double scale, const StepOptions& opts,
                      SolverState2D& state) {
    const double raw_min = min_value(rho);
    if (raw_min >= 0.0) return;

    StepRepairRecord rec;
    rec.step_index = state.step_index + 1;
    rec.min_before = raw_min;
    const double thresh = kClampRel * std::max(scale, 0.0);
    if (raw_min >= -thresh) {
        for (double& v : rho.values)
            if (v < 0.0) {
                v = 0.0;
                ++rec.clamped_cells;
            }
    } else if (opts.limiter) {
        auto [fixed, actions] = limit_field_2d(rho, grid);
        rho = std::move(fixed);
        rec.limiter = std::move(actions);
    }
    state.repair_log.push_back(std::move(rec));
}

void commit(SolverState2D& state, Field next, double tau) {
    state.rho_prev = std::move(state.rho_curr);
    state.rho_curr = std::move(next);
    state.time += tau;
    ++state.step_index;
}

void add_source(BandedSystem2D& sys, const Grid2D& grid, const ProblemSpec2D& spec, double weight,
                double t_eval) {
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            sys.rhs[grid.index(i, j)] += grid.gx.widths[i] * grid.gy.widths[j] * weight *
                                         spec.source(grid.gx.centers[i], grid.gy.centers[j],
                                                     t_eval);
}

Field advance_implicit(const Grid2D& grid, const MobilityProfile2D& mob, const Field& rho_n,
                       double tau, const ProblemSpec2D& spec, double source_weight,
                       double source_time) {
    BandedSystem2D sys = assemble_first_order_2d(grid, mob, rho_n, tau);
    if (spec.source && source_weight != 0.0) add_source(sys, grid, spec, source_weight, source_time);
    const std::vector<double> g = solve_banded_2d(sys);
    Field out(static_cast<std::size_t>(grid.cells()));
    for (int p = 0; p < grid.cells(); ++p) out[p] = mob.at_centers[p] * g[p];
    return out;
}

}  // namespace

BandedSystem2D assemble_first_order_2d(const Grid2D& grid, const MobilityProfile2D& mob,
                                       const Field& rho_n, double tau) {
    const int nx = grid.nx(), ny = grid.ny();
    if (static_cast<int>(mob.at_centers.size()) != nx * ny ||
        static_cast<int>(mob.at_x_interfaces.size()) != (nx - 1) * ny ||
        static_cast<int>(mob.at_y_interfaces.size()) != nx * (ny - 1))
        throw std::invalid_argument("assemble_first_order_2d: profile does not match grid");
    if (!(tau > 0.0)) throw std::invalid_argument("assemble_first_order_2d: tau must be positive");

    BandedSystem2D sys;
    sys.nx = nx;
    sys.ny = ny;
    const std::size_t cells = static_cast<std::size_t>(nx * ny);
    sys.center.resize(cells);
    sys.west.assign(cells, 0.0);
    sys.east.assign(cells, 0.0);
    sys.south.assign(cells, 0.0);
    sys.north.assign(cells, 0.0);
    sys.rhs.resize(cells);

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int p = sys.index(i, j);
            const double area = grid.gx.widths[i] * grid.gy.widths[j];
            double d = area * mob.at_centers[p];
            if (i > 0) {
                const double c = tau * grid.gy.widths[j] / grid.gx.half_widths[i - 1] *
                                 mob.at_x_interfaces[j * (nx - 1) + (i - 1)];
                d += c;
                sys.west[p] = -c;
            }
            if (i + 1 < nx) {
                const double c = tau * grid.gy.widths[j] / grid.gx.half_widths[i] *
                                 mob.at_x_interfaces[j * (nx - 1) + i];
                d += c;
                sys.east[p] = -c;
            }
            if (j > 0) {
                const double c = tau * grid.gx.widths[i] / grid.gy.half_widths[j - 1] *
                                 mob.at_y_interfaces[(j - 1) * nx + i];
                d += c;
                sys.south[p] = -c;
            }
            if (j + 1 < ny) {
                const double c = tau * grid.gx.widths[i] / grid.gy.half_widths[j] *
                                 mob.at_y_interfaces[j * nx + i];
                d += c;
                sys.north[p] = -c;
            }
            sys.center[p] = d;
            sys.rhs[p] = area * rho_n[p];
        }
    }
    assert(sys.strictly_diagonally_dominant());
    return sys;
}

void step_first_order_2d(SolverState2D& state, const Grid2D& grid, const ProblemSpec2D& spec,
                         double tau, const StepOptions& opts, MobilityProfile2D* mob_out) {
    const Field& rho_n = state.rho_curr;
    const MobilityProfile2D mob = mobility_profile_2d(grid, spec, rho_n);
    Field next = advance_implicit(grid, mob, rho_n, tau, spec, tau, state.time + tau);

    repair_negatives(next, grid, max_value(rho_n), opts, state);
    state.predictor.reset();
    if (mob_out) *mob_out = mob;
    commit(state, std::move(next), tau);
}

void step_second_order_2d(SolverState2D& state, const Grid2D& grid, const ProblemSpec2D& spec,
                          double tau, const StepOptions& opts, MobilityProfile2D* mob_out) {
    if (!state.rho_prev)
        throw std::logic_error(
            "step_second_order_2d: rho_prev missing; take the first step with the first-order "
            "scheme");
    const Field& rho_n = state.rho_curr;
    const Field& rho_m = *state.rho_prev;

    Field extrap(static_cast<std::size_t>(grid.cells()));
    for (int p = 0; p < grid.cells(); ++p) extrap[p] = 1.5 * rho_n[p] - 0.5 * rho_m[p];
    const MobilityProfile2D mob = mobility_profile_2d(grid, spec, extrap);

    Field star = advance_implicit(grid, mob, rho_n, 0.5 * tau, spec, 0.5 * tau,
                                  state.time + 0.5 * tau);
    Field next(static_cast<std::size_t>(grid.cells()));
    for (int p = 0; p < grid.cells(); ++p) next[p] = 2.0 * star[p] - rho_n[p];

    repair_negatives(next, grid, max_value(rho_n), opts, state);
    state.predictor = std::move(star);
    if (mob_out) *mob_out = mob;
    commit(state, std::move(next), tau);
}

}  // namespace fvfp

#include "fvfp/solver1d.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fvfp {

namespace {

constexpr double kClampRel = 1e-13;

// Clamp rounding noise to zero; run the scaling limiter on true negatives.
void repair_negatives(Field& rho, const Grid1D& grid, double scale, const StepOptions& opts,
                      SolverState1D& state) {
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
        auto [fixed, actions] = limit_field_1d(rho, grid);
        rho = std::move(fixed);
        rec.limiter = std::move(actions);
    }
    state.repair_log.push_back(std::move(rec));
}

void commit(SolverState1D& state, Field next, double tau) {
    state.rho_prev = std::move(state.rho_curr);
    state.rho_curr = std::move(next);
    state.time += tau;
    ++state.step_index;
}

}  // namespace

BandedSystem1D assemble_first_order_1d(const Grid1D& grid, const MobilityProfile& mob,
                                       const Field& rho_n, double tau) {
    const int n = grid.n();
    if (static_cast<int>(mob.at_centers.size()) != n ||
        static_cast<int>(mob.at_interfaces.size()) != n - 1)
        throw std::invalid_argument("assemble_first_order_1d: profile does not match grid");
    if (!(tau > 0.0)) throw std::invalid_argument("assemble_first_order_1d: tau must be positive");

    BandedSystem1D sys;
    sys.sub.assign(static_cast<std::size_t>(n), 0.0);
    sys.super.assign(static_cast<std::size_t>(n), 0.0);
    sys.diag.resize(static_cast<std::size_t>(n));
    sys.rhs.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double d = grid.widths[j] * mob.at_centers[j];
        if (j > 0) {
            const double c = (tau / grid.half_widths[j - 1]) * mob.at_interfaces[j - 1];
            d += c;
            sys.sub[j] = -c;
        }
        if (j + 1 < n) {
            const double c = (tau / grid.half_widths[j]) * mob.at_interfaces[j];
            d += c;
            sys.super[j] = -c;
        }
        sys.diag[j] = d;
        sys.rhs[j] = grid.widths[j] * rho_n[j];
    }
    assert(sys.strictly_diagonally_dominant());
    return sys;
}

void step_first_order_1d(SolverState1D& state, const Grid1D& grid, const ProblemSpec1D& spec,
                         double tau, const StepOptions& opts, MobilityProfile* mob_out) {
    const int n = grid.n();
    const Field& rho_n = state.rho_curr;
    const MobilityProfile mob = mobility_profile_1d(grid, spec, rho_n);

    BandedSystem1D sys = assemble_first_order_1d(grid, mob, rho_n, tau);
    if (spec.source) {
        const double t_next = state.time + tau;
        for (int j = 0; j < n; ++j)
            sys.rhs[j] += grid.widths[j] * tau * spec.source(grid.centers[j], t_next);
    }
    const std::vector<double> g = solve_tridiagonal(sys);

    Field next(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) next[j] = mob.at_centers[j] * g[j];

    repair_negatives(next, grid, max_value(rho_n), opts, state);
    state.predictor.reset();
    if (mob_out) *mob_out = mob;
    commit(state, std::move(next), tau);
}

void step_explicit_euler_1d(SolverState1D& state, const Grid1D& grid, const ProblemSpec1D& spec,
                            double tau, const StepOptions&, MobilityProfile* mob_out) {
    const int n = grid.n();
    const Field& rho_n = state.rho_curr;
    const MobilityProfile mob = mobility_profile_1d(grid, spec, rho_n);

    std::vector<double> gval(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) gval[j] = rho_n[j] / mob.at_centers[j];
    // interior fluxes; zero-flux boundaries
    std::vector<double> flux(static_cast<std::size_t>(n + 1), 0.0);
    for (int j = 0; j + 1 < n; ++j)
        flux[j + 1] = mob.at_interfaces[j] / grid.half_widths[j] * (gval[j + 1] - gval[j]);

    Field next(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double v = rho_n[j] + tau / grid.widths[j] * (flux[j + 1] - flux[j]);
        if (spec.source) v += tau * spec.source(grid.centers[j], state.time);
        next[j] = v;
    }

    state.predictor.reset();
    if (mob_out) *mob_out = mob;
    commit(state, std::move(next), tau);
}

void step_second_order_1d(SolverState1D& state, const Grid1D& grid, const ProblemSpec1D& spec,
                          double tau, const StepOptions& opts, MobilityProfile* mob_out) {
    if (!state.rho_prev)
        throw std::logic_error(
            "step_second_order_1d: rho_prev missing; take the first step with the first-order "
            "scheme");
    const int n = grid.n();
    const Field& rho_n = state.rho_curr;
    const Field& rho_m = *state.rho_prev;

    Field extrap(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) extrap[j] = 1.5 * rho_n[j] - 0.5 * rho_m[j];
    const MobilityProfile mob = mobility_profile_1d(grid, spec, extrap);

    // implicit half step in G with the extrapolated mobility
    BandedSystem1D sys = assemble_first_order_1d(grid, mob, rho_n, 0.5 * tau);
    if (spec.source) {
        const double t_mid = state.time + 0.5 * tau;
        for (int j = 0; j < n; ++j)
            sys.rhs[j] += grid.widths[j] * 0.5 * tau * spec.source(grid.centers[j], t_mid);
    }
    const std::vector<double> g = solve_tridiagonal(sys);

    Field star(static_cast<std::size_t>(n));
    Field next(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        star[j] = mob.at_centers[j] * g[j];
        next[j] = 2.0 * star[j] - rho_n[j];
    }

    repair_negatives(next, grid, max_value(rho_n), opts, state);
    state.predictor = std::move(star);
    if (mob_out) *mob_out = mob;
    commit(state, std::move(next), tau);
}

}  // namespace fvfp

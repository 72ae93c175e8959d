#include <doctest.h>

#include <stdexcept>

#include "fvfp/diagnostics.hpp"
#include "fvfp/solver1d.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace fvfp;

namespace {

ProblemSpec1D heat_spec(double a, double b) {
    ProblemSpec1D s;
    s.xmin = a;
    s.xmax = b;
    return s;
}

MobilityProfile unit_mobility(int n) {
    MobilityProfile m;
    m.at_centers.assign(static_cast<std::size_t>(n), 1.0);
    m.at_interfaces.assign(static_cast<std::size_t>(n - 1), 1.0);
    return m;
}

SolverState1D state_of(std::vector<double> v) {
    SolverState1D st;
    st.rho_curr.values = std::move(v);
    return st;
}

}  // namespace

TEST_CASE("first-order assembly: canonical two-cell rows") {
    const Grid1D g = uniform_grid_1d(0.0, 2.0, 2);  // h = 1
    Field rho(2);
    rho[0] = 1.0;
    rho[1] = 0.0;
    const BandedSystem1D sys = assemble_first_order_1d(g, unit_mobility(2), rho, 1.0);
    CHECK(sys.diag[0] == 2.0);
    CHECK(sys.super[0] == -1.0);
    CHECK(sys.rhs[0] == 1.0);
    CHECK(sys.sub[1] == -1.0);
    CHECK(sys.diag[1] == 2.0);
    CHECK(sys.rhs[1] == 0.0);
    CHECK(sys.strictly_diagonally_dominant());
}

TEST_CASE("first-order assembly: tau -> 0 leaves the identity in G") {
    const Grid1D g = uniform_grid_1d(0.0, 1.0, 4);
    Field rho(4);
    for (int j = 0; j < 4; ++j) rho[j] = 1.0 + j;
    const BandedSystem1D sys = assemble_first_order_1d(g, unit_mobility(4), rho, 1e-30);
    const auto gsol = solve_tridiagonal(sys);
    for (int j = 0; j < 4; ++j) CHECK(gsol[j] == doctest::Approx(rho[j]).epsilon(1e-14));
}

TEST_CASE("assembled systems are strictly diagonally dominant for any tau") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (double tau : {1e-6, 1.0, 1e6}) {
        const Grid1D g = uniform_grid_1d(0.0, 1.0, 8);
        Field rho(8);
        for (auto& v : rho.values) v = u(rng);
        ProblemSpec1D s = heat_spec(0.0, 1.0);
        s.V = [](double x) { return std::sin(5.0 * x); };
        const MobilityProfile m = mobility_profile_1d(g, s, rho);
        const BandedSystem1D sys = assemble_first_order_1d(g, m, rho, tau);
        CHECK(sys.strictly_diagonally_dominant());
    }
}

TEST_CASE("tridiagonal solve") {
    SUBCASE("identity") {
        BandedSystem1D sys;
        sys.diag = {1.0, 1.0, 1.0};
        sys.sub = {0.0, 0.0, 0.0};
        sys.super = {0.0, 0.0, 0.0};
        sys.rhs = {3.0, -1.0, 2.0};
        const auto x = solve_tridiagonal(sys);
        CHECK(x[0] == 3.0);
        CHECK(x[1] == -1.0);
        CHECK(x[2] == 2.0);
    }
    SUBCASE("2x2 hand case") {
        BandedSystem1D sys;
        sys.diag = {2.0, 2.0};
        sys.sub = {0.0, -1.0};
        sys.super = {-1.0, 0.0};
        sys.rhs = {1.0, 0.0};
        const auto x = solve_tridiagonal(sys);
        CHECK(x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("random dominant systems vs dense elimination oracle") {
        std::mt19937 rng(17);
        for (int trial = 0; trial < 25; ++trial) {
            const auto t = oracles::random_dominant_tridiagonal(6, rng);
            BandedSystem1D sys;
            sys.sub = t.sub;
            sys.diag = t.diag;
            sys.super = t.super;
            sys.rhs = t.b;
            const auto x = solve_tridiagonal(sys);
            const auto ref = oracles::dense_solve(t.a, t.b);
            for (int j = 0; j < 6; ++j) CHECK(x[j] == doctest::Approx(ref[j]).epsilon(1e-12));
            // residual bound
            for (int j = 0; j < 6; ++j) {
                double ax = t.diag[j] * x[j];
                if (j > 0) ax += t.sub[j] * x[j - 1];
                if (j < 5) ax += t.super[j] * x[j + 1];
                CHECK(std::abs(ax - t.b[j]) <= 1e-12);
            }
        }
    }
}

TEST_CASE("first-order step: canonical case and mass") {
    const Grid1D g = uniform_grid_1d(0.0, 2.0, 2);
    SolverState1D st = state_of({1.0, 0.0});
    const ProblemSpec1D s = heat_spec(0.0, 2.0);
    step_first_order_1d(st, g, s, 1.0);
    CHECK(st.rho_curr[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(st.rho_curr[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(total_mass(st.rho_curr, g) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(st.step_index == 1);
    CHECK(st.time == 1.0);
    CHECK(st.rho_prev.has_value());
}

TEST_CASE("first-order step preserves the discrete steady state") {
    const Grid1D g = uniform_grid_1d(-2.0, 2.0, 16);
    ProblemSpec1D s = heat_spec(-2.0, 2.0);
    s.V = [](double x) { return 0.5 * x * x; };
    SolverState1D st;
    st.rho_curr = Field(16);
    for (int j = 0; j < 16; ++j) st.rho_curr[j] = 2.5 * std::exp(-s.V(g.centers[j]));
    const Field initial = st.rho_curr;
    for (int k = 0; k < 5; ++k) step_first_order_1d(st, g, s, 1.0);
    for (int j = 0; j < 16; ++j)
        CHECK(st.rho_curr[j] == doctest::Approx(initial[j]).epsilon(1e-12));
}

TEST_CASE("unconditional positivity of the first-order step") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(u(rng) * 13);
        const Grid1D g = uniform_grid_1d(0.0, 1.0, n);
        SolverState1D st;
        st.rho_curr = Field(static_cast<std::size_t>(n));
        for (auto& v : st.rho_curr.values) v = u(rng) < 0.2 ? 0.0 : u(rng);
        const double scale = max_value(st.rho_curr);
        ProblemSpec1D s = heat_spec(0.0, 1.0);
        const double av = 2.0 * u(rng) - 1.0, bw = u(rng) - 0.5;
        s.V = [av](double x) { return av * std::cos(7.0 * x); };
        s.W = [bw](double x) { return bw * std::cos(4.0 * x); };
        const double tau = std::pow(10.0, -3.0 + 6.0 * u(rng));
        step_first_order_1d(st, g, s, tau);
        CHECK(min_value(st.rho_curr) >= -1e-13 * scale);
    }
}

TEST_CASE("explicit Euler reference stepper") {
    const Grid1D g = uniform_grid_1d(0.0, 2.0, 2);
    const ProblemSpec1D s = heat_spec(0.0, 2.0);
    SUBCASE("uniform state unchanged") {
        SolverState1D st = state_of({0.7, 0.7});
        step_explicit_euler_1d(st, g, s, 0.3);
        CHECK(st.rho_curr[0] == 0.7);
        CHECK(st.rho_curr[1] == 0.7);
    }
    SUBCASE("single-flux hand update") {
        SolverState1D st = state_of({1.0, 0.0});
        step_explicit_euler_1d(st, g, s, 0.1);
        CHECK(st.rho_curr[0] == doctest::Approx(0.9).epsilon(1e-15));
        CHECK(st.rho_curr[1] == doctest::Approx(0.1).epsilon(1e-15));
    }
    SUBCASE("CFL violation goes negative") {
        SolverState1D st = state_of({1.0, 0.0});
        step_explicit_euler_1d(st, g, s, 2.0);
        CHECK(st.rho_curr[0] == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(st.rho_curr[1] == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(total_mass(st.rho_curr, g) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("explicit and implicit first-order steps agree to O(tau^2)") {
    const Grid1D g = uniform_grid_1d(0.0, 2.0, 8);
    ProblemSpec1D s = heat_spec(0.0, 2.0);
    s.V = [](double x) { return 0.3 * std::sin(x); };
    SolverState1D a, b;
    a.rho_curr = cell_average_init_1d([](double x) { return 1.0 + 0.5 * std::cos(x); }, g);
    b.rho_curr = a.rho_curr;
    const double tau = 1e-6;
    step_first_order_1d(a, g, s, tau);
    step_explicit_euler_1d(b, g, s, tau);
    const double scale = max_value(a.rho_curr);
    for (int j = 0; j < 8; ++j)
        CHECK(std::abs(a.rho_curr[j] - b.rho_curr[j]) <= 1e-9 * scale);
}

TEST_CASE("second-order step: canonical two-cell case") {
    const Grid1D g = uniform_grid_1d(0.0, 2.0, 2);
    const ProblemSpec1D s = heat_spec(0.0, 2.0);
    SolverState1D st = state_of({1.0, 0.0});
    st.rho_prev = st.rho_curr;
    step_second_order_1d(st, g, s, 1.0);
    // predictor solves (hM + tau/2 (g+g))G - ... = h rho^n:
    //   [1.5 -0.5 | 1], [-0.5 1.5 | 0]  ->  rho* = (0.75, 0.25)
    REQUIRE(st.predictor.has_value());
    CHECK((*st.predictor)[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK((*st.predictor)[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(st.rho_curr[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(st.rho_curr[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(total_mass(st.rho_curr, g) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("second-order step requires history") {
    const Grid1D g = uniform_grid_1d(0.0, 1.0, 2);
    SolverState1D st = state_of({1.0, 1.0});
    CHECK_THROWS_AS(step_second_order_1d(st, g, heat_spec(0.0, 1.0), 0.1), std::logic_error);
}

TEST_CASE("second-order step keeps the steady state") {
    const Grid1D g = uniform_grid_1d(-1.0, 1.0, 12);
    ProblemSpec1D s = heat_spec(-1.0, 1.0);
    s.V = [](double x) { return x * x; };
    SolverState1D st;
    st.rho_curr = Field(12);
    for (int j = 0; j < 12; ++j) st.rho_curr[j] = 0.8 * std::exp(-s.V(g.centers[j]));
    st.rho_prev = st.rho_curr;
    const Field initial = st.rho_curr;
    step_second_order_1d(st, g, s, 0.5);
    for (int j = 0; j < 12; ++j)
        CHECK(st.rho_curr[j] == doctest::Approx(initial[j]).epsilon(1e-13));
    CHECK((*st.predictor)[3] == doctest::Approx(initial[3]).epsilon(1e-13));
}

TEST_CASE("corrector identity holds bitwise") {
    const Grid1D g = uniform_grid_1d(0.0, 1.0, 9);
    ProblemSpec1D s = heat_spec(0.0, 1.0);
    s.V = [](double x) { return 0.2 * std::cos(3.0 * x); };
    SolverState1D st;
    st.rho_curr = cell_average_init_1d([](double x) { return 1.2 + std::sin(x); }, g);
    step_first_order_1d(st, g, s, 0.05);
    const Field rho_n = st.rho_curr;
    step_second_order_1d(st, g, s, 0.05);
    REQUIRE(st.predictor.has_value());
    for (int j = 0; j < 9; ++j)
        CHECK(st.rho_curr[j] == 2.0 * (*st.predictor)[j] - rho_n[j]);
}

TEST_CASE("mass conservation across steppers and steps") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w(6);
        double sum = 0.0;
        for (auto& x : w) {
            x = 0.1 + u(rng);
            sum += x;
        }
        for (auto& x : w) x /= sum;  // domain [0,1]
        const Grid1D g = build_grid_1d(0.0, 1.0, w);
        ProblemSpec1D s = heat_spec(0.0, 1.0);
        const double cv = u(rng);
        s.V = [cv](double x) { return cv * x; };
        s.W = [](double x) { return 0.3 * std::exp(-std::abs(x)); };
        SolverState1D st;
        st.rho_curr = Field(6);
        for (auto& v : st.rho_curr.values) v = u(rng) + 0.01;
        const double m0 = total_mass(st.rho_curr, g);
        step_first_order_1d(st, g, s, 0.7);
        step_second_order_1d(st, g, s, 0.7);
        step_second_order_1d(st, g, s, 0.7);
        CHECK(total_mass(st.rho_curr, g) == doctest::Approx(m0).epsilon(1e-12));
    }
}

TEST_CASE("true negatives route to the limiter when enabled") {
    // an isolated spike collapses by more than half within tau/2, so the
    // corrector overshoots below zero
    const Grid1D g = uniform_grid_1d(0.0, 8.0, 8);
    const ProblemSpec1D s = heat_spec(0.0, 8.0);
    SolverState1D raw = state_of({0.0, 0.0, 0.0, 10.0, 0.0, 0.0, 0.0, 0.0});
    raw.rho_prev = raw.rho_curr;
    step_second_order_1d(raw, g, s, 5.0);
    CHECK(min_value(raw.rho_curr) < -1e-6);
    REQUIRE(!raw.repair_log.empty());
    CHECK(raw.repair_log[0].limiter.empty());  // limiter off: only recorded

    SolverState1D lim = state_of({0.0, 0.0, 0.0, 10.0, 0.0, 0.0, 0.0, 0.0});
    lim.rho_prev = lim.rho_curr;
    StepOptions opts;
    opts.limiter = true;
    step_second_order_1d(lim, g, s, 5.0, opts);
    CHECK(min_value(lim.rho_curr) >= 0.0);
    CHECK(total_mass(lim.rho_curr, g) == doctest::Approx(10.0).epsilon(1e-13));
    REQUIRE(!lim.repair_log.empty());
    CHECK(!lim.repair_log[0].limiter.empty());
    CHECK(lim.repair_log[0].limiter[0].theta < 1.0);
}

TEST_CASE("energy dissipation inequality per step, W = 0") {
    const Grid1D g = uniform_grid_1d(-4.0, 4.0, 40);
    ProblemSpec1D s = heat_spec(-4.0, 4.0);
    s.V = [](double x) { return 0.5 * x * x; };
    SolverState1D st;
    st.rho_curr =
        cell_average_init_1d([](double x) { return std::abs(x) < 2.0 ? 1.0 : 0.0; }, g);
    double energy = discrete_energy_1d(st.rho_curr, g, s);
    for (double tau : {1e-3, 0.2, 5.0, 100.0}) {
        MobilityProfile mob;
        step_first_order_1d(st, g, s, tau, {}, &mob);
        const double diss = dissipation_1d(st.rho_curr, mob, g);
        const double next = discrete_energy_1d(st.rho_curr, g, s);
        CHECK(next - energy <= -tau * diss + 1e-12 * std::abs(energy));
        energy = next;
    }
}

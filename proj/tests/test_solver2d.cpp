#include <doctest.h>

#include <stdexcept>

#include "fvfp/diagnostics.hpp"
#include "fvfp/solver1d.hpp"
#include "fvfp/solver2d.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace fvfp;

namespace {

MobilityProfile2D unit_mobility(int nx, int ny) {
    MobilityProfile2D m;
    m.at_centers.assign(static_cast<std::size_t>(nx * ny), 1.0);
    m.at_x_interfaces.assign(static_cast<std::size_t>((nx - 1) * ny), 1.0);
    m.at_y_interfaces.assign(static_cast<std::size_t>(nx * (ny - 1)), 1.0);
    return m;
}

ProblemSpec2D heat_spec_2d(double ax, double bx, double ay, double by) {
    ProblemSpec2D s;
    s.xmin = ax;
    s.xmax = bx;
    s.ymin = ay;
    s.ymax = by;
    return s;
}

std::vector<std::vector<double>> dense_of(const BandedSystem2D& s) {
    const int n = s.cells();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i) {
            const int p = s.index(i, j);
            a[p][p] = s.center[p];
            if (i > 0) a[p][p - 1] = s.west[p];
            if (i + 1 < s.nx) a[p][p + 1] = s.east[p];
            if (j > 0) a[p][p - s.nx] = s.south[p];
            if (j + 1 < s.ny) a[p][p + s.nx] = s.north[p];
        }
    return a;
}

}  // namespace

TEST_CASE("2D assembly reduces to the 1D assembly for Nx x 1") {
    const Grid2D g2 = uniform_grid_2d(0.0, 2.0, 2, 0.0, 1.0, 1);
    const Grid1D g1 = uniform_grid_1d(0.0, 2.0, 2);
    Field rho(2);
    rho[0] = 1.0;
    rho[1] = 0.0;
    const BandedSystem2D s2 = assemble_first_order_2d(g2, unit_mobility(2, 1), rho, 1.0);
    MobilityProfile m1;
    m1.at_centers = {1.0, 1.0};
    m1.at_interfaces = {1.0};
    const BandedSystem1D s1 = assemble_first_order_1d(g1, m1, rho, 1.0);
    // the 2D rows carry the extra factor h^y = 1
    CHECK(s2.center[0] == doctest::Approx(s1.diag[0]).epsilon(1e-15));
    CHECK(s2.east[0] == doctest::Approx(s1.super[0]).epsilon(1e-15));
    CHECK(s2.rhs[0] == doctest::Approx(s1.rhs[0]).epsilon(1e-15));
    CHECK(s2.strictly_diagonally_dominant());
}

TEST_CASE("2D assembly: tau -> 0 is diagonal, G = rho/M") {
    const Grid2D g = uniform_grid_2d(0.0, 1.0, 3, 0.0, 1.0, 2);
    Field rho(6);
    for (int p = 0; p < 6; ++p) rho[p] = 1.0 + p;
    const BandedSystem2D sys = assemble_first_order_2d(g, unit_mobility(3, 2), rho, 1e-30);
    const auto gsol = solve_banded_2d(sys);
    for (int p = 0; p < 6; ++p) CHECK(gsol[p] == doctest::Approx(rho[p]).epsilon(1e-12));
}

TEST_CASE("2D assembly: M=1 uniform grid gives the 5-point stencil, symmetric") {
    const Grid2D g = uniform_grid_2d(0.0, 3.0, 3, 0.0, 3.0, 3);  // h = 1
    Field rho(9, 1.0);
    const double tau = 0.7;
    const BandedSystem2D s = assemble_first_order_2d(g, unit_mobility(3, 3), rho, tau);
    const int p = s.index(1, 1);
    CHECK(s.center[p] == doctest::Approx(1.0 + 4.0 * tau).epsilon(1e-15));
    CHECK(s.east[p] == doctest::Approx(-tau).epsilon(1e-15));
    CHECK(s.north[p] == doctest::Approx(-tau).epsilon(1e-15));
    // operator symmetry: entry (p,q) == entry (q,p)
    const auto a = dense_of(s);
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) CHECK(a[r][c] == doctest::Approx(a[c][r]).epsilon(1e-15));
}

TEST_CASE("banded solve") {
    SUBCASE("diagonal system is exact") {
        BandedSystem2D s;
        s.nx = 2;
        s.ny = 2;
        s.center = {2.0, 4.0, 5.0, 8.0};
        s.west = s.east = s.south = s.north = {0.0, 0.0, 0.0, 0.0};
        s.rhs = {2.0, 8.0, 15.0, 32.0};
        const auto x = solve_banded_2d(s);
        CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(x[3] == doctest::Approx(4.0).epsilon(1e-13));
    }
    SUBCASE("2x1 system equals the 1D case") {
        BandedSystem2D s;
        s.nx = 2;
        s.ny = 1;
        s.center = {2.0, 2.0};
        s.west = {0.0, -1.0};
        s.east = {-1.0, 0.0};
        s.south = s.north = {0.0, 0.0};
        s.rhs = {1.0, 0.0};
        const auto x = solve_banded_2d(s);
        CHECK(x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("random dominant grid systems vs dense oracle") {
        std::mt19937 rng(31);
        std::uniform_real_distribution<double> u(0.05, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            BandedSystem2D s;
            s.nx = 5;
            s.ny = 5;
            const int n = 25;
            s.center.resize(n);
            s.west.assign(n, 0.0);
            s.east.assign(n, 0.0);
            s.south.assign(n, 0.0);
            s.north.assign(n, 0.0);
            s.rhs.resize(n);
            for (int j = 0; j < 5; ++j)
                for (int i = 0; i < 5; ++i) {
                    const int p = s.index(i, j);
                    double off = 0.0;
                    if (i > 0) off += (s.west[p] = -u(rng), -s.west[p]);
                    if (i < 4) off += (s.east[p] = -u(rng), -s.east[p]);
                    if (j > 0) off += (s.south[p] = -u(rng), -s.south[p]);
                    if (j < 4) off += (s.north[p] = -u(rng), -s.north[p]);
                    s.center[p] = off + u(rng);
                    s.rhs[p] = u(rng) - 0.4;
                }
            REQUIRE(s.strictly_diagonally_dominant());
            const auto x = solve_banded_2d(s);
            const auto ref = oracles::dense_solve(dense_of(s), s.rhs);
            for (int p = 0; p < n; ++p) CHECK(x[p] == doctest::Approx(ref[p]).epsilon(1e-10));
        }
    }
}

TEST_CASE("2D first-order step") {
    SUBCASE("uniform state unchanged") {
        const Grid2D g = uniform_grid_2d(0.0, 1.0, 3, 0.0, 1.0, 3);
        SolverState2D st;
        st.rho_curr = Field(9, 0.4);
        step_first_order_2d(st, g, heat_spec_2d(0.0, 1.0, 0.0, 1.0), 0.5);
        for (int p = 0; p < 9; ++p)
            CHECK(st.rho_curr[p] == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("Nx x 1 equals the canonical 1D result") {
        const Grid2D g = uniform_grid_2d(0.0, 2.0, 2, 0.0, 1.0, 1);
        SolverState2D st;
        st.rho_curr = Field(2);
        st.rho_curr[0] = 1.0;
        st.rho_curr[1] = 0.0;
        step_first_order_2d(st, g, heat_spec_2d(0.0, 2.0, 0.0, 1.0), 1.0);
        CHECK(st.rho_curr[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(st.rho_curr[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("positivity under large tau, random data") {
        std::mt19937 rng(53);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            const Grid2D g = uniform_grid_2d(0.0, 1.0, 6, 0.0, 1.0, 5);
            SolverState2D st;
            st.rho_curr = Field(30);
            for (auto& v : st.rho_curr.values) v = u(rng) < 0.3 ? 0.0 : u(rng);
            const double scale = max_value(st.rho_curr);
            ProblemSpec2D s = heat_spec_2d(0.0, 1.0, 0.0, 1.0);
            const double av = u(rng) - 0.5;
            s.V = [av](double x, double y) { return av * std::sin(4.0 * x) * std::cos(y); };
            step_first_order_2d(st, g, s, 100.0);
            CHECK(min_value(st.rho_curr) >= -1e-12 * scale);
            CHECK(total_mass(st.rho_curr, g) > 0.0);
        }
    }
}

TEST_CASE("2D second-order step") {
    SUBCASE("steady state is a fixed point") {
        const Grid2D g = uniform_grid_2d(-1.0, 1.0, 5, -1.0, 1.0, 4);
        ProblemSpec2D s = heat_spec_2d(-1.0, 1.0, -1.0, 1.0);
        s.V = [](double x, double y) { return x * x + 0.5 * y * y; };
        SolverState2D st;
        st.rho_curr = Field(20);
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 5; ++i)
                st.rho_curr[g.index(i, j)] =
                    1.7 * std::exp(-s.V(g.gx.centers[i], g.gy.centers[j]));
        st.rho_prev = st.rho_curr;
        const Field initial = st.rho_curr;
        step_second_order_2d(st, g, s, 0.3);
        for (int p = 0; p < 20; ++p)
            CHECK(st.rho_curr[p] == doctest::Approx(initial[p]).epsilon(1e-11));
    }
    SUBCASE("Nx x 1 equals the canonical 1D second-order case") {
        const Grid2D g = uniform_grid_2d(0.0, 2.0, 2, 0.0, 1.0, 1);
        SolverState2D st;
        st.rho_curr = Field(2);
        st.rho_curr[0] = 1.0;
        st.rho_curr[1] = 0.0;
        st.rho_prev = st.rho_curr;
        step_second_order_2d(st, g, heat_spec_2d(0.0, 2.0, 0.0, 1.0), 1.0);
        CHECK(st.rho_curr[0] == doctest::Approx(0.5).epsilon(1e-11));
        CHECK(st.rho_curr[1] == doctest::Approx(0.5).epsilon(1e-11));
        REQUIRE(st.predictor.has_value());
        CHECK((*st.predictor)[0] == doctest::Approx(0.75).epsilon(1e-11));
    }
    SUBCASE("missing history throws") {
        const Grid2D g = uniform_grid_2d(0.0, 1.0, 2, 0.0, 1.0, 2);
        SolverState2D st;
        st.rho_curr = Field(4, 1.0);
        CHECK_THROWS_AS(step_second_order_2d(st, g, heat_spec_2d(0.0, 1.0, 0.0, 1.0), 0.1),
                        std::logic_error);
    }
}

TEST_CASE("2D mass conservation across steps") {
    const Grid2D g = uniform_grid_2d(0.0, 1.0, 7, 0.0, 2.0, 5);
    ProblemSpec2D s = heat_spec_2d(0.0, 1.0, 0.0, 2.0);
    s.V = [](double x, double y) { return 0.4 * std::cos(3.0 * x) + 0.2 * y; };
    s.W = [](double sx, double sy) { return 0.2 * std::exp(-(sx * sx + sy * sy)); };
    SolverState2D st;
    st.rho_curr = cell_average_init_2d(
        [](double x, double y) { return 1.0 + 0.5 * std::sin(3.0 * x) * std::cos(2.0 * y); }, g);
    const double m0 = total_mass(st.rho_curr, g);
    step_first_order_2d(st, g, s, 0.5);
    CHECK(total_mass(st.rho_curr, g) == doctest::Approx(m0).epsilon(1e-11));
    step_second_order_2d(st, g, s, 0.5);
    CHECK(total_mass(st.rho_curr, g) == doctest::Approx(m0).epsilon(1e-11));
}

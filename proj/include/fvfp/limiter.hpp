#pragma once

#include "fvfp/grid.hpp"

#include <span>
#include <utility>
#include <vector>

namespace fvfp {

/** Admissible set around a negative anchor entry.
 *
 * members holds the anchor plus every nonzero entry added by the ring search,
 * in insertion order; average is positive by construction and
 * theta = min(1, average / (average - min_over_members)).
 */
struct Neighborhood {
    int anchor = 0;             // flat index
    std::vector<int> members;
    double average = 0.0;
    double theta = 1.0;
};

// One-sided growing search of the paper's (ii)/(iii) ordering: at distance m
// try k-m first, then k+m, skipping zeros, stopping as soon as the running
// average turns positive. Requires c[k] < 0 and a positive total sum.
Neighborhood find_neighborhood_1d(std::span<const double> c, int k);

// Square-ring growth, d_y outer / d_x inner, clipped to the nx-by-ny box,
// zeros skipped, stop mid-ring once the average is positive.
Neighborhood find_neighborhood_2d(std::span<const double> c, int nx, int ny, int k, int l);

// c~_j = theta c_j + (1-theta) cbar on the member set; entries outside are
// untouched. The member attaining the minimum maps to zero; ulp-level
// negative residue from the blend is snapped to exactly 0.
std::vector<double> apply_scaling_1d(std::span<const double> c, const Neighborhood& nbhd);
void apply_scaling_in_place(std::vector<double>& c, const Neighborhood& nbhd);

/** One repaired anchor: |S|, theta, and the member-set sums on both sides. */
struct LimiterAction {
    int anchor = 0;
    int set_size = 0;
    double theta = 1.0;
    double mass_before = 0.0;  // sum of h*rho over the member set, pre-scaling
    double mass_after = 0.0;
};

// Restore nonnegativity of a cell-average field via c_j = h_j rho_j.
// Anchors are processed in ascending index order; cells already repaired by
// an earlier neighborhood are not re-anchored. Global mass is unchanged.
std::pair<Field, std::vector<LimiterAction>> limit_field_1d(const Field& rho, const Grid1D& grid);
std::pair<Field, std::vector<LimiterAction>> limit_field_2d(const Field& rho, const Grid2D& grid);

}  // namespace fvfp

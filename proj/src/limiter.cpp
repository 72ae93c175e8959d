#include "fvfp/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fvfp {

namespace {

double member_sum(std::span<const double> c, const std::vector<int>& members) {
    double s = 0.0;
    for (int j : members) s += c[static_cast<std::size_t>(j)];
    return s;
}

Neighborhood finish(std::span<const double> c, int anchor, std::vector<int> members,
                    double sum) {
    Neighborhood nb;
    nb.anchor = anchor;
    nb.members = std::move(members);
    nb.average = sum / static_cast<double>(nb.members.size());
    double cmin = c[static_cast<std::size_t>(nb.members[0])];
    for (int j : nb.members) cmin = std::min(cmin, c[static_cast<std::size_t>(j)]);
    nb.theta = std::min(1.0, nb.average / (nb.average - cmin));
    return nb;
}

}  // namespace

Neighborhood find_neighborhood_1d(std::span<const double> c, int k) {
    const int n = static_cast<int>(c.size());
    if (k < 0 || k >= n) throw std::invalid_argument("find_neighborhood_1d: anchor out of range");
    if (!(c[static_cast<std::size_t>(k)] < 0.0))
        throw std::invalid_argument("find_neighborhood_1d: anchor entry is not negative");

    std::vector<int> members{k};
    double sum = c[static_cast<std::size_t>(k)];
    for (int m = 1; m <= n; ++m) {
        if (k - m >= 0 && c[static_cast<std::size_t>(k - m)] != 0.0) {
            members.push_back(k - m);
            sum += c[static_cast<std::size_t>(k - m)];
            if (sum > 0.0) return finish(c, k, std::move(members), sum);
        }
        if (k + m < n && c[static_cast<std::size_t>(k + m)] != 0.0) {
            members.push_back(k + m);
            sum += c[static_cast<std::size_t>(k + m)];
            if (sum > 0.0) return finish(c, k, std::move(members), sum);
        }
    }
    throw std::logic_error("find_neighborhood_1d: domain exhausted without positive average");
}

Neighborhood find_neighborhood_2d(std::span<const double> c, int nx, int ny, int k, int l) {
    if (static_cast<int>(c.size()) != nx * ny)
        throw std::invalid_argument("find_neighborhood_2d: size mismatch");
    auto idx = [nx](int i, int j) { return j * nx + i; };
    if (k < 0 || k >= nx || l < 0 || l >= ny)
        throw std::invalid_argument("find_neighborhood_2d: anchor out of range");
    if (!(c[static_cast<std::size_t>(idx(k, l))] < 0.0))
        throw std::invalid_argument("find_neighborhood_2d: anchor entry is not negative");

    std::vector<char> in(c.size(), 0);
    std::vector<int> members{idx(k, l)};
    in[static_cast<std::size_t>(idx(k, l))] = 1;
    double sum = c[static_cast<std::size_t>(idx(k, l))];
    const int mmax = std::max(nx, ny);
    for (int m = 1; m <= mmax; ++m) {
        for (int dy = std::max(0, l - m); dy <= std::min(l + m, ny - 1); ++dy) {
            for (int dx = std::max(0, k - m); dx <= std::min(k + m, nx - 1); ++dx) {
                const int p = idx(dx, dy);
                if (in[static_cast<std::size_t>(p)] || c[static_cast<std::size_t>(p)] == 0.0)
                    continue;
                in[static_cast<std::size_t>(p)] = 1;
                members.push_back(p);
                sum += c[static_cast<std::size_t>(p)];
                if (sum > 0.0) return finish(c, idx(k, l), std::move(members), sum);
            }
        }
    }
    throw std::logic_error("find_neighborhood_2d: domain exhausted without positive average");
}

void apply_scaling_in_place(std::vector<double>& c, const Neighborhood& nbhd) {
    const double theta = nbhd.theta;
    if (theta >= 1.0) return;  // no negatives in the set
    double cmin = c[static_cast<std::size_t>(nbhd.members[0])];
    for (int j : nbhd.members) cmin = std::min(cmin, c[static_cast<std::size_t>(j)]);
    const double blend = (1.0 - theta) * nbhd.average;
    for (int j : nbhd.members) {
        const double old = c[static_cast<std::size_t>(j)];
        if (old == cmin) {  // theta maps the minimum to zero; write it exactly
            c[static_cast<std::size_t>(j)] = 0.0;
            continue;
        }
        double v = theta * old + blend;
        if (v < 0.0) v = 0.0;  // ulp residue of the convex blend
        c[static_cast<std::size_t>(j)] = v;
    }
}

std::vector<double> apply_scaling_1d(std::span<const double> c, const Neighborhood& nbhd) {
    std::vector<double> out(c.begin(), c.end());
    apply_scaling_in_place(out, nbhd);
    return out;
}

namespace {

template <class WidthAt, class FindNbhd>
std::pair<Field, std::vector<LimiterAction>> limit_weighted(const Field& rho, int n,
                                                            WidthAt width_at, FindNbhd find) {
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = width_at(j) * rho[j];

    double total = 0.0;
    for (double v : c) total += v;
    if (!(total > 0.0))
        throw std::invalid_argument("limit_field: total mass must be positive");

    std::vector<LimiterAction> actions;
    for (int k = 0; k < n; ++k) {
        if (c[static_cast<std::size_t>(k)] >= 0.0) continue;  // may have been repaired already
        Neighborhood nb = find(c, k);
        LimiterAction act;
        act.anchor = k;
        act.set_size = static_cast<int>(nb.members.size());
        act.theta = nb.theta;
        act.mass_before = member_sum(c, nb.members);
        apply_scaling_in_place(c, nb);
        act.mass_after = member_sum(c, nb.members);
        actions.push_back(act);
    }

    Field out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out[j] = c[static_cast<std::size_t>(j)] / width_at(j);
    return {std::move(out), std::move(actions)};
}

}  // namespace

std::pair<Field, std::vector<LimiterAction>> limit_field_1d(const Field& rho, const Grid1D& grid) {
    if (rho.size() != static_cast<std::size_t>(grid.n()))
        throw std::invalid_argument("limit_field_1d: field length does not match grid");
    return limit_weighted(
        rho, grid.n(), [&](int j) { return grid.widths[j]; },
        [](const std::vector<double>& c, int k) { return find_neighborhood_1d(c, k); });
}

std::pair<Field, std::vector<LimiterAction>> limit_field_2d(const Field& rho, const Grid2D& grid) {
    if (rho.size() != static_cast<std::size_t>(grid.cells()))
        throw std::invalid_argument("limit_field_2d: field length does not match grid");
    const int nx = grid.nx();
    return limit_weighted(
        rho, grid.cells(),
        [&](int p) { return grid.gx.widths[p % nx] * grid.gy.widths[p / nx]; },
        [nx, ny = grid.ny()](const std::vector<double>& c, int p) {
            return find_neighborhood_2d(c, nx, ny, p % nx, p / nx);
        });
}

}  // namespace fvfp

#include "fvfp/solver1d.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fvfp {

bool BandedSystem1D::strictly_diagonally_dominant() const {
    const int m = n();
    for (int j = 0; j < m; ++j) {
        const double off = (j > 0 ? std::abs(sub[j]) : 0.0) +
                           (j + 1 < m ? std::abs(super[j]) : 0.0);
        if (!(diag[j] > off) || !(diag[j] > 0.0)) return false;
    }
    return true;
}

std::vector<double> solve_tridiagonal(const BandedSystem1D& sys) {
    const int m = sys.n();
    if (m == 0) return {};
    if (sys.sub.size() != sys.diag.size() || sys.super.size() != sys.diag.size() ||
        sys.rhs.size() != sys.diag.size())
        throw std::invalid_argument("solve_tridiagonal: inconsistent band lengths");

    std::vector<double> d(sys.diag), r(sys.rhs);
    for (int j = 1; j < m; ++j) {
        assert(d[j - 1] != 0.0);
        const double w = sys.sub[j] / d[j - 1];
        d[j] -= w * sys.super[j - 1];
        r[j] -= w * r[j - 1];
    }
    std::vector<double> x(static_cast<std::size_t>(m));
    assert(d[m - 1] != 0.0);
    x[m - 1] = r[m - 1] / d[m - 1];
    for (int j = m - 2; j >= 0; --j) x[j] = (r[j] - sys.super[j] * x[j + 1]) / d[j];
    return x;
}

}  // namespace fvfp

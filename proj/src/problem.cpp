#include "fvfp/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fvfp {

namespace {

constexpr int kSamples = 33;

void check_symmetry(double w_pos, double w_neg, double s) {
    // singular kernels may return -inf at s=0; symmetric by definition there
    if (std::isinf(w_pos) && std::isinf(w_neg)) return;
    const double scale = std::max({std::abs(w_pos), std::abs(w_neg), 1.0});
    if (std::abs(w_pos - w_neg) > 1e-12 * scale)
        throw std::invalid_argument("interaction kernel is not symmetric at displacement " +
                                    std::to_string(s));
}

}  // namespace

void validate_problem(const ProblemSpec1D& spec) {
    if (!(spec.xmax > spec.xmin))
        throw std::invalid_argument("problem domain must satisfy xmin < xmax");
    const double span = spec.xmax - spec.xmin;
    if (spec.W) {
        for (int i = 0; i < kSamples; ++i) {
            const double s = span * (static_cast<double>(i) / (kSamples - 1));
            check_symmetry(spec.W(s), spec.W(-s), s);
        }
    }
    if (spec.rho0) {
        for (int i = 0; i <= kSamples; ++i) {
            const double x = spec.xmin + span * (static_cast<double>(i) / kSamples);
            if (spec.rho0(x) < 0.0)
                throw std::invalid_argument("initial density is negative at x=" +
                                            std::to_string(x));
        }
    }
}

void validate_problem(const ProblemSpec2D& spec) {
    if (!(spec.xmax > spec.xmin) || !(spec.ymax > spec.ymin))
        throw std::invalid_argument("problem domain must satisfy min < max per direction");
    const double sx = spec.xmax - spec.xmin;
    const double sy = spec.ymax - spec.ymin;
    if (spec.W) {
        for (int i = 0; i < kSamples; ++i) {
            const double fx = static_cast<double>(i) / (kSamples - 1);
            const double dx = sx * fx;
            const double dy = sy * (1.0 - fx);
            check_symmetry(spec.W(dx, dy), spec.W(-dx, -dy), dx);
        }
    }
    if (spec.rho0) {
        constexpr int m = 9;
        for (int j = 0; j <= m; ++j)
            for (int i = 0; i <= m; ++i) {
                const double x = spec.xmin + sx * (static_cast<double>(i) / m);
                const double y = spec.ymin + sy * (static_cast<double>(j) / m);
                if (spec.rho0(x, y) < 0.0)
                    throw std::invalid_argument("initial density is negative at (" +
                                                std::to_string(x) + ", " + std::to_string(y) + ")");
            }
    }
}

}  // namespace fvfp

#pragma once

#include <functional>

namespace fvfp {

/** Continuous problem data for the 1D model
 *      d/dt rho = d/dx ( d/dx rho + rho d/dx (V + intensity * W*rho) ) + source.
 *
 * W must be even: W(s) = W(-s). `intensity` multiplies the convolution
 * inside the mobility exponent (alpha / chi of the interaction models).
 * Null callbacks mean "identically zero".
 */
struct ProblemSpec1D {
    std::function<double(double)> V;                // confinement
    std::function<double(double)> W;                // interaction kernel of displacement
    double intensity = 1.0;
    std::function<double(double, double)> source;   // F(x,t)
    std::function<double(double)> rho0;             // initial density, >= 0
    double xmin = 0.0;
    double xmax = 1.0;
};

struct ProblemSpec2D {
    std::function<double(double, double)> V;
    std::function<double(double, double)> W;        // W(sx,sy) = W(-sx,-sy)
    double intensity = 1.0;
    std::function<double(double, double, double)> source;  // F(x,y,t)
    std::function<double(double, double)> rho0;
    double xmin = 0.0, xmax = 1.0;
    double ymin = 0.0, ymax = 1.0;
};

// Sampled checks of the structural requirements: W symmetry (rel 1e-12)
// and rho0 >= 0. Throws std::invalid_argument on violation.
void validate_problem(const ProblemSpec1D& spec);
void validate_problem(const ProblemSpec2D& spec);

}  // namespace fvfp

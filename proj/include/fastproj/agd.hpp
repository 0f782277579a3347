#pragma once

#include <functional>

#include "fastproj/model.hpp"

namespace fastproj {

/// F with strong convexity alpha and smoothness beta (beta >= alpha > 0).
struct SmoothObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double alpha = 1.0;
  double beta = 1.0;
};

/**
 * Nesterov's accelerated gradient descent for strongly convex F.
 *
 *   y_{t+1} = x_t - grad F(x_t) / beta
 *   x_{t+1} = (1 + q) y_{t+1} - q y_t,   q = (sqrt(kappa) - 1) / (sqrt(kappa) + 1)
 *
 * starting from y_0 = x_0 = x_init. Returns y_T. Throws NumericalFailure
 * (carrying the last iterate) on a non-finite gradient or iterate.
 */
Vector agd_minimize(const SmoothObjective& objective, const Vector& x_init, int iterations);

/// ceil(sqrt(beta/alpha) * ln(beta * dist_sq_bound / eps_tilde)), at least 1.
int agd_iterations(double alpha, double beta, double dist_sq_bound, double eps_tilde);

}  // namespace fastproj

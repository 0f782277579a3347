#pragma once

#include <functional>

#include "fastproj/dual_oracle.hpp"
#include "fastproj/model.hpp"

namespace fastproj {

/**
 * Exact Euclidean projection onto the dual-norm unit ball {y : P*(y) <= 1},
 * together with the primal norm P itself (used only for the interior test and
 * the multiplier-zero subgradient).
 */
struct DualBallProjector {
  std::function<Vector(const Vector&)> project;
  std::function<double(const Vector&)> primal_norm;
};

/**
 * Exact dual oracle for projecting x0 onto {P(x) <= 1} at multiplier lambda > 0.
 *
 * With z = 2 x0 / lambda and y = project(z):
 *   x_lambda = x0 - (lambda/2) y
 *   v = -lambda + |x0|^2 - (lambda^2/4) |y - z|^2
 *   g = -1 - (lambda/2) |y - z|^2 - (y - z)^T x0      (= P(x_lambda) - 1)
 * Throws ContractViolation for lambda <= 0.
 */
OracleTriple exact_dual_norm_oracle(const Vector& x0, double lambda, const DualBallProjector& pi_star);

struct NormProjection {
  Vector x;
  double lambda = 0.0;
  double R = 0.0;
  // Calls to the dual-ball projector.
  int oracle_calls = 0;
  // ceil(log2(R max(1, |x0|) / eps)) + 2 for the last bisection run.
  int call_budget = 0;
  int doubling_rounds = 0;
  bool interior = false;
};

/// ceil(log2(R max(1, |x0|) / eps)) + 2.
int norm_bisection_budget(double R, double x0_norm, double eps);

/**
 * Projection onto {P(x) <= 1} by bisection on the one-dimensional dual over
 * [0, R], using only the dual-ball projector. Returns x0 when P(x0) <= 1.
 */
NormProjection project_norm_ball_via_dual(const Vector& x0, const DualBallProjector& pi_star, double R,
                                          double eps);

/// As above with R = 2 |x0| (at least 1), doubled while lambda ends above boundary_fraction * R.
NormProjection project_norm_ball_via_dual_auto(const Vector& x0, const DualBallProjector& pi_star, double eps,
                                               int max_doubling_rounds = 10, double boundary_fraction = 0.9);

}  // namespace fastproj

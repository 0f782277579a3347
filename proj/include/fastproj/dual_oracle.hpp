#pragma once

#include "fastproj/model.hpp"

namespace fastproj {

/// Approximate first-order information about the dual d(lambda) = min_x L(x, lambda).
struct OracleTriple {
  Vector x_lambda;  // approximate minimizer of L(., lambda)
  Vector g;         // h(x_lambda)
  double v = 0.0;   // L(x_lambda, lambda)
  // Gradient evaluations of L spent on this call (AGD steps plus certificate checks).
  long long inner_gradient_evals = 0;
  // |grad_x L(x_lambda, lambda)| at return.
  double grad_norm = 0.0;
  // True when |grad_x L|^2 <= 4 eps_tilde, i.e. the value gap is provably <= eps_tilde.
  // False means the solve stopped at the floating-point noise floor.
  bool certified = false;
};

/**
 * Minimizes L(., lambda) with AGD (alpha = 2, beta = 2 + |lambda|_1 L_max).
 *
 * The iteration count comes from agd_iterations() with the distance bound
 * 2 (B^2 + m^2 G^2 R^2) when the problem carries B, else |grad L(x_init)|^2 / 4
 * (strong convexity). The run is repeated from the current iterate with twice the budget until
 * |grad L|^2 <= 4 eps_tilde, or until the gradient stops shrinking because it
 * has reached rounding-error level. v and g are recomputed from x_lambda.
 *
 * warm_start, when non-null, replaces x0 as the starting point.
 */
OracleTriple approx_dual_oracle(const ProjectionProblem& problem, const Vector& lambda, double eps_tilde,
                                const Vector* warm_start = nullptr);

/// d(lambda) to reference accuracy eps_ref (typically 1e-14 or below).
double dual_value_highacc(const ProjectionProblem& problem, const Vector& lambda, double eps_ref = 1e-14);

}  // namespace fastproj

#include "fastproj/dual_oracle.hpp"

#include <cmath>
#include <limits>

#include "fastproj/agd.hpp"
#include "fastproj/errors.hpp"

namespace fastproj {

namespace {

constexpr int kMaxRounds = 40;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon();

// Size of |grad L| that rounding alone can produce near x.
double gradient_noise_floor(const ProjectionProblem& problem, const Vector& x, const Vector& lambda,
                            double beta) {
  double scale = beta * x.norm() + 2.0 * problem.x0.norm();
  for (int i = 0; i < problem.m(); ++i) {
    if (lambda[i] > 0.0) scale += lambda[i] * problem.constraints[i].grad(x).norm();
  }
  return 16.0 * kUnitRoundoff * std::sqrt(static_cast<double>(problem.n())) * scale;
}

}  // namespace

OracleTriple approx_dual_oracle(const ProjectionProblem& problem, const Vector& lambda, double eps_tilde,
                                const Vector* warm_start) {
  if (lambda.size() != problem.m()) throw InputError("dual oracle: lambda must have length m");
  if ((lambda.array() < 0.0).any()) throw ContractViolation("dual oracle: lambda must be nonnegative");
  if (!(eps_tilde > 0.0)) throw InputError("dual oracle: eps_tilde must be positive");
  if (warm_start && warm_start->size() != problem.n()) throw InputError("dual oracle: warm start has wrong length");

  const Vector& x_init = warm_start ? *warm_start : problem.x0;
  const double alpha = 2.0;
  const double beta = 2.0 + lambda.lpNorm<1>() * problem.max_smoothness();

  SmoothObjective objective;
  objective.value = [&](const Vector& x) { return lagrangian_value(problem, x, lambda); };
  objective.gradient = [&](const Vector& x) { return lagrangian_gradient(problem, x, lambda); };
  objective.alpha = alpha;
  objective.beta = beta;

  OracleTriple out;
  Vector x = x_init;
  double norm = objective.gradient(x).norm();
  out.inner_gradient_evals = 1;
  if (!std::isfinite(norm)) throw NumericalFailure("dual oracle: non-finite Lagrangian gradient", x);

  // L(., lambda) is 2-strongly convex, so |x_init - x*| <= |grad L(x_init)| / 2.
  double dist_sq;
  if (problem.B) {
    const double m = problem.m();
    const double g = problem.max_lipschitz();
    dist_sq = 2.0 * ((*problem.B) * (*problem.B) + m * m * g * g * problem.R * problem.R);
  } else {
    dist_sq = 0.25 * norm * norm;
  }

  // Past this many steps one AGD run contracts |grad| by well over 2x, so a
  // gradient that fails to halve is rounding noise.
  const double kappa = beta / alpha;
  const double contracting_steps = std::sqrt(kappa) * std::log(16.0 * kappa * (1.0 + kappa));

  out.certified = norm * norm <= 4.0 * eps_tilde;
  if (!out.certified && dist_sq > 0.0) {
    long long budget = agd_iterations(alpha, beta, dist_sq, eps_tilde);
    double previous = std::numeric_limits<double>::infinity();
    for (int round = 0; round < kMaxRounds; ++round) {
      const int steps = static_cast<int>(std::min<long long>(budget, std::numeric_limits<int>::max() / 2));
      x = agd_minimize(objective, x, steps);
      norm = objective.gradient(x).norm();
      out.inner_gradient_evals += steps + 1;
      if (!std::isfinite(norm)) throw NumericalFailure("dual oracle: non-finite Lagrangian gradient", x);
      if (norm * norm <= 4.0 * eps_tilde) {
        out.certified = true;
        break;
      }
      if (norm <= gradient_noise_floor(problem, x, lambda, beta)) break;
      if (static_cast<double>(steps) >= contracting_steps && norm > 0.5 * previous) break;
      previous = norm;
      budget *= 2;
    }
  }
  out.grad_norm = norm;

  out.x_lambda = std::move(x);
  out.g = eval_constraints(problem, out.x_lambda);
  // Same summation order as lagrangian_value(), so v matches it bit for bit.
  out.v = (out.x_lambda - problem.x0).squaredNorm();
  for (int i = 0; i < problem.m(); ++i) {
    if (lambda[i] != 0.0) out.v += lambda[i] * out.g[i];
  }
  return out;
}

double dual_value_highacc(const ProjectionProblem& problem, const Vector& lambda, double eps_ref) {
  return approx_dual_oracle(problem, lambda, eps_ref).v;
}

}  // namespace fastproj

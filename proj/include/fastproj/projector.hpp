#pragma once

#include <optional>

#include <json.hpp>

#include "fastproj/cutting_plane.hpp"
#include "fastproj/model.hpp"

namespace fastproj {

struct ProjectionResult {
  Vector x_hat;
  Vector lambda_bar;
  double objective = 0.0;      // |x_hat - x0|^2
  double max_violation = 0.0;  // max_i h_i(x_hat)
  double dual_value = 0.0;
  long long oracle_calls = 0;
  long long inner_gradient_evals = 0;
  int outer_iterations = 0;
  int doubling_rounds_used = 0;
  double R_final = 1.0;
  double epsilon_tilde = 0.0;
  // The doubling driver ran out of rounds with lambda_bar still near the box boundary.
  bool boundary_hit = false;
  CutTrace trace;
};

/// eps^4 / (256 (m R G)^6), capped at eps.
double theoretical_eps_tilde(double eps, int m, double R, double G);

/// Dual accuracy the cutting plane must reach so that the primal point is eps-accurate: (eps / (4 m R G))^2.
double dual_target_accuracy(double eps, int m, double R, double G);

/// (2m)^{-1} min(eps / H, sqrt(eps) / G); only the second branch when H is absent.
double r_epsilon(double eps, int m, double G, std::optional<double> H = std::nullopt);

/// ceil(2 m (m+1) ln(R / r)), at least 1.
int ellipsoid_iterations(int m, double R, double r);

/// ceil(log2(R / r)), at least 1.
int bisection_iterations(double R, double r);

/// max(1, 2B/Q) for a single constraint whose gradient norm is at least Q on the boundary.
double bound_R_single(double Q, double B);

/// max(1, max_i B X / c_i) for constraints strictly satisfied with margins c_i.
double bound_R_quadratic(const Vector& c, double B, double X_star);

/**
 * Approximate projection of problem.x0 onto {h <= 0}.
 *
 * Runs the cutting-plane engine (or bisection when requested, m = 1) on the
 * dual over [0, R]^m with oracles from approx_dual_oracle, then extracts the
 * primal point at the best dual iterate.
 */
ProjectionResult project(const ProjectionProblem& problem, const SolverConfig& config);

/// project(), doubling R while some lambda_bar_i > boundary_fraction * R.
ProjectionResult project_with_R_doubling(const ProjectionProblem& problem, const SolverConfig& config);

/// {"x_hat", "lambda_bar", "objective", "max_violation", "dual_value", "oracle_calls", "doubling_rounds"}.
nlohmann::ordered_json result_to_json(const ProjectionResult& result);

}  // namespace fastproj

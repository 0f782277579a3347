#include "fastproj/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fastproj/dual_oracle.hpp"
#include "fastproj/errors.hpp"

namespace fastproj {

namespace {

int clamp_iterations(double t) {
  if (!(t >= 1.0)) return 1;
  if (t > 1e9) return 1000000000;
  return static_cast<int>(t);
}

}  // namespace

double theoretical_eps_tilde(double eps, int m, double R, double G) {
  const double mrg = m * R * G;
  return std::min(eps, std::pow(eps, 4) / (256.0 * std::pow(mrg, 6)));
}

double dual_target_accuracy(double eps, int m, double R, double G) {
  const double s = eps / (4.0 * m * R * G);
  return s * s;
}

double r_epsilon(double eps, int m, double G, std::optional<double> H) {
  if (!(eps > 0.0) || !(G > 0.0) || m < 1) throw InputError("r_epsilon: need eps > 0, G > 0, m >= 1");
  double r = std::sqrt(eps) / G;
  if (H) {
    if (!(*H > 0.0)) throw InputError("r_epsilon: H must be positive");
    r = std::min(r, eps / *H);
  }
  return r / (2.0 * m);
}

int ellipsoid_iterations(int m, double R, double r) {
  return clamp_iterations(std::ceil(2.0 * m * (m + 1) * std::log(R / r)));
}

int bisection_iterations(double R, double r) { return clamp_iterations(std::ceil(std::log2(R / r))); }

double bound_R_single(double Q, double B) {
  if (!(Q > 0.0) || !(B > 0.0)) throw InputError("bound_R_single: need Q > 0 and B > 0");
  return std::max(1.0, 2.0 * B / Q);
}

double bound_R_quadratic(const Vector& c, double B, double X_star) {
  if (c.size() == 0 || !(c.array() > 0.0).all()) throw InputError("bound_R_quadratic: all c_i must be positive");
  return std::max(1.0, B * X_star / c.minCoeff());
}

ProjectionResult project(const ProjectionProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();
  const int m = problem.m();
  if (config.engine == Engine::Bisection && m != 1) throw InputError("bisection engine requires m = 1");
  const double G = problem.max_lipschitz();
  if (!(G > 0.0)) throw InputError("problem: constraints must declare a positive Lipschitz bound G");

  ProjectionResult result;
  result.R_final = problem.R;
  result.epsilon_tilde = config.epsilon_tilde_override.value_or(
      theoretical_eps_tilde(config.epsilon, m, problem.R, G));
  const double eps_tilde = result.epsilon_tilde;
  const double eps_bar = std::min(1.0, dual_target_accuracy(config.epsilon, m, problem.R, G));
  const double r = r_epsilon(eps_bar, m, G, problem.H);

  Vector warm;
  auto solve = [&](const Vector& lambda) {
    const Vector* start = (config.warm_start && warm.size() > 0) ? &warm : nullptr;
    OracleTriple o = approx_dual_oracle(problem, lambda, eps_tilde, start);
    ++result.oracle_calls;
    result.inner_gradient_evals += o.inner_gradient_evals;
    if (config.warm_start) warm = o.x_lambda;
    return o;
  };

  Vector lambda_bar;
  if (config.engine == Engine::Bisection) {
    const int T = std::min(config.max_outer_iterations, bisection_iterations(problem.R, r));
    BisectionResult b =
        bisection_maximize([&](double l) { return solve(Vector::Constant(1, l)); }, problem.R, T);
    lambda_bar = Vector::Constant(1, b.lambda_tau);
    result.outer_iterations = b.iterations;
    result.trace = std::move(b.trace);
  } else {
    const int T = std::min(config.max_outer_iterations, ellipsoid_iterations(m, problem.R, r));
    const DualBox box{problem.R, m};
    CuttingPlaneResult c = cutting_plane_maximize(
        [&](const Vector& lambda) {
          OracleTriple o = solve(lambda);
          return DualEstimate{std::move(o.g), o.v};
        },
        [&](const Vector& lambda) { return separation_oracle_box(lambda, problem.R); }, box, T);
    lambda_bar = std::move(c.lambda_bar);
    result.outer_iterations = c.iterations;
    result.trace = std::move(c.trace);
  }

  // Primal extraction is always a fresh solve at lambda_bar.
  const OracleTriple final_oracle = solve(lambda_bar);
  result.lambda_bar = lambda_bar;
  result.x_hat = final_oracle.x_lambda;
  result.dual_value = final_oracle.v;
  result.objective = (result.x_hat - problem.x0).squaredNorm();
  result.max_violation = eval_constraints(problem, result.x_hat).maxCoeff();
  return result;
}

ProjectionResult project_with_R_doubling(const ProjectionProblem& problem, const SolverConfig& config) {
  config.validate();
  ProjectionProblem current = problem;
  long long calls = 0;
  long long evals = 0;
  int outer = 0;
  for (int round = 0;; ++round) {
    ProjectionResult result = project(current, config);
    calls += result.oracle_calls;
    evals += result.inner_gradient_evals;
    outer += result.outer_iterations;
    result.oracle_calls = calls;
    result.inner_gradient_evals = evals;
    result.outer_iterations = outer;
    result.doubling_rounds_used = round;
    const bool near_boundary = (result.lambda_bar.array() > config.boundary_fraction * current.R).any();
    if (!near_boundary) return result;
    if (round >= config.max_doubling_rounds) {
      result.boundary_hit = true;
      result.trace.boundary_hit = true;
      return result;
    }
    current.R *= 2.0;
  }
}

nlohmann::ordered_json result_to_json(const ProjectionResult& result) {
  nlohmann::ordered_json doc;
  doc["x_hat"] = std::vector<double>(result.x_hat.data(), result.x_hat.data() + result.x_hat.size());
  doc["lambda_bar"] =
      std::vector<double>(result.lambda_bar.data(), result.lambda_bar.data() + result.lambda_bar.size());
  doc["objective"] = result.objective;
  doc["max_violation"] = result.max_violation;
  doc["dual_value"] = result.dual_value;
  doc["oracle_calls"] = result.oracle_calls;
  doc["doubling_rounds"] = result.doubling_rounds_used;
  return doc;
}

}  // namespace fastproj

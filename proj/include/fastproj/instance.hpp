#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastproj/model.hpp"

namespace fastproj {

struct QuadraticSpec {
  SymmetricOperator A;
  Vector center;
  double c = 1.0;
};

/// Data-level description of a quadratic projection instance (what the JSON file holds).
struct Instance {
  Vector x0;
  double R = 1.0;
  std::vector<QuadraticSpec> constraints;

  int n() const { return static_cast<int>(x0.size()); }
  int m() const { return static_cast<int>(constraints.size()); }
};

/**
 * rho = |x0| + max_i |center_i| + max_i sqrt(c_i / sigma_min(A_i)) + 1.
 *
 * Bounds |x - center_i| over the convex hull of the feasible set and x0.
 * Throws InputError when some A_i is singular.
 */
double working_radius(const Instance& instance);

/// Builds the oracle-level problem; G of every constraint uses working_radius().
ProjectionProblem to_problem(const Instance& instance);

// JSON: {"n", "m", "x0", "R", "constraints": [{"type":"quadratic", "A", "center", "c"}]}.
// A factored constraint stores "eigenvalues" and "reflectors" in place of "A".
nlohmann::ordered_json instance_to_json(const Instance& instance, bool factored = false);
Instance instance_from_json(const nlohmann::json& doc);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path, bool factored = false);

struct GeneratorOptions {
  int n = 10;
  int m = 2;
  std::uint64_t seed = 1;
  double c_min = 1.0;
  double c_max = 2.0;
  // Householder reflectors in each random rotation; 0 means n.
  int reflectors = 0;
  // Single unit ball: A = I, center 0, c = 1.
  bool unit_ball = false;
  double min_distance = 1.0;
  double max_distance = 3.0;
};

/// Instance with its exact solution, known by construction.
struct GeneratedInstance {
  Instance instance;
  Vector x_star;
  Vector lambda_star;
  double distance = 0.0;
};

/**
 * Random instance: A_i = Q_i diag(s_i) Q_i^T with max s = 1 and s >= 0.05,
 * centers uniform in [-1,1]^n, levels chosen so the mean of the centers is
 * strictly feasible with margin in [c_min, c_max], and x0 placed at distance
 * [min_distance, max_distance] from the feasible set along an outward normal.
 */
GeneratedInstance generate_instance(const GeneratorOptions& options);

}  // namespace fastproj

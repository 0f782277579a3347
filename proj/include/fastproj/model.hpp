#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace fastproj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * One smooth convex constraint h(x) <= 0.
 *
 * `lipschitz_G` bounds |h(x) - h(y)| / |x - y| on the working region (the convex
 * hull of the feasible set and the query point); `smoothness_L` bounds the
 * Lipschitz constant of the gradient on all of R^n. Both callables must be pure.
 */
struct ConstraintOracle {
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> grad;
  double lipschitz_G = 0.0;
  double smoothness_L = 0.0;
  // Input dimension; 0 when the oracle does not declare one.
  int dim = 0;
};

/**
 * Symmetric positive semidefinite linear operator.
 *
 * Either a dense matrix or a diagonal conjugated by a product of Householder
 * reflections, A = H diag(s) H^T with H = H_1 H_2 ... H_k and
 * H_j = I - 2 v_j v_j^T. The factored form applies in O(kn).
 */
class SymmetricOperator {
 public:
  /// Validates symmetry and positive semidefiniteness; throws InputError otherwise.
  static SymmetricOperator dense(Matrix a);
  /// Reflector vectors are normalised on construction; eigenvalues must be >= 0.
  static SymmetricOperator rotated_diagonal(Vector eigenvalues, std::vector<Vector> reflectors);

  int dim() const;
  Vector apply(const Vector& x) const;
  double spectral_norm() const;
  double min_eigenvalue() const;
  Matrix to_dense() const;

  bool is_dense() const;
  const Matrix& dense_matrix() const;
  const Vector& eigenvalues() const;
  const std::vector<Vector>& reflectors() const;

 private:
  struct Impl;
  explicit SymmetricOperator(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Projection of x0 onto {x : h_i(x) <= 0, i = 1..m}, with dual box radius R.
struct ProjectionProblem {
  Vector x0;
  std::vector<ConstraintOracle> constraints;
  double R = 1.0;
  // Optional problem bounds. B: distance from x0 to the feasible set.
  // H: max |h_i| over the feasible set. Neither is needed by the solver.
  std::optional<double> B;
  std::optional<double> H;

  int n() const { return static_cast<int>(x0.size()); }
  int m() const { return static_cast<int>(constraints.size()); }
  double max_lipschitz() const;
  double max_smoothness() const;

  /// Throws InputError when m < 1, n < 1 or R < 1, or when a constraint lacks callables.
  void validate() const;
  ProjectionProblem with_radius(double radius) const;
};

enum class Engine { Ellipsoid, Bisection };

struct SolverConfig {
  double epsilon = 1e-4;
  // Inner accuracy; when empty the guaranteed schedule eps^4 / (256 (m R G)^6) is used.
  std::optional<double> epsilon_tilde_override;
  Engine engine = Engine::Ellipsoid;
  int max_outer_iterations = 5000;
  int max_doubling_rounds = 10;
  bool warm_start = false;
  double boundary_fraction = 0.9;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// (h_1(x), ..., h_m(x)).
Vector eval_constraints(const ProjectionProblem& problem, const Vector& x);

/// |x - x0|^2 + lambda^T h(x). Throws ContractViolation for negative lambda.
double lagrangian_value(const ProjectionProblem& problem, const Vector& x, const Vector& lambda);

/// 2 (x - x0) + sum_i lambda_i grad h_i(x).
Vector lagrangian_gradient(const ProjectionProblem& problem, const Vector& x, const Vector& lambda);

/**
 * h(x) = (x - center)^T A (x - center) - c.
 *
 * L = 2 |A|_2. G = 2 |A|_2 rho, where rho bounds |x - center| over the working
 * region; pass 0 when it is not known yet (G is then left at 0 and filled in by
 * the instance builder).
 */
ConstraintOracle quadratic_constraint(const SymmetricOperator& A, const Vector& center, double c,
                                      double working_radius = 0.0);
ConstraintOracle quadratic_constraint(const Matrix& A, const Vector& center, double c,
                                      double working_radius = 0.0);

}  // namespace fastproj

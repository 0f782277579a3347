#include "fastproj/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "fastproj/errors.hpp"

namespace fastproj {

struct SymmetricOperator::Impl {
  bool dense = true;
  Matrix matrix;
  Vector eigenvalues;
  std::vector<Vector> reflectors;
  double norm = 0.0;
  double min_eig = 0.0;

  Vector apply(const Vector& x) const {
    if (dense) return matrix * x;
    // A x = H_1 ... H_k diag(s) H_k ... H_1 x
    Vector y = x;
    for (const Vector& v : reflectors) y.noalias() -= (2.0 * v.dot(y)) * v;
    y.array() *= eigenvalues.array();
    for (auto it = reflectors.rbegin(); it != reflectors.rend(); ++it) {
      y.noalias() -= (2.0 * it->dot(y)) * (*it);
    }
    return y;
  }
};

SymmetricOperator::SymmetricOperator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

SymmetricOperator SymmetricOperator::dense(Matrix a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw InputError("quadratic constraint: A must be a non-empty square matrix");
  }
  if (!a.allFinite()) throw InputError("quadratic constraint: A has non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InputError("quadratic constraint: A is not symmetric");
  }
  a = 0.5 * (a + a.transpose());

  // PSD test: A + delta I must admit a Cholesky factorization.
  const double delta = 1e-12 * scale;
  Eigen::LLT<Matrix> llt(a + delta * Matrix::Identity(a.rows(), a.cols()));
  if (llt.info() != Eigen::Success) {
    throw InputError("quadratic constraint: A is not positive semidefinite");
  }

  auto impl = std::make_shared<Impl>();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  impl->norm = std::max(std::abs(eig.eigenvalues().minCoeff()), std::abs(eig.eigenvalues().maxCoeff()));
  impl->min_eig = std::max(0.0, eig.eigenvalues().minCoeff());
  impl->matrix = std::move(a);
  impl->dense = true;
  return SymmetricOperator(std::move(impl));
}

SymmetricOperator SymmetricOperator::rotated_diagonal(Vector eigenvalues, std::vector<Vector> reflectors) {
  const auto n = eigenvalues.size();
  if (n == 0) throw InputError("quadratic constraint: empty spectrum");
  if (!eigenvalues.allFinite() || eigenvalues.minCoeff() < 0.0) {
    throw InputError("quadratic constraint: eigenvalues must be finite and nonnegative");
  }
  for (Vector& v : reflectors) {
    if (v.size() != n) throw InputError("quadratic constraint: reflector dimension mismatch");
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InputError("quadratic constraint: reflector must be a finite nonzero vector");
    }
    v /= norm;
  }
  auto impl = std::make_shared<Impl>();
  impl->dense = false;
  impl->norm = eigenvalues.maxCoeff();
  impl->min_eig = eigenvalues.minCoeff();
  impl->eigenvalues = std::move(eigenvalues);
  impl->reflectors = std::move(reflectors);
  return SymmetricOperator(std::move(impl));
}

int SymmetricOperator::dim() const {
  return static_cast<int>(impl_->dense ? impl_->matrix.rows() : impl_->eigenvalues.size());
}
Vector SymmetricOperator::apply(const Vector& x) const { return impl_->apply(x); }
double SymmetricOperator::spectral_norm() const { return impl_->norm; }
double SymmetricOperator::min_eigenvalue() const { return impl_->min_eig; }
bool SymmetricOperator::is_dense() const { return impl_->dense; }
const Matrix& SymmetricOperator::dense_matrix() const { return impl_->matrix; }
const Vector& SymmetricOperator::eigenvalues() const { return impl_->eigenvalues; }
const std::vector<Vector>& SymmetricOperator::reflectors() const { return impl_->reflectors; }

Matrix SymmetricOperator::to_dense() const {
  if (impl_->dense) return impl_->matrix;
  const int n = dim();
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) out.col(j) = impl_->apply(Vector::Unit(n, j));
  return 0.5 * (out + out.transpose());
}

double ProjectionProblem::max_lipschitz() const {
  double g = 0.0;
  for (const auto& c : constraints) g = std::max(g, c.lipschitz_G);
  return g;
}

double ProjectionProblem::max_smoothness() const {
  double l = 0.0;
  for (const auto& c : constraints) l = std::max(l, c.smoothness_L);
  return l;
}

void ProjectionProblem::validate() const {
  if (x0.size() < 1) throw InputError("problem: dimension n must be >= 1");
  if (constraints.empty()) throw InputError("problem: need at least one constraint");
  if (!x0.allFinite()) throw InputError("problem: x0 has non-finite entries");
  if (!(R >= 1.0) || !std::isfinite(R)) throw InputError("problem: dual box radius R must be >= 1");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    if (!c.eval || !c.grad) {
      throw InputError("problem: constraint " + std::to_string(i) + " is missing eval/grad");
    }
    if (c.lipschitz_G < 0.0 || c.smoothness_L < 0.0) {
      throw InputError("problem: constraint " + std::to_string(i) + " has negative G or L");
    }
    if (c.dim != 0 && c.dim != n()) {
      throw InputError("problem: constraint " + std::to_string(i) + " has dimension " + std::to_string(c.dim) +
                       ", expected n = " + std::to_string(n()));
    }
  }
}

ProjectionProblem ProjectionProblem::with_radius(double radius) const {
  ProjectionProblem copy = *this;
  copy.R = radius;
  return copy;
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw InputError("config: epsilon must be positive");
  if (epsilon_tilde_override) {
    if (!(*epsilon_tilde_override > 0.0)) throw InputError("config: eps-tilde must be positive");
    if (*epsilon_tilde_override > epsilon) throw InputError("config: eps-tilde must not exceed epsilon");
  }
  if (max_outer_iterations < 1) throw InputError("config: max_outer_iterations must be >= 1");
  if (max_doubling_rounds < 0) throw InputError("config: max_doubling_rounds must be >= 0");
  if (!(boundary_fraction > 0.0 && boundary_fraction < 1.0)) {
    throw InputError("config: boundary_fraction must lie in (0, 1)");
  }
}

namespace {

void check_point(const ProjectionProblem& problem, const Vector& x) {
  if (x.size() != problem.x0.size()) {
    throw InputError("point has dimension " + std::to_string(x.size()) + ", expected " +
                     std::to_string(problem.x0.size()));
  }
}

void check_multipliers(const ProjectionProblem& problem, const Vector& lambda) {
  if (lambda.size() != problem.m()) {
    throw InputError("multiplier vector has length " + std::to_string(lambda.size()) + ", expected " +
                     std::to_string(problem.m()));
  }
  if ((lambda.array() < 0.0).any()) throw ContractViolation("multipliers must be nonnegative");
}

}  // namespace

Vector eval_constraints(const ProjectionProblem& problem, const Vector& x) {
  check_point(problem, x);
  Vector h(problem.m());
  for (int i = 0; i < problem.m(); ++i) h[i] = problem.constraints[i].eval(x);
  return h;
}

double lagrangian_value(const ProjectionProblem& problem, const Vector& x, const Vector& lambda) {
  check_multipliers(problem, lambda);
  check_point(problem, x);
  double value = (x - problem.x0).squaredNorm();
  for (int i = 0; i < problem.m(); ++i) {
    if (lambda[i] != 0.0) value += lambda[i] * problem.constraints[i].eval(x);
  }
  return value;
}

Vector lagrangian_gradient(const ProjectionProblem& problem, const Vector& x, const Vector& lambda) {
  check_multipliers(problem, lambda);
  check_point(problem, x);
  Vector g = 2.0 * (x - problem.x0);
  for (int i = 0; i < problem.m(); ++i) {
    if (lambda[i] != 0.0) g.noalias() += lambda[i] * problem.constraints[i].grad(x);
  }
  return g;
}

ConstraintOracle quadratic_constraint(const SymmetricOperator& A, const Vector& center, double c,
                                      double working_radius) {
  if (center.size() != A.dim()) throw InputError("quadratic constraint: center/A dimension mismatch");
  if (!(c > 0.0)) throw InputError("quadratic constraint: level c must be positive");
  if (working_radius < 0.0) throw InputError("quadratic constraint: working radius must be >= 0");

  ConstraintOracle oracle;
  oracle.eval = [A, center, c](const Vector& x) {
    const Vector d = x - center;
    return d.dot(A.apply(d)) - c;
  };
  oracle.grad = [A, center](const Vector& x) -> Vector { return 2.0 * A.apply(x - center); };
  oracle.smoothness_L = 2.0 * A.spectral_norm();
  oracle.lipschitz_G = 2.0 * A.spectral_norm() * working_radius;
  oracle.dim = A.dim();
  return oracle;
}

ConstraintOracle quadratic_constraint(const Matrix& A, const Vector& center, double c,
                                      double working_radius) {
  return quadratic_constraint(SymmetricOperator::dense(A), center, c, working_radius);
}

}  // namespace fastproj

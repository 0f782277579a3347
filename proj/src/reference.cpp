#include "fastproj/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>

#include "fastproj/dual_oracle.hpp"
#include "fastproj/errors.hpp"

namespace fastproj {

Vector project_l2_ball(const Vector& x0) {
  const double norm = x0.norm();
  return norm <= 1.0 ? x0 : Vector(x0 / norm);
}

Vector project_linf_box(const Vector& x0) { return x0.cwiseMax(-1.0).cwiseMin(1.0); }

Vector project_l1_ball(const Vector& x0) {
  if (x0.lpNorm<1>() <= 1.0) return x0;
  std::vector<double> u(x0.size());
  for (Eigen::Index i = 0; i < x0.size(); ++i) u[i] = std::abs(x0[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumsum += u[k];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[k] > t) theta = t;
  }
  Vector out(x0.size());
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    const double a = std::max(std::abs(x0[i]) - theta, 0.0);
    out[i] = x0[i] < 0.0 ? -a : a;
  }
  return out;
}

NormKind parse_norm(const std::string& name) {
  if (name == "l1") return NormKind::L1;
  if (name == "l2") return NormKind::L2;
  if (name == "linf") return NormKind::Linf;
  throw InputError("unknown norm '" + name + "' (expected l1, l2 or linf)");
}

std::string norm_name(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
  }
  return "";
}

double norm_value(NormKind kind, const Vector& x) {
  switch (kind) {
    case NormKind::L1: return x.lpNorm<1>();
    case NormKind::L2: return x.norm();
    case NormKind::Linf: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

Vector project_norm_ball(NormKind kind, const Vector& x0) {
  switch (kind) {
    case NormKind::L1: return project_l1_ball(x0);
    case NormKind::L2: return project_l2_ball(x0);
    case NormKind::Linf: return project_linf_box(x0);
  }
  return x0;
}

DualBallProjector dual_ball_projector(NormKind kind) {
  DualBallProjector p;
  p.primal_norm = [kind](const Vector& x) { return norm_value(kind, x); };
  switch (kind) {
    case NormKind::L1: p.project = project_linf_box; break;
    case NormKind::L2: p.project = project_l2_ball; break;
    case NormKind::Linf: p.project = project_l1_ball; break;
  }
  return p;
}

BallProjection ball_projection_closed_form(const Vector& x0, const Vector& center, double radius) {
  if (!(radius > 0.0)) throw InputError("ball projection: radius must be positive");
  if (x0.size() != center.size()) throw InputError("ball projection: dimension mismatch");
  const Vector d = x0 - center;
  const double dist = d.norm();
  if (dist < radius) throw ContractViolation("ball projection: x0 must lie outside the open ball");
  return {center + (radius / dist) * d, (dist - radius) / radius};
}

namespace {

struct Incumbent {
  Vector lambda;
  double value = -std::numeric_limits<double>::infinity();
};

// Scans lo + k * step for k = 0..resolution-1 per axis (clipped to [0, R]) in
// lexicographic order; strictly better values replace the incumbent.
void scan(const std::function<double(const Vector&)>& d, int m, double R, const Vector& lo, double step,
          int resolution, Incumbent& best) {
  Vector lambda(m);
  if (m == 1) {
    for (int i = 0; i < resolution; ++i) {
      lambda[0] = std::clamp(lo[0] + i * step, 0.0, R);
      const double v = d(lambda);
      if (v > best.value) best = {lambda, v};
    }
    return;
  }
  for (int i = 0; i < resolution; ++i) {
    lambda[0] = std::clamp(lo[0] + i * step, 0.0, R);
    for (int j = 0; j < resolution; ++j) {
      lambda[1] = std::clamp(lo[1] + j * step, 0.0, R);
      const double v = d(lambda);
      if (v > best.value) best = {lambda, v};
    }
  }
}

GridResult grid_search(const std::function<double(const Vector&)>& d, int m, double R, const GridSpec& spec) {
  if (m > 2) throw InputError("dual grid: only m <= 2 is supported (got m = " + std::to_string(m) + ")");
  if (m < 1) throw InputError("dual grid: m must be >= 1");
  if (spec.resolution < 2) throw InputError("dual grid: resolution must be >= 2");
  if (spec.refinements < 0) throw InputError("dual grid: refinements must be >= 0");
  GridResult out;
  Incumbent best;
  double step = R / (spec.resolution - 1);
  scan(d, m, R, Vector::Zero(m), step, spec.resolution, best);
  out.pass_values.push_back(best.value);
  for (int pass = 0; pass < spec.refinements; ++pass) {
    const Vector lo = best.lambda.array() - step;
    const double fine = 2.0 * step / (spec.resolution - 1);
    scan(d, m, R, lo, fine, spec.resolution, best);
    step = fine;
    out.pass_values.push_back(best.value);
  }
  out.lambda_ref = best.lambda;
  out.dual_value_ref = best.value;
  return out;
}

}  // namespace

double exact_quadratic_dual(const Instance& instance, const Vector& lambda, Vector* x_out) {
  const int n = instance.n();
  if (lambda.size() != instance.m()) throw InputError("exact dual: lambda must have length m");
  if ((lambda.array() < 0.0).any()) throw ContractViolation("exact dual: lambda must be nonnegative");
  Matrix K = Matrix::Identity(n, n);
  Vector rhs = instance.x0;
  for (int i = 0; i < instance.m(); ++i) {
    if (lambda[i] == 0.0) continue;
    const auto& q = instance.constraints[i];
    const Matrix a = q.A.to_dense();
    K += lambda[i] * a;
    rhs += lambda[i] * (a * q.center);
  }
  const Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) throw NumericalFailure("exact dual: factorization failed", lambda);
  const Vector x = llt.solve(rhs);
  double value = (x - instance.x0).squaredNorm();
  for (int i = 0; i < instance.m(); ++i) {
    if (lambda[i] == 0.0) continue;
    const auto& q = instance.constraints[i];
    const Vector dx = x - q.center;
    value += lambda[i] * (dx.dot(q.A.apply(dx)) - q.c);
  }
  if (x_out) *x_out = x;
  return value;
}

GridResult brute_force_dual_grid(const ProjectionProblem& problem, const GridSpec& spec) {
  problem.validate();
  GridResult out = grid_search([&](const Vector& l) { return dual_value_highacc(problem, l, spec.eps_ref); },
                               problem.m(), problem.R, spec);
  out.x_ref = approx_dual_oracle(problem, out.lambda_ref, spec.eps_ref).x_lambda;
  return out;
}

GridResult brute_force_dual_grid(const Instance& instance, const GridSpec& spec) {
  if (instance.constraints.empty()) throw InputError("dual grid: instance has no constraints");
  // Dense copies once; the search performs resolution^m solves per pass.
  std::vector<Matrix> a;
  std::vector<Vector> ac;
  for (const auto& q : instance.constraints) {
    a.push_back(q.A.to_dense());
    ac.push_back(a.back() * q.center);
  }
  const int n = instance.n();
  auto solve = [&](const Vector& lambda, Vector* x_out) {
    Matrix K = Matrix::Identity(n, n);
    Vector rhs = instance.x0;
    for (int i = 0; i < instance.m(); ++i) {
      K += lambda[i] * a[i];
      rhs += lambda[i] * ac[i];
    }
    const Eigen::LLT<Matrix> llt(K);
    const Vector x = llt.solve(rhs);
    double value = (x - instance.x0).squaredNorm();
    for (int i = 0; i < instance.m(); ++i) {
      const Vector dx = x - instance.constraints[i].center;
      value += lambda[i] * (dx.dot(a[i] * dx) - instance.constraints[i].c);
    }
    if (x_out) *x_out = x;
    return value;
  };
  GridResult out = grid_search([&](const Vector& l) { return solve(l, nullptr); }, instance.m(), instance.R, spec);
  solve(out.lambda_ref, &out.x_ref);
  return out;
}

}  // namespace fastproj

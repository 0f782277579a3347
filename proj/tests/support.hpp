#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/QR>

#include "fastproj/model.hpp"

namespace fastproj::testing {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Vector gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random symmetric positive definite matrix with spectrum in [lo, hi] (max exactly hi).
inline Matrix random_spd(std::mt19937_64& rng, int n, double lo = 0.05, double hi = 1.0) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) g.col(i) = gaussian(rng, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  Vector s(n);
  s[0] = hi;
  for (int i = 1; i < n; ++i) s[i] = uniform(rng, lo, hi);
  Matrix a = q * s.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

/// {|x - center|^2 <= radius^2} as h(x) = |x - center|^2 - radius^2, G valid on |x - center| <= rho.
inline ConstraintOracle ball_constraint(const Vector& center, double radius, double rho) {
  const int n = static_cast<int>(center.size());
  return quadratic_constraint(Matrix(Matrix::Identity(n, n)), center, radius * radius, rho);
}

/// Projection of x0 onto the unit ball centred at 0.
inline ProjectionProblem unit_ball_problem(const Vector& x0, double R = 1.0) {
  ProjectionProblem p;
  p.x0 = x0;
  p.R = R;
  p.constraints.push_back(ball_constraint(Vector::Zero(x0.size()), 1.0, x0.norm() + 2.0));
  return p;
}

// Closed forms for h(x) = |x|^2 - 1.
inline Vector ball_x_lambda(const Vector& x0, double lambda) { return x0 / (1.0 + lambda); }
inline double ball_dual(const Vector& x0, double lambda) {
  return lambda * x0.squaredNorm() / (1.0 + lambda) - lambda;
}
inline double ball_dual_grad(const Vector& x0, double lambda) {
  return x0.squaredNorm() / ((1.0 + lambda) * (1.0 + lambda)) - 1.0;
}

/// Central-difference gradient of f at x.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double step) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector a = x;
    Vector b = x;
    a[i] += step;
    b[i] -= step;
    g[i] = (f(a) - f(b)) / (2.0 * step);
  }
  return g;
}

/// Largest eigenvalue of a symmetric PSD operator by power iteration.
inline double power_iteration(const std::function<Vector(const Vector&)>& apply, int n, int iterations,
                              std::uint64_t seed = 11) {
  std::mt19937_64 rng(seed);
  Vector v = gaussian(rng, n).normalized();
  double estimate = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const Vector w = apply(v);
    estimate = v.dot(w);
    v = w.normalized();
  }
  return estimate;
}

}  // namespace fastproj::testing

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fastproj/dual_oracle.hpp"
#include "fastproj/model.hpp"

namespace fastproj {

/// The dual box [0, R]^m.
struct DualBox {
  double R = 1.0;
  int m = 1;

  Vector center() const { return Vector::Constant(m, 0.5 * R); }
  bool contains(const Vector& lambda) const;
};

/// {center + u : u^T Q^{-1} u <= 1}, Q = shape.
struct EllipsoidState {
  Vector center;
  Matrix shape;
  // log Vol(M_t) - log Vol(M_1).
  double log_volume_offset = 0.0;
  long long updates = 0;

  /// Ball around the box center through the box corners: Q = (m R^2 / 4) I.
  static EllipsoidState enclosing(const DualBox& box);
};

/// log of Vol(M') / Vol(M) for one central cut in dimension m; 1/2 for m = 1.
double central_cut_log_volume_factor(int m);

/**
 * Central cut through cut_point (the current center): keeps {lambda : w^T (lambda - c) <= 0}.
 *
 * m >= 2: w_hat = Q w / sqrt(w^T Q w), c' = c - w_hat / (m+1),
 *         Q' = m^2 / (m^2 - 1) (Q - 2/(m+1) w_hat w_hat^T).
 * m = 1:  the interval is halved.
 *
 * Throws NumericalFailure when w^T Q w <= 0 or the shape stops being positive definite.
 */
EllipsoidState ellipsoid_update(const EllipsoidState& state, const Vector& w, const Vector& cut_point);

/// w_i = 1 if lambda_i > R, -1 if lambda_i < 0, else 0. Throws ContractViolation for lambda in the box.
Vector separation_oracle_box(const Vector& lambda, double R);

struct CutRecord {
  int t = 0;
  bool in_box = false;
  Vector lambda;
  Vector w;
  double v = 0.0;  // NaN outside the box
  double grad_norm = 0.0;
  double log_volume = 0.0;  // after the cut
};

struct CutTrace {
  std::vector<CutRecord> records;
  // Stopped because an in-box gradient estimate was exactly zero.
  bool zero_gradient_stop = false;
  // Stopped because the localizer degenerated numerically; best-so-far was returned.
  bool degenerate_stop = false;
  // Set by the doubling driver when its last result still sat on the box boundary.
  bool boundary_hit = false;
};

/// Header t,in_box,lambda_1..lambda_m,v,grad_norm,log_volume.
void write_trace_csv(const CutTrace& trace, int m, std::ostream& out);
std::string trace_csv(const CutTrace& trace, int m);

/// One dual query: g approximates grad d(lambda), v approximates d(lambda).
struct DualEstimate {
  Vector g;
  double v = 0.0;
};

using DualEstimateOracle = std::function<DualEstimate(const Vector&)>;
using SeparationOracle = std::function<Vector(const Vector&)>;

struct CuttingPlaneResult {
  Vector lambda_bar;
  double v_bar = 0.0;
  int best_iteration = 0;  // 1-based
  int iterations = 0;
  CutTrace trace;
};

/**
 * Maximizes a concave d over the box with approximate oracles and the ellipsoid
 * localizer. Each round queries the ellipsoid center lambda_t: inside the box it
 * cuts with w = -g, outside with the separation oracle. Returns the in-box
 * query with the largest v (earliest on ties).
 */
CuttingPlaneResult cutting_plane_maximize(const DualEstimateOracle& oracle, const SeparationOracle& separation,
                                          const DualBox& box, int T);

struct BisectionResult {
  Vector x_tau;
  double lambda_tau = 0.0;
  double v_tau = 0.0;
  int iterations = 0;
  CutTrace trace;
};

/**
 * m = 1: halves [0, R] T times at the midpoint, keeping the side the sign of g
 * points to. Returns the query with the largest v (earliest on ties).
 */
BisectionResult bisection_maximize(const std::function<OracleTriple(double)>& oracle, double R, int T);

}  // namespace fastproj

#include "fastproj/norm_duality.hpp"

#include <algorithm>
#include <cmath>

#include "fastproj/cutting_plane.hpp"
#include "fastproj/errors.hpp"

namespace fastproj {

OracleTriple exact_dual_norm_oracle(const Vector& x0, double lambda, const DualBallProjector& pi_star) {
  if (!(lambda > 0.0)) throw ContractViolation("norm dual oracle: lambda must be positive");
  if (!pi_star.project) throw InputError("norm dual oracle: missing dual-ball projector");
  const Vector z = (2.0 / lambda) * x0;
  const Vector y = pi_star.project(z);
  if (y.size() != x0.size()) throw InputError("norm dual oracle: projector returned wrong length");
  const Vector diff = y - z;
  const double gap = diff.squaredNorm();

  OracleTriple o;
  o.x_lambda = x0 - (0.5 * lambda) * y;
  o.v = -lambda + x0.squaredNorm() - 0.25 * lambda * lambda * gap;
  o.g = Vector::Constant(1, -1.0 - 0.5 * lambda * gap - diff.dot(x0));
  o.certified = true;
  return o;
}

int norm_bisection_budget(double R, double x0_norm, double eps) {
  return static_cast<int>(std::ceil(std::log2(R * std::max(1.0, x0_norm) / eps))) + 2;
}

NormProjection project_norm_ball_via_dual(const Vector& x0, const DualBallProjector& pi_star, double R,
                                          double eps) {
  if (!pi_star.project || !pi_star.primal_norm) throw InputError("norm projection: incomplete projector");
  if (!(R > 0.0) || !(eps > 0.0)) throw InputError("norm projection: need R > 0 and eps > 0");
  NormProjection out;
  out.R = R;
  out.call_budget = norm_bisection_budget(R, x0.norm(), eps);
  if (pi_star.primal_norm(x0) <= 1.0) {
    out.x = x0;
    out.interior = true;
    return out;
  }

  int calls = 0;
  DualBallProjector counted{[&](const Vector& z) {
                              ++calls;
                              return pi_star.project(z);
                            },
                            pi_star.primal_norm};
  BisectionResult b = bisection_maximize(
      [&](double lambda) { return exact_dual_norm_oracle(x0, lambda, counted); }, R, out.call_budget);
  out.x = std::move(b.x_tau);
  out.lambda = b.lambda_tau;
  out.oracle_calls = calls;
  return out;
}

NormProjection project_norm_ball_via_dual_auto(const Vector& x0, const DualBallProjector& pi_star, double eps,
                                               int max_doubling_rounds, double boundary_fraction) {
  double R = std::max(1.0, 2.0 * x0.norm());
  for (int round = 0;; ++round) {
    NormProjection p = project_norm_ball_via_dual(x0, pi_star, R, eps);
    p.doubling_rounds = round;
    if (p.interior || p.lambda <= boundary_fraction * R || round >= max_doubling_rounds) return p;
    R *= 2.0;
  }
}

}  // namespace fastproj

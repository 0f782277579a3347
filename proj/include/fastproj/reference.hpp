#pragma once

#include <string>
#include <vector>

#include "fastproj/instance.hpp"
#include "fastproj/model.hpp"
#include "fastproj/norm_duality.hpp"

namespace fastproj {

/// Closed-form projections onto unit balls.
Vector project_l2_ball(const Vector& x0);
Vector project_linf_box(const Vector& x0);
/// Sort-and-threshold projection onto {x : |x|_1 <= 1}.
Vector project_l1_ball(const Vector& x0);

enum class NormKind { L1, L2, Linf };

NormKind parse_norm(const std::string& name);
std::string norm_name(NormKind kind);
double norm_value(NormKind kind, const Vector& x);
/// Direct projection onto the unit ball of the given norm.
Vector project_norm_ball(NormKind kind, const Vector& x0);
/// Projector onto the unit ball of the dual norm of `kind`, with P = norm `kind`.
DualBallProjector dual_ball_projector(NormKind kind);

struct BallProjection {
  Vector x_star;
  double lambda_star = 0.0;
};

/// Projection onto {|x - center| <= radius} and the multiplier of |x - center|^2 - radius^2 <= 0.
BallProjection ball_projection_closed_form(const Vector& x0, const Vector& center, double radius);

struct GridSpec {
  int resolution = 200;
  double eps_ref = 1e-14;
  int refinements = 2;
};

struct GridResult {
  Vector x_ref;
  Vector lambda_ref;
  double dual_value_ref = 0.0;
  // Best dual value after the coarse pass and after each refinement.
  std::vector<double> pass_values;
};

/**
 * Maximizes d over a grid on [0, R]^m (m <= 2), then refines twice on a grid of
 * the same resolution spanning one pitch around the incumbent. Throws InputError for m > 2.
 * This overload evaluates d with dual_value_highacc.
 */
GridResult brute_force_dual_grid(const ProjectionProblem& problem, const GridSpec& spec);

/// Same search with d evaluated exactly by a dense linear solve; for quadratic instances.
GridResult brute_force_dual_grid(const Instance& instance, const GridSpec& spec);

/// d(lambda) for a quadratic instance from (I + sum lambda_i A_i) x = x0 + sum lambda_i A_i center_i.
double exact_quadratic_dual(const Instance& instance, const Vector& lambda, Vector* x_out = nullptr);

}  // namespace fastproj

#include "fastproj/agd.hpp"

#include <cmath>
#include <limits>

#include "fastproj/errors.hpp"

namespace fastproj {

namespace {

void check_objective(const SmoothObjective& f) {
  if (!f.gradient) throw InputError("agd: objective has no gradient");
  if (!(f.alpha > 0.0) || !(f.beta >= f.alpha)) throw InputError("agd: need beta >= alpha > 0");
}

}  // namespace

Vector agd_minimize(const SmoothObjective& objective, const Vector& x_init, int iterations) {
  check_objective(objective);
  if (iterations < 1) throw InputError("agd: iterations must be >= 1");
  const double sqrt_kappa = std::sqrt(objective.beta / objective.alpha);
  const double q = (sqrt_kappa - 1.0) / (sqrt_kappa + 1.0);
  const double step = 1.0 / objective.beta;

  Vector x = x_init;
  Vector y = x_init;
  Vector y_next(x_init.size());
  for (int t = 0; t < iterations; ++t) {
    const Vector g = objective.gradient(x);
    if (!g.allFinite()) throw NumericalFailure("agd: non-finite gradient at iteration " + std::to_string(t), x);
    y_next = x - step * g;
    x = (1.0 + q) * y_next - q * y;
    y.swap(y_next);
    if (!x.allFinite()) throw NumericalFailure("agd: non-finite iterate at iteration " + std::to_string(t), y);
  }
  return y;
}

int agd_iterations(double alpha, double beta, double dist_sq_bound, double eps_tilde) {
  if (!(alpha > 0.0) || !(beta >= alpha) || !(dist_sq_bound > 0.0) || !(eps_tilde > 0.0)) {
    throw InputError("agd_iterations: need beta >= alpha > 0 and positive distance bound and accuracy");
  }
  const double t = std::ceil(std::sqrt(beta / alpha) * std::log(beta * dist_sq_bound / eps_tilde));
  if (!(t >= 1.0)) return 1;
  if (t > static_cast<double>(std::numeric_limits<int>::max() / 2)) return std::numeric_limits<int>::max() / 2;
  return static_cast<int>(t);
}

}  // namespace fastproj

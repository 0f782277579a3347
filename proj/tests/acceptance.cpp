// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "../tools/commands.hpp"
#include "fastproj/cutting_plane.hpp"
#include "fastproj/dual_oracle.hpp"
#include "fastproj/instance.hpp"
#include "fastproj/norm_duality.hpp"
#include "fastproj/projector.hpp"
#include "fastproj/reference.hpp"
#include "support.hpp"

using namespace fastproj;
using namespace fastproj::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Unit ball: objective within 6 eps of the closed form, violation <= eps, under 5 s.
Verdict ball_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  const double eps = 1e-4;
  int failures = 0;
  double worst_gap = 0.0;
  double worst_violation = -1.0;
  for (int n : {2, 10, 100}) {
    for (int k = 0; k < 20; ++k) {
      const Vector x0 = uniform(rng, 1.1, 6.0) * gaussian(rng, n).normalized();
      const BallProjection exact = ball_projection_closed_form(x0, Vector::Zero(n), 1.0);
      ProjectionProblem p = unit_ball_problem(x0);
      p.R = bound_R_single(2.0, x0.norm() - 1.0);
      SolverConfig config;
      config.epsilon = eps;
      const ProjectionResult r = project(p, config);
      const double gap = std::abs(r.objective - (exact.x_star - x0).squaredNorm());
      worst_gap = std::max(worst_gap, gap);
      worst_violation = std::max(worst_violation, r.max_violation);
      if (gap > 6.0 * eps || r.max_violation > eps) ++failures;
    }
  }
  const double t = seconds_since(start);
  return {failures == 0 && t < 5.0, std::to_string(failures) + "/60 failures, worst gap " + fmt("%.3g", worst_gap) +
                                        ", worst violation " + fmt("%.3g", worst_violation) + ", " + fmt("%.2f", t) +
                                        " s (limit 5 s)"};
}

// 2. m = 2, n = 20, 20 seeds against the brute-force dual grid, under 60 s.
Verdict grid_equivalence() {
  const auto start = Clock::now();
  const double eps = 1e-3;
  int failures = 0;
  double worst_excess = -1e300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorOptions o;
    o.n = 20;
    o.m = 2;
    o.seed = seed;
    const GeneratedInstance gen = generate_instance(o);
    const GridResult grid = brute_force_dual_grid(gen.instance, GridSpec{200, 1e-14, 2});
    SolverConfig config;
    config.epsilon = eps;
    const ProjectionResult r = project(to_problem(gen.instance), config);
    const double excess = r.objective - grid.dual_value_ref;
    worst_excess = std::max(worst_excess, excess);
    if (excess > 6.0 * eps || r.max_violation > eps) ++failures;
  }
  const double t = seconds_since(start);
  return {failures == 0 && t < 60.0, std::to_string(failures) + "/20 failures, worst objective - reference " +
                                         fmt("%.3g", worst_excess) + " (limit 6e-3), " + fmt("%.2f", t) +
                                         " s (limit 60 s)"};
}

// 3. Oracle accuracy against closed-form minimizers on balls.
Verdict oracle_accuracy() {
  std::mt19937_64 rng(103);
  int violations = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 9;
    const Vector x0 = uniform(rng, 1.2, 6.0) * gaussian(rng, n).normalized();
    const ProjectionProblem p = unit_ball_problem(x0, 8.0);
    const double lambda = uniform(rng, 0.0, 8.0);
    const double eps_tilde = std::pow(10.0, uniform(rng, -12.0, -2.0));
    const OracleTriple o = approx_dual_oracle(p, vec({lambda}), eps_tilde);
    const double G = p.max_lipschitz();
    if ((o.x_lambda - ball_x_lambda(x0, lambda)).squaredNorm() > eps_tilde) ++violations;
    if (std::abs(o.v - ball_dual(x0, lambda)) > eps_tilde) ++violations;
    if (std::abs(o.g[0] - ball_dual_grad(x0, lambda)) > std::sqrt(G * G * eps_tilde)) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations over 50 (lambda, eps_tilde) pairs"};
}

// 4. Dual gradient against finite differences of the exact dual, and smoothness <= m G^2.
Verdict dual_gradient() {
  GeneratorOptions o;
  o.n = 10;
  o.m = 2;
  o.seed = 7;
  const GeneratedInstance gen = generate_instance(o);
  const ProjectionProblem p = to_problem(gen.instance);
  const double G = p.max_lipschitz();
  const double R = gen.instance.R;
  std::mt19937_64 rng(104);
  auto exact = [&](const Vector& l) { return exact_quadratic_dual(gen.instance, l); };
  int violations = 0;
  double worst_rel = 0.0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Vector a = vec({uniform(rng, 0.01, R), uniform(rng, 0.01, R)});
    const Vector b = vec({uniform(rng, 0.01, R), uniform(rng, 0.01, R)});
    const OracleTriple oa = approx_dual_oracle(p, a, 1e-14);
    const OracleTriple ob = approx_dual_oracle(p, b, 1e-14);
    const Vector fd = fd_gradient(exact, a, 1e-5 * std::max(1.0, a.norm()));
    const double rel = (oa.g - fd).norm() / std::max(fd.norm(), 1e-12);
    const double ratio = (oa.g - ob.g).norm() / (a - b).norm();
    worst_rel = std::max(worst_rel, rel);
    worst_ratio = std::max(worst_ratio, ratio / (2.0 * G * G));
    if (rel > 1e-4) ++violations;
    if (ratio > 2.0 * G * G) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations, worst relative error " + fmt("%.3g", worst_rel) +
                               ", worst smoothness ratio / mG^2 " + fmt("%.3g", worst_ratio)};
}

// 5. Ellipsoid: per-cut log-volume factor, total decrease, Monte-Carlo containment.
Verdict ellipsoid_engine() {
  std::mt19937_64 rng(105);
  int factor_misses = 0;
  int escapes = 0;
  int total_misses = 0;
  double worst_factor_err = 0.0;
  for (int m : {2, 3}) {
    const double R = 4.0;
    const DualBox box{R, m};
    const Vector target = Vector::Constant(m, 1.1);
    EllipsoidState s = EllipsoidState::enclosing(box);
    const int T = 30;
    double total = 0.0;
    for (int t = 0; t < T; ++t) {
      const Vector w = box.contains(s.center) ? Vector(2.0 * (s.center - target) + 0.05 * gaussian(rng, m))
                                              : separation_oracle_box(s.center, R);
      const EllipsoidState next = ellipsoid_update(s, w, s.center);
      const Eigen::LLT<Matrix> before(s.shape);
      const Eigen::LLT<Matrix> after(next.shape);
      const double change = after.matrixL().toDenseMatrix().diagonal().array().log().sum() -
                            before.matrixL().toDenseMatrix().diagonal().array().log().sum();
      const double err = std::abs(change - central_cut_log_volume_factor(m));
      worst_factor_err = std::max(worst_factor_err, err);
      if (err > 1e-10) ++factor_misses;
      total += change;
      // Uniform samples of the kept half of the old ellipsoid must lie in the new one.
      const Eigen::LDLT<Matrix> next_inv(next.shape);
      for (int k = 0; k < 10000; ++k) {
        const Vector dir = gaussian(rng, m).normalized();
        const Vector p = s.center + before.matrixL() * (std::pow(uniform(rng, 0.0, 1.0), 1.0 / m) * dir);
        if (w.dot(p - s.center) > 0.0) continue;
        const Vector u = p - next.center;
        if (u.dot(next_inv.solve(u)) > 1.0 + 1e-9) ++escapes;
      }
      s = next;
    }
    if (-total < T / (2.0 * (m + 1))) ++total_misses;
  }
  return {factor_misses == 0 && escapes == 0 && total_misses == 0,
          std::to_string(factor_misses) + " factor misses (worst " + fmt("%.3g", worst_factor_err) + "), " +
              std::to_string(total_misses) + " total-decrease misses, " + std::to_string(escapes) + " escapes"};
}

// 6. Noisy oracles at exactly eps_g = eps/(R sqrt m), eps_v = eps: value gap <= 4 eps.
Verdict noisy_cutting_plane() {
  std::mt19937_64 rng(106);
  const int m = 2;
  int passes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double R = uniform(rng, 1.0, 10.0);
    const double eps = std::pow(10.0, -uniform(rng, 2.0, 5.0));
    const Matrix H = random_spd(rng, m, 0.1, uniform(rng, 0.5, 3.0));
    const Vector center = vec({uniform(rng, -0.5 * R, 1.5 * R), uniform(rng, -0.5 * R, 1.5 * R)});
    auto d = [&](const Vector& l) { return -(l - center).dot(H * (l - center)); };
    const double eps_g = eps / (R * std::sqrt(static_cast<double>(m)));
    DualEstimateOracle noisy = [&](const Vector& l) {
      const Vector g = -2.0 * H * (l - center) + eps_g * gaussian(rng, m).normalized();
      return DualEstimate{g, d(l) + (uniform(rng, 0.0, 1.0) < 0.5 ? -eps : eps)};
    };
    // Gradient bound and square-root smoothness of d over the box.
    const double grad_bound = 2.0 * H.norm() * (2.0 * R) * std::sqrt(static_cast<double>(m));
    const double root_smooth = std::sqrt(2.0 * H.norm());
    const int T = ellipsoid_iterations(m, R, r_epsilon(eps, m, root_smooth, grad_bound));
    const CuttingPlaneResult res = cutting_plane_maximize(
        noisy, [R](const Vector& l) { return separation_oracle_box(l, R); }, DualBox{R, m}, T);
    Vector best = Vector::Constant(m, 0.5 * R);
    const double step = 1.0 / (2.0 * H.norm());
    for (int it = 0; it < 20000; ++it) best = (best - step * 2.0 * H * (best - center)).cwiseMax(0.0).cwiseMin(R);
    if (d(best) - d(res.lambda_bar) <= 4.0 * eps) ++passes;
  }
  return {passes == 50, std::to_string(passes) + "/50 trials within 4 eps"};
}

// 7. Norm-ball projection through dual-ball projectors.
Verdict norm_duality() {
  std::mt19937_64 rng(107);
  const double eps = 1e-10;
  int mismatches = 0;
  int over_budget = 0;
  double worst = 0.0;
  for (NormKind kind : {NormKind::L1, NormKind::Linf, NormKind::L2}) {
    const DualBallProjector pi = dual_ball_projector(kind);
    for (int k = 0; k < 100; ++k) {
      const Vector x0 = uniform(rng, 0.0, 10.0) * gaussian(rng, 50).normalized();
      const NormProjection p = project_norm_ball_via_dual_auto(x0, pi, eps);
      const double err = (p.x - project_norm_ball(kind, x0)).norm();
      worst = std::max(worst, err);
      if (err > 1e-6) ++mismatches;
      const int budget = static_cast<int>(std::ceil(std::log2(p.R * std::max(1.0, x0.norm()) / eps))) + 2;
      if (p.oracle_calls > budget) ++over_budget;
    }
  }
  return {mismatches == 0 && over_budget == 0,
          std::to_string(mismatches) + "/300 mismatches (worst " + fmt("%.3g", worst) + "), " +
              std::to_string(over_budget) + " over the call budget"};
}

// 8. Wall time linear in n.
Verdict linear_scaling() {
  cli::BenchOptions o;
  o.n_list = {256, 512, 1024, 2048, 4096};
  o.m = 2;
  o.eps = 1e-3;
  o.repeats = 5;
  const std::vector<cli::BenchRecord> records = cli::run_bench(o);
  std::map<int, std::vector<double>> times;
  for (const auto& r : records) times[r.n].push_back(r.wall_time_seconds);
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double ratio = median(times[4096]) / median(times[512]);
  const double slope = cli::loglog_slope(records);
  return {ratio >= 5.0 && ratio <= 13.0 && slope >= 0.8 && slope <= 1.3,
          "median time ratio 4096/512 = " + fmt("%.2f", ratio) + " (want [5, 13]), log-log exponent " +
              fmt("%.3f", slope) + " (want [0.8, 1.3])"};
}

// 9. Doubling from R0 = 1.
Verdict doubling() {
  const Vector x0 = vec({4.0, 0.0, 0.0});  // lambda* = |x0| - 1 = 3
  ProjectionProblem p = unit_ball_problem(x0, 1.0);
  SolverConfig config;
  config.epsilon = 1e-6;
  const ProjectionResult r = project_with_R_doubling(p, config);
  const bool exterior_ok = r.doubling_rounds_used == 2 && (r.x_hat - vec({1.0, 0.0, 0.0})).norm() <= 1e-3 &&
                           std::abs(r.lambda_bar[0] - 3.0) <= 1e-2 && !r.boundary_hit;
  ProjectionProblem q = unit_ball_problem(vec({0.3, -0.2, 0.1}), 1.0);
  const ProjectionResult in = project_with_R_doubling(q, config);
  const bool interior_ok = in.doubling_rounds_used == 0 && (in.x_hat - q.x0).norm() <= 1e-6;
  return {exterior_ok && interior_ok, "lambda* = 3: " + std::to_string(r.doubling_rounds_used) +
                                          " doublings, lambda_bar " + fmt("%.6f", r.lambda_bar[0]) +
                                          "; interior: " + std::to_string(in.doubling_rounds_used) + " doublings"};
}

// 10. Byte-identical solve output.
Verdict determinism() {
  const std::string dir = FASTPROJ_TEST_TMP;
  cli::GenOptions g;
  g.n = 20;
  g.m = 2;
  g.seed = 42;
  g.out = dir + "/acceptance_instance.json";
  std::ostringstream sink;
  cli::cmd_gen(g, sink);
  cli::SolveOptions s;
  s.instance = g.out;
  s.eps = 1e-3;
  std::ostringstream first, second;
  cli::cmd_solve(s, first);
  cli::cmd_solve(s, second);
  s.out = dir + "/acceptance_a.json";
  cli::cmd_solve(s, sink);
  const std::string file_a = [&] {
    std::ifstream in(s.out, std::ios::binary);
    std::ostringstream b;
    b << in.rdbuf();
    return b.str();
  }();
  const bool same = !first.str().empty() && first.str() == second.str() && file_a == first.str();
  return {same, same ? "identical (" + std::to_string(first.str().size()) + " bytes)" : "outputs differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"analytic ball projection", ball_equivalence},
      {"dual-grid equivalence", grid_equivalence},
      {"oracle accuracy", oracle_accuracy},
      {"dual gradient and smoothness", dual_gradient},
      {"ellipsoid engine", ellipsoid_engine},
      {"noisy cutting plane", noisy_cutting_plane},
      {"norm duality", norm_duality},
      {"linear scaling in n", linear_scaling},
      {"doubling trick", doubling},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

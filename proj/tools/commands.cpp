#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastproj/cutting_plane.hpp"
#include "fastproj/errors.hpp"
#include "fastproj/instance.hpp"
#include "fastproj/norm_duality.hpp"
#include "fastproj/projector.hpp"
#include "fastproj/reference.hpp"

namespace fastproj::cli {

namespace {

// Writes to path, or to `fallback` when path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write " + path);
  write(file);
}

SolverConfig make_config(const SolveOptions& o) {
  SolverConfig config;
  config.epsilon = o.eps;
  config.epsilon_tilde_override = o.eps_tilde;
  config.engine = o.engine;
  config.max_doubling_rounds = o.max_doubles;
  config.max_outer_iterations = o.max_outer;
  config.warm_start = o.warm_start;
  return config;
}

struct Solved {
  Instance instance;
  ProjectionProblem problem;
  ProjectionResult result;
};

Solved solve_instance(const SolveOptions& o) {
  Solved s;
  s.instance = load_instance(o.instance);
  if (o.R) s.instance.R = *o.R;
  s.problem = to_problem(s.instance);
  s.result = project_with_R_doubling(s.problem, make_config(o));
  return s;
}

std::string vec_to_string(const Vector& v) {
  std::ostringstream s;
  s << std::setprecision(10) << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  s << ')';
  return s.str();
}

}  // namespace

int cmd_gen(const GenOptions& o, std::ostream& out) {
  GeneratorOptions g;
  g.n = o.n;
  g.m = o.ball ? 1 : o.m;
  g.seed = o.seed;
  g.c_min = o.c_min;
  g.c_max = o.c_max;
  g.unit_ball = o.ball;
  g.reflectors = o.reflectors;
  const GeneratedInstance gen = generate_instance(g);
  const std::string text = instance_to_json(gen.instance, o.factored).dump(1) + "\n";
  emit(o.out, out, [&](std::ostream& s) { s << text; });
  if (!o.out.empty()) {
    out << "wrote " << o.out << ": n=" << gen.instance.n() << " m=" << gen.instance.m() << " R=" << gen.instance.R
        << '\n';
  }
  return kExitOk;
}

int cmd_solve(const SolveOptions& o, std::ostream& out) {
  const Solved s = solve_instance(o);
  const std::string text = result_to_json(s.result).dump(2) + "\n";
  emit(o.out, out, [&](std::ostream& f) { f << text; });
  if (!o.out.empty()) {
    out << "objective " << std::setprecision(12) << s.result.objective << " max_violation "
        << s.result.max_violation << " oracle_calls " << s.result.oracle_calls << '\n';
  }
  if (s.result.boundary_hit) out << "warning: dual solution still on the box boundary after doubling\n";
  return s.result.max_violation <= o.eps ? kExitOk : kExitAccuracyFailure;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const Instance inst = load_instance(o.solve.instance);
  if (inst.m() > 2) throw InputError("verify supports m <= 2 (got m = " + std::to_string(inst.m()) + ")");
  const Solved s = solve_instance(o.solve);
  GridSpec spec;
  spec.resolution = o.grid;
  Instance ref_inst = s.instance;
  ref_inst.R = s.result.R_final;
  const GridResult ref = brute_force_dual_grid(ref_inst, spec);
  // The grid's dual value is a lower bound on the optimal objective (weak duality).
  const double ref_objective = ref.dual_value_ref;
  const double eps = o.solve.eps;
  const bool objective_ok = s.result.objective <= ref_objective + 6.0 * eps;
  const bool violation_ok = s.result.max_violation <= eps;
  out << std::setprecision(12);
  out << "objective      " << s.result.objective << '\n';
  out << "reference      " << ref_objective << " (dual value at lambda " << vec_to_string(ref.lambda_ref) << ")\n";
  out << "gap            " << s.result.objective - ref_objective << " (limit " << 6.0 * eps << ") "
      << (objective_ok ? "ok" : "FAIL") << '\n';
  out << "max violation  " << s.result.max_violation << " (limit " << eps << ") " << (violation_ok ? "ok" : "FAIL")
      << '\n';
  return objective_ok && violation_ok ? kExitOk : kExitAccuracyFailure;
}

std::vector<BenchRecord> run_bench(const BenchOptions& o) {
  if (o.n_list.empty()) throw InputError("bench: --n-list must not be empty");
  if (o.repeats < 1) throw InputError("bench: --repeats must be >= 1");
  std::vector<BenchRecord> records;
  for (const int n : o.n_list) {
    for (int r = 0; r < o.repeats; ++r) {
      GeneratorOptions g;
      g.n = n;
      g.m = o.m;
      g.seed = o.seed + static_cast<std::uint64_t>(r);
      g.reflectors = o.reflectors;
      const GeneratedInstance gen = generate_instance(g);
      // Start from R = 1 and let the doubling trick find the box.
      const ProjectionProblem problem = to_problem(gen.instance).with_radius(1.0);
      SolverConfig config;
      config.epsilon = o.eps;
      config.epsilon_tilde_override = o.eps_tilde;
      config.max_outer_iterations = o.max_outer;

      const auto start = std::chrono::steady_clock::now();
      const ProjectionResult res = project_with_R_doubling(problem, config);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

      records.push_back({n, o.m, o.eps, elapsed.count(), res.outer_iterations, res.inner_gradient_evals,
                         res.objective, res.max_violation, g.seed});
    }
  }
  return records;
}

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "n,m,eps,wall_time_seconds,outer_iterations,inner_gradient_evals,objective,max_violation,seed\n";
  out << std::setprecision(12);
  for (const auto& r : records) {
    out << r.n << ',' << r.m << ',' << r.eps << ',' << r.wall_time_seconds << ',' << r.outer_iterations << ','
        << r.inner_gradient_evals << ',' << r.objective << ',' << r.max_violation << ',' << r.seed << '\n';
  }
}

double loglog_slope(const std::vector<BenchRecord>& records) {
  std::map<int, std::vector<double>> times;
  for (const auto& r : records) times[r.n].push_back(r.wall_time_seconds);
  if (times.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> xs;
  std::vector<double> ys;
  for (auto& [n, t] : times) {
    std::sort(t.begin(), t.end());
    const std::size_t k = t.size();
    const double median = k % 2 ? t[k / 2] : 0.5 * (t[k / 2 - 1] + t[k / 2]);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(std::max(median, 1e-12)));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / k;
    my += ys[i] / k;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  const std::vector<BenchRecord> records = run_bench(o);
  emit(o.out, out, [&](std::ostream& s) { write_bench_csv(records, s); });
  const double slope = loglog_slope(records);
  if (std::isfinite(slope)) out << "log-log slope of median time vs n: " << std::setprecision(4) << slope << '\n';
  return kExitOk;
}

int cmd_trace(const SolveOptions& o, std::ostream& out) {
  const Solved s = solve_instance(o);
  emit(o.out, out, [&](std::ostream& f) { write_trace_csv(s.result.trace, s.problem.m(), f); });
  return kExitOk;
}

int cmd_project_norm(const NormOptions& o, std::ostream& out) {
  const NormKind kind = parse_norm(o.norm);
  Vector x0;
  if (!o.x0.empty()) {
    x0 = Eigen::Map<const Vector>(o.x0.data(), static_cast<Eigen::Index>(o.x0.size()));
  } else {
    if (o.n < 1) throw InputError("project-norm: --n must be >= 1");
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> normal;
    x0.resize(o.n);
    for (int i = 0; i < o.n; ++i) x0[i] = normal(rng);
    x0 *= std::uniform_real_distribution<double>(0.0, 10.0)(rng) / x0.norm();
  }

  const Vector direct = project_norm_ball(kind, x0);
  nlohmann::ordered_json doc;
  doc["norm"] = norm_name(kind);
  doc["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
  if (!o.via_dual) {
    doc["x"] = std::vector<double>(direct.data(), direct.data() + direct.size());
  } else {
    const DualBallProjector pi = dual_ball_projector(kind);
    const NormProjection p = o.R ? project_norm_ball_via_dual(x0, pi, *o.R, o.eps)
                                 : project_norm_ball_via_dual_auto(x0, pi, o.eps);
    doc["x"] = std::vector<double>(p.x.data(), p.x.data() + p.x.size());
    doc["lambda"] = p.lambda;
    doc["R"] = p.R;
    doc["oracle_calls"] = p.oracle_calls;
    doc["call_budget"] = p.call_budget;
    doc["distance_to_direct"] = (p.x - direct).norm();
  }
  const std::string text = doc.dump(2) + "\n";
  emit(o.out, out, [&](std::ostream& s) { s << text; });
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate Euclidean projection onto intersections of smooth convex sets"};
  app.require_subcommand(1);
  const std::map<std::string, Engine> engines{{"ellipsoid", Engine::Ellipsoid}, {"bisection", Engine::Bisection}};

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random quadratic instance");
  gen_cmd->add_option("--n", gen.n, "Dimension")->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "Number of constraints")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--c-min", gen.c_min, "Smallest slack at the anchor point")->capture_default_str();
  gen_cmd->add_option("--c-max", gen.c_max, "Largest slack at the anchor point")->capture_default_str();
  gen_cmd->add_flag("--ball", gen.ball, "Unit ball instance (m = 1, A = I, c = 1)");
  gen_cmd->add_flag("--factored", gen.factored, "Store A as eigenvalues plus Householder reflectors");
  gen_cmd->add_option("--reflectors", gen.reflectors, "Reflectors per rotation (0 = n)")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output file (stdout when omitted)");

  auto add_solve_flags = [&](CLI::App* cmd, SolveOptions& o) {
    cmd->add_option("instance,--instance", o.instance, "Instance JSON file")->required();
    cmd->add_option("--eps", o.eps, "Target accuracy")->capture_default_str();
    cmd->add_option("--eps-tilde", o.eps_tilde, "Inner accuracy (default: guaranteed schedule)");
    cmd->add_option("--engine", o.engine, "Cutting-plane engine")->transform(CLI::CheckedTransformer(engines));
    cmd->add_option("--R", o.R, "Initial dual box radius (default: from the instance)");
    cmd->add_option("--max-doubles", o.max_doubles, "Maximum R doublings")->capture_default_str();
    cmd->add_option("--max-outer", o.max_outer, "Cap on cutting-plane iterations")->capture_default_str();
    cmd->add_flag("--warm-start", o.warm_start, "Warm-start inner solves");
    cmd->add_option("--out", o.out, "Output file (stdout when omitted)");
  };

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Project x0 of an instance");
  add_solve_flags(solve_cmd, solve);

  VerifyOptions verify;
  verify.solve.eps = 1e-3;
  auto* verify_cmd = app.add_subcommand("verify", "Check a solve against the brute-force dual grid");
  add_solve_flags(verify_cmd, verify.solve);
  verify_cmd->add_option("--grid", verify.grid, "Grid points per dual axis")->capture_default_str();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time solves over a list of dimensions");
  bench_cmd->add_option("--n-list", bench.n_list, "Comma-separated dimensions")->delimiter(',')->required();
  bench_cmd->add_option("--m", bench.m, "Number of constraints")->capture_default_str();
  bench_cmd->add_option("--eps", bench.eps, "Target accuracy")->capture_default_str();
  bench_cmd->add_option("--eps-tilde", bench.eps_tilde, "Inner accuracy (default: guaranteed schedule)");
  bench_cmd->add_option("--repeats", bench.repeats, "Instances per dimension")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Seed of the first instance")->capture_default_str();
  bench_cmd->add_option("--reflectors", bench.reflectors, "Reflectors per rotation")->capture_default_str();
  bench_cmd->add_option("--max-outer", bench.max_outer, "Cap on cutting-plane iterations")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV file (stdout when omitted)");

  SolveOptions trace;
  auto* trace_cmd = app.add_subcommand("trace", "Export the per-iteration cutting-plane trace");
  add_solve_flags(trace_cmd, trace);

  NormOptions norm;
  auto* norm_cmd = app.add_subcommand("project-norm", "Project onto a unit norm ball");
  norm_cmd->add_option("--norm", norm.norm, "l1, l2 or linf")->capture_default_str();
  norm_cmd->add_option("--x0", norm.x0, "Comma-separated query point")->delimiter(',');
  norm_cmd->add_option("--n", norm.n, "Dimension of a random query point")->capture_default_str();
  norm_cmd->add_option("--seed", norm.seed, "Seed of the random query point")->capture_default_str();
  norm_cmd->add_flag("--via-dual", norm.via_dual, "Use bisection with the dual-ball projector");
  norm_cmd->add_option("--eps", norm.eps, "Accuracy of the dual path")->capture_default_str();
  norm_cmd->add_option("--R", norm.R, "Dual interval length (default 2|x0|, with doubling)");
  norm_cmd->add_option("--out", norm.out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*bench_cmd) return cmd_bench(bench, out);
    if (*trace_cmd) return cmd_trace(trace, out);
    if (*norm_cmd) return cmd_project_norm(norm, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ContractViolation& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitAccuracyFailure;
  }
  return kExitInputError;
}

}  // namespace fastproj::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fastproj/model.hpp"

namespace fastproj::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitAccuracyFailure = 2;

struct GenOptions {
  int n = 10;
  int m = 2;
  std::uint64_t seed = 1;
  double c_min = 1.0;
  double c_max = 2.0;
  bool ball = false;
  bool factored = false;
  int reflectors = 0;
  std::string out;
};

struct SolveOptions {
  std::string instance;
  double eps = 1e-4;
  std::optional<double> eps_tilde;
  Engine engine = Engine::Ellipsoid;
  std::optional<double> R;
  int max_doubles = 10;
  int max_outer = 5000;
  bool warm_start = false;
  std::string out;
};

struct VerifyOptions {
  SolveOptions solve;
  int grid = 200;
};

struct BenchOptions {
  std::vector<int> n_list;
  int m = 2;
  double eps = 1e-3;
  std::optional<double> eps_tilde;
  int repeats = 5;
  std::uint64_t seed = 1;
  int reflectors = 4;
  int max_outer = 5000;
  std::string out;
};

struct BenchRecord {
  int n = 0;
  int m = 0;
  double eps = 0.0;
  double wall_time_seconds = 0.0;
  int outer_iterations = 0;
  long long inner_gradient_evals = 0;
  double objective = 0.0;
  double max_violation = 0.0;
  std::uint64_t seed = 0;
};

struct NormOptions {
  std::string norm = "l1";
  std::vector<double> x0;
  int n = 10;
  std::uint64_t seed = 1;
  bool via_dual = false;
  double eps = 1e-9;
  std::optional<double> R;
  std::string out;
};

int cmd_gen(const GenOptions& options, std::ostream& out);
int cmd_solve(const SolveOptions& options, std::ostream& out);
int cmd_verify(const VerifyOptions& options, std::ostream& out);
int cmd_bench(const BenchOptions& options, std::ostream& out);
int cmd_trace(const SolveOptions& options, std::ostream& out);
int cmd_project_norm(const NormOptions& options, std::ostream& out);

/// Runs the benchmark without writing files.
std::vector<BenchRecord> run_bench(const BenchOptions& options);
/// CSV with header n,m,eps,wall_time_seconds,outer_iterations,inner_gradient_evals,objective,max_violation,seed.
void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out);
/// Least-squares slope of log(median time) against log(n); NaN with fewer than two sizes.
double loglog_slope(const std::vector<BenchRecord>& records);

/// Parses argv and dispatches; errors are reported on err and mapped to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fastproj::cli

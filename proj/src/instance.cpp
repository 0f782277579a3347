#include "fastproj/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "fastproj/errors.hpp"
#include "fastproj/projector.hpp"

namespace fastproj {

double working_radius(const Instance& instance) {
  double max_center = 0.0;
  double max_extent = 0.0;
  for (const auto& q : instance.constraints) {
    const double sigma = q.A.min_eigenvalue();
    if (!(sigma > 0.0)) {
      throw InputError("working radius needs positive definite A (singular A gives an unbounded set)");
    }
    max_center = std::max(max_center, q.center.norm());
    max_extent = std::max(max_extent, std::sqrt(q.c / sigma));
  }
  return instance.x0.norm() + max_center + max_extent + 1.0;
}

ProjectionProblem to_problem(const Instance& instance) {
  if (instance.constraints.empty()) throw InputError("instance has no constraints");
  for (const auto& q : instance.constraints) {
    if (q.A.dim() != instance.n() || q.center.size() != instance.n()) {
      throw InputError("instance: constraint dimension does not match x0");
    }
  }
  const double rho = working_radius(instance);
  ProjectionProblem problem;
  problem.x0 = instance.x0;
  problem.R = instance.R;
  for (const auto& q : instance.constraints) {
    problem.constraints.push_back(quadratic_constraint(q.A, q.center, q.c, rho));
  }
  problem.validate();
  return problem;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector read_vector(const json& node, const std::string& what) {
  if (!node.is_array()) throw InputError(what + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) throw InputError(what + ": entry " + std::to_string(i) + " is not a number");
    v[static_cast<Eigen::Index>(i)] = node[i].get<double>();
  }
  return v;
}

const json& require(const json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

}  // namespace

ordered_json instance_to_json(const Instance& instance, bool factored) {
  ordered_json doc;
  doc["n"] = instance.n();
  doc["m"] = instance.m();
  doc["x0"] = to_std(instance.x0);
  doc["R"] = instance.R;
  ordered_json constraints = ordered_json::array();
  for (const auto& q : instance.constraints) {
    ordered_json c;
    c["type"] = "quadratic";
    if (factored && !q.A.is_dense()) {
      c["eigenvalues"] = to_std(q.A.eigenvalues());
      ordered_json refl = ordered_json::array();
      for (const Vector& v : q.A.reflectors()) refl.push_back(to_std(v));
      c["reflectors"] = std::move(refl);
    } else {
      const Matrix a = q.A.to_dense();
      ordered_json rows = ordered_json::array();
      for (Eigen::Index r = 0; r < a.rows(); ++r) rows.push_back(to_std(a.row(r).transpose()));
      c["A"] = std::move(rows);
    }
    c["center"] = to_std(q.center);
    c["c"] = q.c;
    constraints.push_back(std::move(c));
  }
  doc["constraints"] = std::move(constraints);
  return doc;
}

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("instance: top-level JSON value must be an object");
  const json& n_node = require(doc, "n", "instance");
  const json& m_node = require(doc, "m", "instance");
  if (!n_node.is_number_integer() || !m_node.is_number_integer()) {
    throw InputError("instance: n and m must be integers");
  }
  const auto n = n_node.get<long long>();
  const auto m = m_node.get<long long>();
  if (n < 1 || m < 1) throw InputError("instance: n and m must be >= 1");

  Instance inst;
  inst.x0 = read_vector(require(doc, "x0", "instance"), "x0");
  if (inst.x0.size() != n) throw InputError("instance: x0 has length " + std::to_string(inst.x0.size()) +
                                            ", expected n = " + std::to_string(n));
  const json& r_node = require(doc, "R", "instance");
  if (!r_node.is_number()) throw InputError("instance: R must be a number");
  inst.R = r_node.get<double>();

  const json& cs = require(doc, "constraints", "instance");
  if (!cs.is_array()) throw InputError("instance: constraints must be an array");
  if (static_cast<long long>(cs.size()) != m) {
    throw InputError("instance: m = " + std::to_string(m) + " but " + std::to_string(cs.size()) +
                     " constraints given");
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string where = "constraint " + std::to_string(i);
    const json& c = cs[i];
    if (!c.is_object()) throw InputError(where + ": expected an object");
    const json& type = require(c, "type", where);
    if (!type.is_string() || type.get<std::string>() != "quadratic") {
      throw InputError(where + ": unsupported type (only \"quadratic\")");
    }
    QuadraticSpec q{SymmetricOperator::rotated_diagonal(Vector::Ones(1), {}), Vector(), 0.0};
    if (c.contains("A")) {
      const json& rows = c["A"];
      if (!rows.is_array() || static_cast<long long>(rows.size()) != n) {
        throw InputError(where + ": A must be an array of n rows");
      }
      Matrix a(n, n);
      for (long long r = 0; r < n; ++r) {
        const Vector row = read_vector(rows[r], where + " A row " + std::to_string(r));
        if (row.size() != n) throw InputError(where + ": A row " + std::to_string(r) + " has wrong length");
        a.row(r) = row.transpose();
      }
      q.A = SymmetricOperator::dense(std::move(a));
    } else if (c.contains("eigenvalues")) {
      Vector eig = read_vector(c["eigenvalues"], where + " eigenvalues");
      if (eig.size() != n) throw InputError(where + ": eigenvalues must have length n");
      std::vector<Vector> refl;
      const json& rn = require(c, "reflectors", where);
      if (!rn.is_array()) throw InputError(where + ": reflectors must be an array");
      for (const auto& v : rn) refl.push_back(read_vector(v, where + " reflector"));
      q.A = SymmetricOperator::rotated_diagonal(std::move(eig), std::move(refl));
    } else {
      throw InputError(where + ": missing field \"A\"");
    }
    q.center = read_vector(require(c, "center", where), where + " center");
    if (q.center.size() != n) throw InputError(where + ": center must have length n");
    const json& level = require(c, "c", where);
    if (!level.is_number()) throw InputError(where + ": c must be a number");
    q.c = level.get<double>();
    if (!(q.c > 0.0)) throw InputError(where + ": c must be positive");
    inst.constraints.push_back(std::move(q));
  }
  if (!(inst.R >= 1.0)) throw InputError("instance: R must be >= 1");
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed instance JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

void save_instance(const Instance& instance, const std::string& path, bool factored) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write instance file: " + path);
  out << instance_to_json(instance, factored).dump(1) << '\n';
}

GeneratedInstance generate_instance(const GeneratorOptions& opt) {
  if (opt.n < 1 || opt.m < 1) throw InputError("generator: n and m must be >= 1");
  if (!(opt.c_min > 0.0) || opt.c_max < opt.c_min) throw InputError("generator: need 0 < c_min <= c_max");
  if (!(opt.min_distance > 0.0) || opt.max_distance < opt.min_distance) {
    throw InputError("generator: need 0 < min_distance <= max_distance");
  }
  if (opt.unit_ball && opt.m != 1) throw InputError("generator: unit-ball mode requires m = 1");

  const int n = opt.n;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto gaussian = [&](int size) {
    Vector v(size);
    for (int i = 0; i < size; ++i) v[i] = normal(rng);
    return v;
  };

  GeneratedInstance out;
  Instance& inst = out.instance;
  if (opt.unit_ball) {
    inst.constraints.push_back({SymmetricOperator::dense(Matrix::Identity(n, n)), Vector::Zero(n), 1.0});
  } else {
    const int k = opt.reflectors <= 0 ? n : std::min(n, opt.reflectors);
    for (int i = 0; i < opt.m; ++i) {
      Vector s(n);
      s[0] = 1.0;
      for (int j = 1; j < n; ++j) s[j] = uniform(0.05, 0.95);
      std::vector<Vector> refl;
      refl.reserve(k);
      for (int j = 0; j < k; ++j) refl.push_back(gaussian(n));
      Vector center(n);
      for (int j = 0; j < n; ++j) center[j] = uniform(-1.0, 1.0);
      inst.constraints.push_back({SymmetricOperator::rotated_diagonal(std::move(s), std::move(refl)),
                                  std::move(center), 0.0});
    }
  }

  Vector anchor = Vector::Zero(n);
  for (const auto& q : inst.constraints) anchor += q.center;
  anchor /= static_cast<double>(inst.m());

  Vector margins(inst.m());
  for (int i = 0; i < inst.m(); ++i) {
    auto& q = inst.constraints[i];
    if (opt.unit_ball) {
      margins[i] = 1.0;
      continue;
    }
    const Vector d = anchor - q.center;
    margins[i] = uniform(opt.c_min, opt.c_max);
    q.c = d.dot(q.A.apply(d)) + margins[i];
  }

  auto h = [&inst](int i, const Vector& x) {
    const auto& q = inst.constraints[i];
    const Vector d = x - q.center;
    return d.dot(q.A.apply(d)) - q.c;
  };

  constexpr int kMaxTries = 1000;
  bool found = false;
  for (int attempt = 0; attempt < kMaxTries && !found; ++attempt) {
    Vector u = gaussian(n);
    if (!(u.norm() > 0.0)) continue;
    u.normalize();

    // Exit point of the ray anchor + t u: smallest positive root over the constraints.
    double t_exit = std::numeric_limits<double>::infinity();
    int active = -1;
    for (int i = 0; i < inst.m(); ++i) {
      const auto& q = inst.constraints[i];
      const Vector Au = q.A.apply(u);
      const double a = u.dot(Au);
      const double b = 2.0 * Au.dot(anchor - q.center);
      const double c0 = h(i, anchor);
      if (!(a > 0.0)) continue;
      const double t = (-b + std::sqrt(b * b - 4.0 * a * c0)) / (2.0 * a);
      if (t < t_exit) {
        t_exit = t;
        active = i;
      }
    }
    if (active < 0 || !std::isfinite(t_exit)) continue;
    const Vector boundary = anchor + t_exit * u;

    bool single_active = true;
    for (int i = 0; i < inst.m(); ++i) {
      if (i != active && h(i, boundary) > -1e-9 * (1.0 + inst.constraints[i].c)) single_active = false;
    }
    if (!single_active) continue;

    const auto& qa = inst.constraints[active];
    const Vector normal_dir = 2.0 * qa.A.apply(boundary - qa.center);
    const double grad_norm = normal_dir.norm();
    if (!(grad_norm > 0.0)) continue;
    const double dist = uniform(opt.min_distance, opt.max_distance);
    Vector x0 = boundary + (dist / grad_norm) * normal_dir;

    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.m(); ++i) worst = std::max(worst, h(i, x0));
    if (!(worst > 0.0)) continue;

    inst.x0 = std::move(x0);
    out.x_star = boundary;
    out.lambda_star = Vector::Zero(inst.m());
    out.lambda_star[active] = 2.0 * dist / grad_norm;
    out.distance = dist;
    found = true;
  }
  if (!found) throw InputError("generator: could not place an exterior query point (degenerate parameters)");

  // Slater bound at the anchor s: lambda_i (-h_i(s)) <= |s - x0|^2 - |x* - x0|^2 <= X (X + 2B),
  // with X >= |s - x*| and B = |x0 - x*|.
  double x_bound = std::numeric_limits<double>::infinity();
  for (const auto& q : inst.constraints) {
    x_bound = std::min(x_bound, (q.center - anchor).norm() + std::sqrt(q.c / q.A.min_eigenvalue()));
  }
  inst.R = bound_R_quadratic(margins, x_bound + 2.0 * out.distance, x_bound);
  return out;
}

}  // namespace fastproj

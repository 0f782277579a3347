#include "fastproj/cutting_plane.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Cholesky>

#include "fastproj/errors.hpp"

namespace fastproj {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vector flatten(const Vector& center, const Matrix& shape) {
  Vector state(center.size() + shape.size());
  state << center, shape.reshaped();
  return state;
}

}  // namespace

bool DualBox::contains(const Vector& lambda) const {
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] >= 0.0 && lambda[i] <= R)) return false;
  }
  return true;
}

EllipsoidState EllipsoidState::enclosing(const DualBox& box) {
  if (box.m < 1 || !(box.R > 0.0)) throw InputError("ellipsoid: need m >= 1 and R > 0");
  EllipsoidState s;
  s.center = box.center();
  s.shape = Matrix::Identity(box.m, box.m) * (box.m * box.R * box.R / 4.0);
  return s;
}

double central_cut_log_volume_factor(int m) {
  if (m < 1) throw InputError("ellipsoid: m must be >= 1");
  if (m == 1) return -std::log(2.0);
  const double md = m;
  return -std::log1p(1.0 / md) - 0.5 * (md - 1.0) * std::log1p(-1.0 / (md * md));
}

EllipsoidState ellipsoid_update(const EllipsoidState& state, const Vector& w, const Vector& cut_point) {
  const Eigen::Index m = state.center.size();
  if (w.size() != m || cut_point.size() != m) throw InputError("ellipsoid: cut dimension mismatch");
  const Vector qw = state.shape * w;
  const double wqw = w.dot(qw);
  if (!(wqw > 0.0) || !std::isfinite(wqw)) {
    throw NumericalFailure("ellipsoid: w^T Q w is not positive", flatten(state.center, state.shape));
  }
  const Vector w_hat = qw / std::sqrt(wqw);

  EllipsoidState next;
  next.updates = state.updates + 1;
  next.log_volume_offset = state.log_volume_offset + central_cut_log_volume_factor(static_cast<int>(m));
  if (m == 1) {
    next.center = state.center - 0.5 * w_hat;
    next.shape = state.shape / 4.0;
    return next;
  }
  const double md = static_cast<double>(m);
  next.center = state.center - w_hat / (md + 1.0);
  next.shape = (md * md / (md * md - 1.0)) * (state.shape - (2.0 / (md + 1.0)) * (w_hat * w_hat.transpose()));
  next.shape = 0.5 * (next.shape + next.shape.transpose()).eval();
  if (!next.shape.allFinite() ||
      (next.updates % (8 * m) == 0 && Eigen::LLT<Matrix>(next.shape).info() != Eigen::Success)) {
    throw NumericalFailure("ellipsoid: shape matrix lost positive definiteness", flatten(next.center, next.shape));
  }
  return next;
}

Vector separation_oracle_box(const Vector& lambda, double R) {
  Vector w = Vector::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > R) {
      w[i] = 1.0;
    } else if (lambda[i] < 0.0) {
      w[i] = -1.0;
    }
  }
  if (w.isZero()) throw ContractViolation("separation oracle called with a point inside the box");
  return w;
}

void write_trace_csv(const CutTrace& trace, int m, std::ostream& out) {
  out << "t,in_box";
  for (int i = 1; i <= m; ++i) out << ",lambda_" << i;
  out << ",v,grad_norm,log_volume\n";
  out << std::setprecision(17);
  for (const auto& r : trace.records) {
    out << r.t << ',' << (r.in_box ? 1 : 0);
    for (int i = 0; i < m; ++i) out << ',' << r.lambda[i];
    out << ',';
    if (r.in_box) out << r.v;
    out << ',' << r.grad_norm << ',' << r.log_volume << '\n';
  }
}

std::string trace_csv(const CutTrace& trace, int m) {
  std::ostringstream s;
  write_trace_csv(trace, m, s);
  return s.str();
}

CuttingPlaneResult cutting_plane_maximize(const DualEstimateOracle& oracle, const SeparationOracle& separation,
                                          const DualBox& box, int T) {
  if (T < 1) throw InputError("cutting plane: T must be >= 1");
  CuttingPlaneResult result;
  EllipsoidState state = EllipsoidState::enclosing(box);
  double best = -std::numeric_limits<double>::infinity();

  for (int t = 1; t <= T; ++t) {
    CutRecord rec;
    rec.t = t;
    rec.lambda = state.center;
    rec.in_box = box.contains(rec.lambda);
    result.iterations = t;
    if (rec.in_box) {
      const DualEstimate est = oracle(rec.lambda);
      rec.v = est.v;
      rec.grad_norm = est.g.norm();
      rec.w = -est.g;
      if (result.lambda_bar.size() == 0 || est.v > best) {
        best = est.v;
        result.lambda_bar = rec.lambda;
        result.v_bar = est.v;
        result.best_iteration = t;
      }
      if (rec.grad_norm == 0.0) {
        rec.log_volume = state.log_volume_offset;
        result.trace.records.push_back(std::move(rec));
        result.trace.zero_gradient_stop = true;
        break;
      }
    } else {
      rec.v = kNaN;
      rec.w = separation(rec.lambda);
      rec.grad_norm = rec.w.norm();
    }
    try {
      state = ellipsoid_update(state, rec.w, rec.lambda);
    } catch (const NumericalFailure&) {
      rec.log_volume = state.log_volume_offset;
      result.trace.records.push_back(std::move(rec));
      result.trace.degenerate_stop = true;
      break;
    }
    rec.log_volume = state.log_volume_offset;
    result.trace.records.push_back(std::move(rec));
  }
  return result;
}

BisectionResult bisection_maximize(const std::function<OracleTriple(double)>& oracle, double R, int T) {
  if (T < 1) throw InputError("bisection: T must be >= 1");
  if (!(R > 0.0)) throw InputError("bisection: R must be positive");
  BisectionResult result;
  double lo = 0.0;
  double hi = R;
  double best = -std::numeric_limits<double>::infinity();
  for (int t = 1; t <= T; ++t) {
    const double lambda = 0.5 * (lo + hi);
    OracleTriple o = oracle(lambda);
    if (o.g.size() != 1) throw InputError("bisection: oracle must return a scalar gradient");
    const double g = o.g[0];
    CutRecord rec;
    rec.t = t;
    rec.in_box = true;
    rec.lambda = Vector::Constant(1, lambda);
    rec.w = Vector::Constant(1, -g);
    rec.v = o.v;
    rec.grad_norm = std::abs(g);
    result.iterations = t;
    if (t == 1 || o.v > best) {
      best = o.v;
      result.lambda_tau = lambda;
      result.v_tau = o.v;
      result.x_tau = std::move(o.x_lambda);
    }
    if (g > 0.0) {
      lo = lambda;
    } else if (g < 0.0) {
      hi = lambda;
    } else {
      rec.log_volume = std::log((hi - lo) / R);
      result.trace.records.push_back(std::move(rec));
      result.trace.zero_gradient_stop = true;
      break;
    }
    rec.log_volume = std::log((hi - lo) / R);
    result.trace.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace fastproj

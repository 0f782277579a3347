#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace fastproj {

/// Malformed or inconsistent input data (dimension mismatch, bad instance file).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a documented precondition (e.g. a negative multiplier).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Floating-point breakdown inside an iterative method. Carries the offending iterate.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, Eigen::VectorXd state)
      : std::runtime_error(what), state_(std::move(state)) {}

  const Eigen::VectorXd& state() const { return state_; }

 private:
  Eigen::VectorXd state_;
};

}  // namespace fastproj

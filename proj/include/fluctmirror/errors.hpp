#pragma once

#include <stdexcept>
#include <string>

namespace fluctmirror {

/// Invalid caller-supplied parameter (non-positive width, z outside the
/// admissible range, violated problem invariant).
class argument_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of a function (non-finite argument).
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Result not representable in double precision.
class range_error : public std::range_error {
public:
  using std::range_error::range_error;
};

/// Evaluation exactly on a singularity of the observable (e.g. a sharp
/// plate at z = 0).
class pole_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Quadrature or root bracketing failed to reach the requested accuracy.
/// Carries the best estimate that was reached.
class numerical_error : public std::runtime_error {
public:
  numerical_error(const std::string& what, double best_estimate,
                  double error_estimate)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace fluctmirror

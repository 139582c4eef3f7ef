#pragma once

#include <stdexcept>
#include <string>

namespace uwoc {

/// Gamma-function argument sits on a pole.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No vertical line separates the left and right pole sequences, or the
/// Mellin-Barnes integrand does not decay along the line.
class ContourError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature or series did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the documented domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace uwoc

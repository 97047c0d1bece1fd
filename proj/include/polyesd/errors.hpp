#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyesd {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFiniteError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// QR iteration ran out of sweeps. `deflated` eigenvalues had converged.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(std::size_t deflated, std::size_t total)
      : std::runtime_error("QR iteration did not converge: " + std::to_string(deflated) +
                           " of " + std::to_string(total) + " eigenvalues deflated"),
        deflated(deflated),
        total(total) {}
  std::size_t deflated;
  std::size_t total;
};

/// Leading coefficient is singular or too ill-conditioned to invert.
struct SingularLeadingCoefficient : std::runtime_error {
  explicit SingularLeadingCoefficient(double rcond)
      : std::runtime_error("leading coefficient is numerically singular (1/cond = " +
                           std::to_string(rcond) + ")"),
        rcond(rcond) {}
  double rcond;
};

struct InvalidScheme : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace polyesd

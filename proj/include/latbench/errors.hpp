#pragma once

#include <stdexcept>
#include <string>

namespace latbench {

/// Invalid user-supplied configuration (bad flags, mismatched dimensions, ...).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical validation failed (orthonormality check, captured probability
/// mass, quadrature self-check, ...).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Faded generator too ill-conditioned to decode reliably.  Callers in the
/// simulation layer count the affected frame as an erasure.
class ill_conditioned_error : public numerical_error {
 public:
  explicit ill_conditioned_error(double cond)
      : numerical_error("generator condition estimate " + std::to_string(cond) +
                        " exceeds decoding threshold"),
        cond_(cond) {}

  double condition_estimate() const noexcept { return cond_; }

 private:
  double cond_;
};

}  // namespace latbench

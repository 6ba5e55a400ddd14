#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sunq {

/// Default absolute tolerance for residuals of O(1)-scaled quantities.
inline constexpr double kDefaultTol = 1e-9;

/// Bad input shape or value: n < 2, wrong vector length, non-square matrix.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A generator basis that fails its orthonormality invariant.
class InconsistentBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quantity that must cancel to a real value kept a large imaginary
/// residue. Indicates corrupted structure tensors, not bad user input.
class InternalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schema violation while parsing a JSON artifact. `what()` names the
/// offending field path.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Seeded gaussian stream: mt19937_64 plus an explicit Box-Muller
/// transform, so a seed reproduces the same draws on every standard
/// library implementation.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed)
      : engine_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal draw.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sunq

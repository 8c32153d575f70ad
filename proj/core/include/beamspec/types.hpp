#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "beamspec/error.hpp"

namespace beamspec {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Boundary feedback gain k >= 0 of the law u = -k w_xt(1, t).
/// k = 0 is the conservative auxiliary case.
class Gain {
 public:
  explicit Gain(double k) : k_(k) {
    if (!std::isfinite(k) || k < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "gain must be finite and >= 0");
    }
  }

  double value() const noexcept { return k_; }
  bool damped() const noexcept { return k_ > 0.0; }

  /// Throws unless k > 0; for operations defined only for the closed loop.
  void require_damped(const char* what) const {
    if (!damped()) {
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " requires k > 0");
    }
  }

  friend bool operator==(const Gain&, const Gain&) = default;

 private:
  double k_;
};

/// Value carried as value * exp(scale_exponent) so that hyperbolic growth
/// never overflows.
struct ScaledComplex {
  cplx value{};
  double scale_exponent = 0.0;

  /// May overflow; only meaningful when scale_exponent is moderate.
  cplx raw() const { return value * std::exp(scale_exponent); }
};

}  // namespace beamspec

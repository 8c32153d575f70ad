#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "beamspec/error.hpp"

namespace beamspec {

/// Uniform grid x_j = j h on [0, 1], j = 0..intervals.
struct UniformGrid {
  int intervals = 0;

  explicit UniformGrid(int n) : intervals(n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one interval");
  }
  double h() const { return 1.0 / intervals; }
  double x(int j) const { return static_cast<double>(j) / intervals; }
  std::size_t points() const { return static_cast<std::size_t>(intervals) + 1; }
  std::vector<double> nodes() const;
};

/// Composite Simpson over samples on a uniform grid of spacing h. An odd
/// number of intervals closes with the 3/8 rule on the last three; a single
/// interval falls back to the trapezoid.
template <class T>
T simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "simpson needs at least two samples");
  const std::size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
  std::size_t even = intervals % 2 == 0 ? intervals : intervals - 3;
  T acc{};
  for (std::size_t i = 0; i + 2 <= even; i += 2) {
    acc += f[i] + 4.0 * f[i + 1] + f[i + 2];
  }
  T total = acc * (h / 3.0);
  if (even != intervals) {
    const std::size_t j = even;
    total += (3.0 * h / 8.0) * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
  }
  return total;
}

template <class T>
T simpson(const std::vector<T>& f, double h) {
  return simpson(std::span<const T>(f), h);
}

/// K[j] = integral of f from 0 to x_j, exact for cubic f. Even nodes chain
/// Simpson panels; odd nodes add one interval with a four-point rule.
template <class T>
std::vector<T> cumulative_integral(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 4) throw Error(ErrorKind::InvalidArgument, "cumulative integral needs at least four samples");
  std::vector<T> K(n, T{});
  for (std::size_t j = 1; j < n; ++j) {
    if (j % 2 == 0) {
      K[j] = K[j - 2] + (h / 3.0) * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
    } else if (j + 2 < n) {
      K[j] = K[j - 1] + (h / 24.0) * (9.0 * f[j - 1] + 19.0 * f[j] - 5.0 * f[j + 1] + f[j + 2]);
    } else {
      K[j] = K[j - 1] + (h / 24.0) * (f[j - 3] - 5.0 * f[j - 2] + 19.0 * f[j - 1] + 9.0 * f[j]);
    }
  }
  return K;
}

template <class T>
std::vector<T> cumulative_integral(const std::vector<T>& f, double h) {
  return cumulative_integral(std::span<const T>(f), h);
}

}  // namespace beamspec

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "beamspec/error.hpp"

namespace beamspec {

/// n x n band matrix with kl sub- and ku super-diagonals, stored column-major
/// with kl extra rows for pivot fill (LAPACK gb layout).
template <class T>
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1),
        ab_(static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * kl + ku + 1), T{}) {
    if (n < 1 || kl < 0 || ku < 0) throw Error(ErrorKind::InvalidArgument, "bad band shape");
  }

  int size() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  bool in_band(int i, int j) const { return i - j <= kl_ && j - i <= ku_ && i >= 0 && j >= 0 && i < n_ && j < n_; }

  T& at(int i, int j) { return ab_[idx(i, j)]; }
  const T& at(int i, int j) const { return ab_[idx(i, j)]; }

  T get(int i, int j) const { return in_band(i, j) ? at(i, j) : T{}; }
  void add(int i, int j, T v) {
    if (!in_band(i, j)) throw Error(ErrorKind::InvalidArgument, "entry outside band");
    at(i, j) += v;
  }

  std::vector<T> matvec(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != n_) throw Error(ErrorKind::ShapeMismatch, "matvec size");
    std::vector<T> y(x.size(), T{});
    for (int j = 0; j < n_; ++j) {
      const int lo = std::max(0, j - ku_), hi = std::min(n_ - 1, j + kl_);
      for (int i = lo; i <= hi; ++i) y[static_cast<std::size_t>(i)] += at(i, j) * x[static_cast<std::size_t>(j)];
    }
    return y;
  }

 private:
  template <class>
  friend class BandedLU;

  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(ld_) +
           static_cast<std::size_t>(kl_ + ku_ + i - j);
  }

  int n_, kl_, ku_, ld_;
  std::vector<T> ab_;
};

/// LU with partial pivoting of a band matrix (unblocked gbtf2). Throws
/// LinearSolveFailure on an exactly zero or non-finite pivot.
template <class T>
class BandedLU {
 public:
  explicit BandedLU(BandedMatrix<T> a) : lu_(std::move(a)), piv_(static_cast<std::size_t>(lu_.n_)) { factor(); }

  int size() const { return lu_.n_; }

  void solve_in_place(std::vector<T>& b) const {
    const int n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
    if (static_cast<int>(b.size()) != n) throw Error(ErrorKind::ShapeMismatch, "solve size");
    for (int j = 0; j < n; ++j) {
      const int p = piv_[static_cast<std::size_t>(j)];
      if (p != j) std::swap(b[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(p)]);
      const int km = std::min(kl, n - 1 - j);
      for (int i = 1; i <= km; ++i) b[static_cast<std::size_t>(j + i)] -= lu_.at(j + i, j) * b[static_cast<std::size_t>(j)];
    }
    for (int j = n - 1; j >= 0; --j) {
      b[static_cast<std::size_t>(j)] /= lu_.at(j, j);
      const T bj = b[static_cast<std::size_t>(j)];
      for (int i = std::max(0, j - kl - ku); i < j; ++i) b[static_cast<std::size_t>(i)] -= lu_.at(i, j) * bj;
    }
  }

  std::vector<T> solve(std::vector<T> b) const {
    solve_in_place(b);
    return b;
  }

 private:
  void factor() {
    const int n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
    int ju = 0;
    for (int j = 0; j < n; ++j) {
      const int km = std::min(kl, n - 1 - j);
      int p = j;
      double best = std::abs(lu_.at(j, j));
      for (int i = 1; i <= km; ++i) {
        const double v = std::abs(lu_.at(j + i, j));
        if (v > best) {
          best = v;
          p = j + i;
        }
      }
      piv_[static_cast<std::size_t>(j)] = p;
      if (best == 0.0 || !std::isfinite(best)) {
        throw Error(ErrorKind::LinearSolveFailure, "zero pivot in banded LU");
      }
      ju = std::max(ju, std::min(p + ku, n - 1));
      if (p != j) {
        for (int c = j; c <= ju; ++c) std::swap(lu_.at(j, c), lu_.at(p, c));
      }
      const T d = lu_.at(j, j);
      for (int i = 1; i <= km; ++i) lu_.at(j + i, j) /= d;
      for (int c = j + 1; c <= ju; ++c) {
        const T u = lu_.at(j, c);
        if (u == T{}) continue;
        for (int i = 1; i <= km; ++i) lu_.at(j + i, c) -= lu_.at(j + i, j) * u;
      }
    }
  }

  BandedMatrix<T> lu_;
  std::vector<int> piv_;
};

}  // namespace beamspec

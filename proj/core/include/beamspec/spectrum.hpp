#pragma once

// Eigenvalues lambda_n = i tau_n^2 of the boundary-damped beam generator.
//
// Modes n >= kAsymptoticMinIndex are found by Newton iteration on the scaled
// characteristic function seeded at (n + 1/2) pi; lower modes come from a rectangle
// sweep (argument-principle zero count + Newton polish from a seed grid).

#include <vector>

#include "beamspec/charfun.hpp"

namespace beamspec {

inline constexpr int kAsymptoticMinIndex = 3;
inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr double kDedupRadius = 1e-6;

struct SpectralPoint {
  int n = 0;
  cplx tau{};
  double residual = 0.0;  // normalized_residual(tau): |f(tau)| except near the diagonal
  int iterations = 0;

  cplx lambda() const { return kI * tau * tau; }
};

struct AsymptoteError {
  int n = 0;
  double err_tau = 0.0;          // |tau_n - (n + 1/2) pi|
  double err_tau_quarter = 0.0;  // |tau_n - (n + 1/4) pi|, the k = 0 grid
  double err_re_lambda = 0.0;    // |Re lambda_n + 2/k| (k > 0) or |Re lambda_n| (k = 0)
};

struct SpectrumReport {
  Gain k{0.0};
  std::vector<SpectralPoint> points;  // increasing Im lambda
  double tolerance = kDefaultTolerance;
  std::vector<AsymptoteError> asymptote_errors;  // parallel to points
};

struct NewtonResult {
  cplx tau{};
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton on eval_char_scaled: at most 50 iterations, step halving up to
/// 8 times when the residual does not decrease.
NewtonResult newton_polish(cplx seed, const Gain& k, double tol);

struct Rectangle {
  double re_min, re_max, im_min, im_max;
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

/// Number of zeros of the characteristic function inside rect (argument
/// principle with adaptive boundary sampling). Throws NoConvergence when the
/// winding number does not resolve to an integer (a root on the contour).
int count_zeros(const Gain& k, const Rectangle& rect);

struct LowModeSweep {
  Rectangle rect{};
  int zero_count = 0;
  std::vector<cplx> roots;            // every root in rect, mirrored copies included
  std::vector<SpectralPoint> points;  // real eigenvalues (n = 0) and off-diagonal canonical roots, n = floor(Re tau / pi)
};

/// Rectangle used for the low modes at gain k: [min(0.5, 0.5 sqrt(2/k)), 3 pi] x [-1, 3 pi + 1].
Rectangle low_mode_rectangle(const Gain& k);

LowModeSweep sweep_low_modes(const Gain& k, double tol = kDefaultTolerance);

/// Real eigenvalues lambda = -r^2, i.e. roots on the diagonal tau = r e^{i pi/4},
/// by a sign-change scan of D / (tau^3 cos tau cosh tau) and bisection. Every
/// k > 0 has at least one (about -4/k for large k, -2/k^2 for small k); k = 0
/// has none. All are indexed n = 0.
std::vector<SpectralPoint> real_eigenvalues(const Gain& k);

/// Eigenvalue with index n. For n >= 3 Newton starts at (n + 1/2) pi and the root
/// must stay within pi/2 of the seed (BasinEscape otherwise); n = 1, 2 use the
/// sweep and n = 0 the real-eigenvalue scan.
SpectralPoint find_eigenvalue(int n, const Gain& k, double tol = kDefaultTolerance);

/// All modes up to n_max (low sweep + seeded tail), sorted by Im lambda and
/// deduplicated; index failures are rethrown with the index in the message.
SpectrumReport compute_spectrum(int n_max, const Gain& k, double tol = kDefaultTolerance);

AsymptoteError asymptote_error(const SpectralPoint& p, const Gain& k);

struct AbscissaDetail {
  double value = 0.0;    // max Re lambda over the report (conjugates share it)
  int argmax_n = 0;      // which mode attains it
  double tail_limit = 0.0;  // -2/k, the limit of Re lambda_n (0 when k = 0)
};

double spectral_abscissa(const SpectrumReport& report);
AbscissaDetail spectral_abscissa_detail(const SpectrumReport& report);

}  // namespace beamspec

#pragma once

// Eigenfunctions
//   phi(x) = a1 (cos tau x - cosh tau x) + a2 (sin tau x - sinh tau x),
//   a1 = sin tau - sinh tau,  a2 = -(cos tau - cosh tau),
// sampled in the scaled form e^{-tau} tau^{-d} phi^{(d)}(x), which stays O(1) for
// any Re tau. The F profile is 2 tau^{-2} e^{-tau} (phi'', lambda phi) and the G
// profile its leading-order form built from a = (n + 1/2) pi.

#include <cstdint>
#include <vector>

#include "beamspec/quadrature.hpp"
#include "beamspec/spectrum.hpp"

namespace beamspec {

inline constexpr int kDefaultGridSize = 1024;

struct ModeShape {
  SpectralPoint point;
  Gain k{0.0};
  cplx a1{};  // e^{-tau} a1
  cplx a2{};  // e^{-tau} a2
  UniformGrid grid{16};
  std::vector<cplx> phi;   // e^{-tau} phi(x_j)
  std::vector<cplx> phi2;  // e^{-tau} tau^{-2} phi''(x_j)
};

/// e^{-tau} tau^{-d} phi^{(d)}(x) for d = 0..4, from the closed form.
cplx mode_value(cplx tau, double x, int d);

/// grid_size = number of Simpson intervals (even, >= 16). Throws DegenerateMode
/// when the scaled samples vanish (spurious root).
ModeShape build_mode(const SpectralPoint& point, const Gain& k, int grid_size = kDefaultGridSize);

struct BoundaryResiduals {
  double phi_at_0 = 0.0;   // |phi(0)| / max|phi|
  double slope_at_0 = 0.0; // |phi'(0)| / (|tau| max|phi|)
  double phi_at_1 = 0.0;   // |phi(1)| / max|phi|
  double moment_at_1 = 0.0;  // |phi''(1) + i k tau^2 phi'(1)| / max|phi''|
};

BoundaryResiduals boundary_residuals(const ModeShape& mode);

/// max over xs of |phi'''' - tau^4 phi| / (|tau|^4 max|phi|).
double ode_residual(const ModeShape& mode, const std::vector<double>& xs);

enum class ProfileKind { F, G };

struct ModeProfile {
  int n = 0;
  ProfileKind kind = ProfileKind::F;
  UniformGrid grid{16};
  std::vector<cplx> comp1;
  std::vector<cplx> comp2;
};

ModeProfile profile_F(const ModeShape& mode);
ModeProfile profile_G(int n, int grid_size = kDefaultGridSize);

/// Closed-form G profile components at a single x.
cplx profile_G_comp1(int n, double x);
cplx profile_G_comp2(int n, double x);

/// Composite Simpson of |comp1|^2 + |comp2|^2; requires at least 64 intervals.
double l2_norm_squared(const ModeProfile& p);
double l2_norm(const ModeProfile& p);

/// ||a - b||^2 on a shared grid; ShapeMismatch otherwise.
double squared_distance(const ModeProfile& a, const ModeProfile& b);

struct ClosenessRow {
  int n = 0;
  double d = 0.0;            // ||F_n - G_n||^2
  double partial_sum = 0.0;  // sum of d over n_from..n
};

std::vector<ClosenessRow> closeness_tail(int n_from, int n_to, const Gain& k,
                                         int grid_size = kDefaultGridSize);

}  // namespace beamspec

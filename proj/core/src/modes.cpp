#include "beamspec/modes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamspec/parallel.hpp"

namespace beamspec {
namespace {

struct Coefficients {
  cplx alpha, beta;  // e^{-tau} a1, e^{-tau} a2
  cplx A, B;         // a1 + a2 (already O(1)), e^{-tau} (a1 - a2)
};

Coefficients coefficients(cplx tau) {
  const cplx em = std::exp(-tau);
  const cplx em2 = em * em;
  const cplx s = std::sin(tau), c = std::cos(tau);
  Coefficients co;
  co.alpha = em * s - 0.5 * (1.0 - em2);
  co.beta = 0.5 * (1.0 + em2) - em * c;
  co.A = s - c + em;
  co.B = em * (s + c) - 1.0;
  return co;
}

cplx value_at(const Coefficients& co, cplx tau, double x, int d) {
  const cplx z = tau * x;
  const double phase = d * kPi / 2.0;
  const cplx C = std::cos(z + phase), S = std::sin(z + phase);
  if (tau.real() * x <= 1.0) {
    // Small argument: subtract the hyperbolic terms directly so phi(0) = 0 exactly.
    const cplx ch = std::cosh(z), sh = std::sinh(z);
    const bool even = d % 2 == 0;
    return co.alpha * (C - (even ? ch : sh)) + co.beta * (S - (even ? sh : ch));
  }
  const cplx e1 = std::exp(-tau * (1.0 - x));
  const cplx e0 = std::exp(-z);
  const double sign = d % 2 == 0 ? 1.0 : -1.0;
  return co.alpha * C + co.beta * S - 0.5 * (co.A * e1 + sign * co.B * e0);
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

void require_norm_grid(const ModeProfile& p) {
  if (p.grid.intervals < 64) {
    throw Error(ErrorKind::InvalidArgument, "norm quadrature needs at least 64 intervals");
  }
}

}  // namespace

cplx mode_value(cplx tau, double x, int d) {
  if (d < 0 || d > 4) throw Error(ErrorKind::InvalidArgument, "derivative order must be 0..4");
  return value_at(coefficients(tau), tau, x, d);
}

ModeShape build_mode(const SpectralPoint& point, const Gain& k, int grid_size) {
  if (grid_size < 16 || grid_size % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "grid_size must be even and >= 16");
  }
  ModeShape m;
  m.point = point;
  m.k = k;
  m.grid = UniformGrid(grid_size);
  const Coefficients co = coefficients(point.tau);
  m.a1 = co.alpha;
  m.a2 = co.beta;
  m.phi.resize(m.grid.points());
  m.phi2.resize(m.grid.points());
  for (int j = 0; j <= grid_size; ++j) {
    const double x = m.grid.x(j);
    m.phi[static_cast<std::size_t>(j)] = value_at(co, point.tau, x, 0);
    m.phi2[static_cast<std::size_t>(j)] = value_at(co, point.tau, x, 2);
  }
  if (max_abs(m.phi) < 1e-14) {
    throw Error(ErrorKind::DegenerateMode,
                "mode " + std::to_string(point.n) + " vanishes on the grid");
  }
  return m;
}

BoundaryResiduals boundary_residuals(const ModeShape& mode) {
  const cplx tau = mode.point.tau;
  const Coefficients co = coefficients(tau);
  const double phi_max = max_abs(mode.phi);
  const double phi2_max = max_abs(mode.phi2);
  BoundaryResiduals r;
  r.phi_at_0 = std::abs(value_at(co, tau, 0.0, 0)) / phi_max;
  r.slope_at_0 = std::abs(value_at(co, tau, 0.0, 1)) / phi_max;
  r.phi_at_1 = std::abs(value_at(co, tau, 1.0, 0)) / phi_max;
  // tau^{-2} (phi'' + i k tau^2 phi') = psi_2 + i k tau psi_1 in scaled units.
  const cplx moment = value_at(co, tau, 1.0, 2) + kI * mode.k.value() * tau * value_at(co, tau, 1.0, 1);
  r.moment_at_1 = std::abs(moment) / phi2_max;
  return r;
}

double ode_residual(const ModeShape& mode, const std::vector<double>& xs) {
  const cplx tau = mode.point.tau;
  const Coefficients co = coefficients(tau);
  const double phi_max = max_abs(mode.phi);
  double worst = 0.0;
  for (double x : xs) {
    // psi_4 = e^{-tau} tau^{-4} phi''''; the residual in these units is psi_4 - psi_0.
    const cplx r = value_at(co, tau, x, 4) - value_at(co, tau, x, 0);
    worst = std::max(worst, std::abs(r) / phi_max);
  }
  return worst;
}

ModeProfile profile_F(const ModeShape& mode) {
  ModeProfile p;
  p.n = mode.point.n;
  p.kind = ProfileKind::F;
  p.grid = mode.grid;
  p.comp1.resize(mode.phi.size());
  p.comp2.resize(mode.phi.size());
  for (std::size_t j = 0; j < mode.phi.size(); ++j) {
    p.comp1[j] = 2.0 * mode.phi2[j];
    p.comp2[j] = 2.0 * kI * mode.phi[j];
  }
  return p;
}

cplx profile_G_comp1(int n, double x) {
  const double a = (n + 0.5) * kPi;
  const double sgn = n % 2 == 0 ? 1.0 : -1.0;
  return -sgn * std::exp(-a * (1.0 - x)) + std::cos(a * x) - std::sin(a * x) + std::exp(-a * x);
}

cplx profile_G_comp2(int n, double x) {
  const double a = (n + 0.5) * kPi;
  const double sgn = n % 2 == 0 ? 1.0 : -1.0;
  return kI * (-sgn * std::exp(-a * (1.0 - x)) - std::cos(a * x) + std::sin(a * x) + std::exp(-a * x));
}

ModeProfile profile_G(int n, int grid_size) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "G profile needs n >= 1");
  if (grid_size < 16 || grid_size % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "grid_size must be even and >= 16");
  }
  ModeProfile p;
  p.n = n;
  p.kind = ProfileKind::G;
  p.grid = UniformGrid(grid_size);
  p.comp1.resize(p.grid.points());
  p.comp2.resize(p.grid.points());
  for (int j = 0; j <= grid_size; ++j) {
    const double x = p.grid.x(j);
    p.comp1[static_cast<std::size_t>(j)] = profile_G_comp1(n, x);
    p.comp2[static_cast<std::size_t>(j)] = profile_G_comp2(n, x);
  }
  return p;
}

double l2_norm_squared(const ModeProfile& p) {
  require_norm_grid(p);
  std::vector<double> w(p.comp1.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::norm(p.comp1[j]) + std::norm(p.comp2[j]);
  return simpson(w, p.grid.h());
}

double l2_norm(const ModeProfile& p) { return std::sqrt(l2_norm_squared(p)); }

double squared_distance(const ModeProfile& a, const ModeProfile& b) {
  if (a.grid.intervals != b.grid.intervals || a.comp1.size() != b.comp1.size() ||
      a.comp2.size() != b.comp2.size()) {
    throw Error(ErrorKind::ShapeMismatch, "profiles live on different grids");
  }
  ModeProfile diff = a;
  for (std::size_t j = 0; j < diff.comp1.size(); ++j) {
    diff.comp1[j] -= b.comp1[j];
    diff.comp2[j] -= b.comp2[j];
  }
  return l2_norm_squared(diff);
}

std::vector<ClosenessRow> closeness_tail(int n_from, int n_to, const Gain& k, int grid_size) {
  if (n_from < kAsymptoticMinIndex) {
    throw Error(ErrorKind::InvalidArgument,
                "n_from must be >= " + std::to_string(kAsymptoticMinIndex));
  }
  if (n_to <= n_from) throw Error(ErrorKind::InvalidArgument, "n_to must exceed n_from");
  const auto count = static_cast<std::size_t>(n_to - n_from + 1);
  auto d = parallel_map<double>(count, [&](std::size_t i) {
    const int n = n_from + static_cast<int>(i);
    const SpectralPoint p = find_eigenvalue(n, k);
    return squared_distance(profile_F(build_mode(p, k, grid_size)), profile_G(n, grid_size));
  });
  std::vector<ClosenessRow> rows;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sum += d[i];
    rows.push_back({n_from + static_cast<int>(i), d[i], sum});
  }
  return rows;
}

}  // namespace beamspec

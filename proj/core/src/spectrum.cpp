#include "beamspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "beamspec/parallel.hpp"

namespace beamspec {
namespace {

constexpr int kMaxNewtonIterations = 50;
constexpr int kMaxHalvings = 8;
constexpr double kMinScanGain = 1e-4;

bool canonical(cplx tau) {
  // 0 <= arg tau <= pi/4, with slack for roots on the real axis (k = 0).
  const double slack = 1e-9 * std::abs(tau);
  return tau.real() > 0.0 && tau.imag() >= -slack && tau.imag() <= tau.real() + slack;
}

// Roots on the diagonal arg tau = pi/4 are the real eigenvalues; they come from
// the diagonal scan, not the rectangle sweep.
bool on_diagonal(cplx tau) { return std::abs(tau.imag() - tau.real()) <= 1e-8 * std::abs(tau); }

// D(tau) / (tau^3 cos tau cosh tau) at tau = r e^{i pi/4}. Real on the diagonal,
// 2/3 at r -> 0 and ~ -k / r^2 as r -> infinity.
double diagonal_function(double r, const Gain& k) {
  const double a = r / std::sqrt(2.0);
  const cplx tau{a, a};
  const CharValue d = eval_char(tau, k);
  const double s = d.scale_exponent;
  // |cos tau|^2 = cos tau cosh tau on the diagonal, carried with exp(-s).
  const double q = 0.5 * (0.5 * (std::exp(2.0 * a - s) + std::exp(-2.0 * a - s)) + std::cos(2.0 * a) * std::exp(-s));
  return (d.value / (tau * tau * tau)).real() / q;
}

int index_of(cplx tau) { return static_cast<int>(std::floor(tau.real() / kPi)); }

void sort_and_dedup(std::vector<SpectralPoint>& pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    const cplx la = a.lambda(), lb = b.lambda();
    if (la.imag() != lb.imag()) return la.imag() < lb.imag();
    return la.real() < lb.real();
  });
  std::vector<SpectralPoint> out;
  for (const auto& p : pts) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const SpectralPoint& q) {
      return std::abs(q.tau - p.tau) < kDedupRadius;
    });
    if (!dup) out.push_back(p);
  }
  pts = std::move(out);
}

// Winding of f along the straight segment a -> b, refined until each piece turns
// by less than pi/8.
double segment_winding(const Gain& k, cplx a, cplx fa, cplx b, cplx fb, int depth) {
  const double turn = std::arg(fb / fa);
  if (std::abs(turn) < kPi / 8.0 || depth > 48) return turn;
  const cplx m = 0.5 * (a + b);
  const cplx fm = eval_char_scaled(m, k);
  if (fm == cplx{}) throw Error(ErrorKind::NoConvergence, "root on the sweep contour");
  return segment_winding(k, a, fa, m, fm, depth + 1) + segment_winding(k, m, fm, b, fb, depth + 1);
}

}  // namespace

NewtonResult newton_polish(cplx seed, const Gain& k, double tol) {
  NewtonResult r;
  cplx tau = seed;
  cplx f = eval_char_scaled(tau, k);
  double res = std::abs(f);
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    if (normalized_residual(tau, k) < tol) {
      r.converged = true;
      r.iterations = it;
      break;
    }
    const cplx df = eval_char_derivative(tau, k);
    if (df == cplx{} || !std::isfinite(std::abs(df))) break;
    cplx step = f / df;
    cplx trial = tau - step;
    cplx ft = eval_char_scaled(trial, k);
    for (int h = 0; h < kMaxHalvings && !(std::abs(ft) < res); ++h) {
      step *= 0.5;
      trial = tau - step;
      ft = eval_char_scaled(trial, k);
    }
    tau = trial;
    f = ft;
    res = std::abs(f);
    r.iterations = it + 1;
  }
  r.residual = normalized_residual(tau, k);
  if (!r.converged && r.residual < tol) r.converged = true;
  r.tau = tau;
  return r;
}

int count_zeros(const Gain& k, const Rectangle& rect) {
  const cplx corners[5] = {
      {rect.re_min, rect.im_min}, {rect.re_max, rect.im_min},
      {rect.re_max, rect.im_max}, {rect.re_min, rect.im_max},
      {rect.re_min, rect.im_min}};
  constexpr double kMaxPiece = 0.05;
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[e + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / kMaxPiece)));
    cplx prev = a;
    cplx fprev = eval_char_scaled(prev, k);
    for (int i = 1; i <= pieces; ++i) {
      const cplx next = a + (b - a) * (static_cast<double>(i) / pieces);
      const cplx fnext = eval_char_scaled(next, k);
      if (fprev == cplx{} || fnext == cplx{}) {
        throw Error(ErrorKind::NoConvergence, "root on the sweep contour");
      }
      total += segment_winding(k, prev, fprev, next, fnext, 0);
      prev = next;
      fprev = fnext;
    }
  }
  const double winding = total / (2.0 * kPi);
  const double rounded = std::round(winding);
  if (std::abs(winding - rounded) > 0.1) {
    throw Error(ErrorKind::NoConvergence,
                "argument principle did not resolve (winding " + std::to_string(winding) + ")");
  }
  return static_cast<int>(rounded);
}

Rectangle low_mode_rectangle(const Gain& k) {
  double left = 0.5;
  if (k.damped()) left = std::min(0.5, 0.5 * std::sqrt(2.0 / k.value()));
  return {left, 3.0 * kPi, -1.0, 3.0 * kPi + 1.0};
}

LowModeSweep sweep_low_modes(const Gain& k, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  LowModeSweep sweep;
  sweep.rect = low_mode_rectangle(k);
  sweep.zero_count = count_zeros(k, sweep.rect);
  const Rectangle& r = sweep.rect;

  for (int grid : {40, 80, 160}) {
    const double dx = (r.re_max - r.re_min) / grid;
    const double dy = (r.im_max - r.im_min) / grid;
    auto rows = parallel_map<std::vector<NewtonResult>>(grid, [&](std::size_t i) {
      std::vector<NewtonResult> row;
      for (int j = 0; j < grid; ++j) {
        const cplx seed{r.re_min + (static_cast<double>(i) + 0.5) * dx,
                        r.im_min + (j + 0.5) * dy};
        row.push_back(newton_polish(seed, k, tol));
      }
      return row;
    });
    std::vector<cplx> roots;
    for (const auto& row : rows) {
      for (const auto& nr : row) {
        if (!nr.converged || !r.contains(nr.tau)) continue;
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](cplx z) {
          return std::abs(z - nr.tau) < kDedupRadius;
        });
        if (!dup) roots.push_back(nr.tau);
      }
    }
    if (static_cast<int>(roots.size()) == sweep.zero_count) {
      sweep.roots = roots;
      break;
    }
    if (grid == 160) {
      throw Error(ErrorKind::NoConvergence,
                  "low-mode sweep found " + std::to_string(roots.size()) + " roots, argument principle counts " +
                      std::to_string(sweep.zero_count));
    }
  }

  for (cplx tau : sweep.roots) {
    if (!canonical(tau) || on_diagonal(tau)) continue;
    const NewtonResult nr = newton_polish(tau, k, tol);
    SpectralPoint p;
    p.tau = nr.tau;
    p.residual = nr.residual;
    p.iterations = nr.iterations;
    p.n = index_of(p.tau);
    sweep.points.push_back(p);
  }
  std::vector<SpectralPoint> real = real_eigenvalues(k);
  sweep.points.insert(sweep.points.end(), real.begin(), real.end());
  sort_and_dedup(sweep.points);
  return sweep;
}

std::vector<SpectralPoint> real_eigenvalues(const Gain& k) {
  std::vector<SpectralPoint> out;
  if (!k.damped()) return out;
  const double kv = k.value();
  const double r_lo = 0.1 * std::min(1.0, 1.0 / std::sqrt(kv));
  if (kv < kMinScanGain) {
    throw Error(ErrorKind::InvalidArgument, "real-eigenvalue scan needs k >= 1e-4");
  }
  const double r_hi = 1.5 * std::max(std::sqrt(2.0) / kv, 2.0 / std::sqrt(kv)) + 5.0;
  double r0 = r_lo;
  double h0 = diagonal_function(r0, k);
  while (r0 < r_hi) {
    const double r1 = r0 + (r0 < 100.0 ? std::min(0.02, 0.01 * r0) : 0.2);
    const double h1 = diagonal_function(r1, k);
    if ((h0 > 0.0) != (h1 > 0.0) || h1 == 0.0) {
      double lo = r0, hi = r1, hlo = h0;
      for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double hm = diagonal_function(mid, k);
        if ((hm > 0.0) == (hlo > 0.0) && hm != 0.0) {
          lo = mid;
          hlo = hm;
        } else {
          hi = mid;
        }
      }
      const double a = 0.5 * (lo + hi) / std::sqrt(2.0);
      SpectralPoint p;
      p.n = 0;
      p.tau = cplx{a, a};
      p.residual = normalized_residual(p.tau, k);
      out.push_back(p);
    }
    r0 = r1;
    h0 = h1;
  }
  return out;
}

SpectralPoint find_eigenvalue(int n, const Gain& k, double tol) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "mode index must be >= 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  if (n == 0) {
    const std::vector<SpectralPoint> real = real_eigenvalues(k);
    if (real.empty()) {
      throw Error(ErrorKind::NoSuchMode, "no real eigenvalue at k = " + std::to_string(k.value()));
    }
    return real.front();
  }
  if (n < kAsymptoticMinIndex) {
    const LowModeSweep sweep = sweep_low_modes(k, tol);
    for (const auto& p : sweep.points) {
      if (p.n == n) return p;
    }
    throw Error(ErrorKind::NoSuchMode, "no eigenvalue with index " + std::to_string(n) +
                                           " at k = " + std::to_string(k.value()));
  }
  const double center = (n + 0.5) * kPi;
  const NewtonResult nr = newton_polish(cplx{center, 0.0}, k, tol);
  if (!nr.converged) {
    throw Error(ErrorKind::NoConvergence, "Newton did not converge for mode " + std::to_string(n));
  }
  if (std::abs(nr.tau - center) >= kPi / 2.0) {
    throw Error(ErrorKind::BasinEscape, "mode " + std::to_string(n) + " left its seed cell");
  }
  SpectralPoint p;
  p.n = n;
  p.tau = nr.tau;
  p.residual = nr.residual;
  p.iterations = nr.iterations;
  return p;
}

AsymptoteError asymptote_error(const SpectralPoint& p, const Gain& k) {
  AsymptoteError e;
  e.n = p.n;
  e.err_tau = std::abs(p.tau - (p.n + 0.5) * kPi);
  e.err_tau_quarter = std::abs(p.tau - (p.n + 0.25) * kPi);
  const double re = p.lambda().real();
  e.err_re_lambda = k.damped() ? std::abs(re + 2.0 / k.value()) : std::abs(re);
  return e;
}

SpectrumReport compute_spectrum(int n_max, const Gain& k, double tol) {
  if (n_max < kAsymptoticMinIndex) {
    throw Error(ErrorKind::InvalidArgument,
                "n_max must be >= " + std::to_string(kAsymptoticMinIndex));
  }
  SpectrumReport report;
  report.k = k;
  report.tolerance = tol;

  std::vector<SpectralPoint> pts = sweep_low_modes(k, tol).points;
  const std::size_t tail = static_cast<std::size_t>(n_max - kAsymptoticMinIndex + 1);
  auto seeded = parallel_map<SpectralPoint>(tail, [&](std::size_t i) {
    const int n = kAsymptoticMinIndex + static_cast<int>(i);
    try {
      return find_eigenvalue(n, k, tol);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " [index " + std::to_string(n) + "]");
    }
  });
  pts.insert(pts.end(), seeded.begin(), seeded.end());
  sort_and_dedup(pts);

  report.points = std::move(pts);
  for (const auto& p : report.points) report.asymptote_errors.push_back(asymptote_error(p, k));
  return report;
}

AbscissaDetail spectral_abscissa_detail(const SpectrumReport& report) {
  if (report.points.empty()) throw Error(ErrorKind::EmptyReport, "spectrum report is empty");
  AbscissaDetail d;
  d.value = -std::numeric_limits<double>::infinity();
  for (const auto& p : report.points) {
    const double re = p.lambda().real();
    if (re > d.value) {
      d.value = re;
      d.argmax_n = p.n;
    }
  }
  d.tail_limit = report.k.damped() ? -2.0 / report.k.value() : 0.0;
  return d;
}

double spectral_abscissa(const SpectrumReport& report) {
  return spectral_abscissa_detail(report).value;
}

}  // namespace beamspec

#include "beamspec/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>

#include "beamspec/parallel.hpp"

namespace beamspec {

using cd = std::complex<double>;


// ---------------------------------------------------------------- resolvent

template <class T>
StatePair<T> apply_resolvent(const StatePair<T>& in, const Gain& k) {
  in.check();
  const int M = in.grid.intervals;
  if (M < 32) throw Error(ErrorKind::InvalidArgument, "resolvent grid needs M >= 32");
  const double h = in.grid.h();
  const auto& f = in.phi;
  const auto& psi = in.psi;
  const auto at = [&](int j) { return f[static_cast<std::size_t>(j)]; };
  const T dphi1 = (25.0 * at(M) - 48.0 * at(M - 1) + 36.0 * at(M - 2) - 16.0 * at(M - 3) + 3.0 * at(M - 4)) /
                  (12.0 * h);

  const std::size_t n = in.grid.points();
  std::vector<T> g1(n), g3(n);
  std::vector<std::vector<T>> gp(4, std::vector<T>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double x = in.grid.x(static_cast<int>(j));
    const double om = 1.0 - x;
    g1[j] = om * psi[j];
    g3[j] = om * om * om * psi[j];
    double xp = 1.0;
    for (int p = 0; p < 4; ++p) {
      gp[static_cast<std::size_t>(p)][j] = xp * psi[j];
      xp *= x;
    }
  }
  const T I1 = simpson(g1, h);
  const T I3 = simpson(g3, h);
  std::vector<std::vector<T>> K;
  for (const auto& g : gp) K.push_back(cumulative_integral(g, h));

  StatePair<T> out(M);
  out.phi.assign(n, T{});
  for (std::size_t j = 0; j < n; ++j) {
    const double x = in.grid.x(static_cast<int>(j));
    const double x2 = x * x, x3 = x2 * x;
    const T inner = x3 * K[0][j] - 3.0 * x2 * K[1][j] + 3.0 * x * K[2][j] - K[3][j];
    out.phi[j] = (3.0 * x2 - x3) / 12.0 * I3 + (x3 - x2) / 4.0 * (I1 - k.value() * dphi1) - inner / 6.0;
  }
  out.psi = in.phi;
  return out;
}

template StatePair<double> apply_resolvent(const StatePair<double>&, const Gain&);
template StatePair<cd> apply_resolvent(const StatePair<cd>&, const Gain&);

Polynomial resolvent_polynomial(const PolynomialState& in, const Gain& k) {
  const Polynomial x{0.0, 1.0};
  const Polynomial om{1.0, -1.0};
  const double I3 = (om * om * om * in.psi).integrate(0.0, 1.0);
  const double I1 = (om * in.psi).integrate(0.0, 1.0);
  const double dphi1 = in.phi.derivative()(1.0);
  std::vector<Polynomial> K;
  Polynomial xp{1.0};
  for (int p = 0; p < 4; ++p) {
    K.push_back((xp * in.psi).antiderivative());
    xp = xp * x;
  }
  const Polynomial x2 = x * x, x3 = x2 * x;
  const Polynomial inner = x3 * K[0] - 3.0 * (x2 * K[1]) + 3.0 * (x * K[2]) - K[3];
  return (I3 / 12.0) * (3.0 * x2 - x3) + ((I1 - k.value() * dphi1) / 4.0) * (x3 - x2) -
         (1.0 / 6.0) * inner;
}

double ResolventReport::max_boundary() const { return std::max({bc_u0, bc_du0, bc_u1, bc_moment}); }

double ResolventReport::max_residual() const {
  return std::max({identity_residual, copy_residual, max_boundary()});
}

ResolventReport verify_resolvent(const PolynomialState& in, const Gain& k) {
  ResolventReport r;
  r.u = resolvent_polynomial(in, k);
  const Polynomial minus_u4 = (-1.0) * r.u.derivative(4);
  r.identity_residual = (minus_u4 - in.psi).max_abs(0.0, 1.0);
  r.copy_residual = 0.0;
  r.bc_u0 = std::abs(r.u(0.0));
  r.bc_du0 = std::abs(r.u.derivative()(0.0));
  r.bc_u1 = std::abs(r.u(1.0));
  r.bc_moment = std::abs(r.u.derivative(2)(1.0) + k.value() * in.phi.derivative()(1.0));
  return r;
}

// ---------------------------------------------------------------- generator

DiscreteGenerator::DiscreteGenerator(int M, const Gain& k)
    : M_(M), k_(k), h_(1.0 / M), size_(2 * (M - 1) + (k.damped() ? 1 : 0)) {
  if (M < 64) throw Error(ErrorKind::InvalidArgument, "generator needs M >= 64");
  build_entries();
}

DiscreteGenerator build_generator(int M, const Gain& k) { return DiscreteGenerator(M, k); }

template <class T>
void DiscreteGenerator::moments(const std::vector<T>& z, std::vector<T>& m) const {
  const double ih2 = 1.0 / (h_ * h_);
  m.assign(static_cast<std::size_t>(M_) + 1, T{});
  const auto w = [&](int j) -> T {
    return (j <= 0 || j >= M_) ? T{} : z[static_cast<std::size_t>(w_index(j))];
  };
  m[0] = 2.0 * w(1) * ih2;
  for (int j = 1; j < M_; ++j) m[static_cast<std::size_t>(j)] = (w(j + 1) - 2.0 * w(j) + w(j - 1)) * ih2;
  if (has_moment()) m[static_cast<std::size_t>(M_)] = z[static_cast<std::size_t>(moment_index())];
}

template <class T>
std::vector<T> DiscreteGenerator::apply(const std::vector<T>& z) const {
  if (static_cast<int>(z.size()) != size_) throw Error(ErrorKind::ShapeMismatch, "generator input size");
  std::vector<T> m;
  moments(z, m);
  const double ih2 = 1.0 / (h_ * h_);
  std::vector<T> out(z.size(), T{});
  for (int j = 1; j < M_; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    out[static_cast<std::size_t>(w_index(j))] = z[static_cast<std::size_t>(v_index(j))];
    out[static_cast<std::size_t>(v_index(j))] = -(m[jj + 1] - 2.0 * m[jj] + m[jj - 1]) * ih2;
  }
  if (has_moment()) {
    const T vlast = z[static_cast<std::size_t>(v_index(M_ - 1))];
    out[static_cast<std::size_t>(moment_index())] =
        2.0 * vlast * ih2 - 2.0 * m[static_cast<std::size_t>(M_)] / (k_.value() * h_);
  }
  return out;
}

template std::vector<double> DiscreteGenerator::apply(const std::vector<double>&) const;
template std::vector<cd> DiscreteGenerator::apply(const std::vector<cd>&) const;

cd DiscreteGenerator::energy_inner(const std::vector<cd>& a, const std::vector<cd>& b) const {
  if (static_cast<int>(a.size()) != size_ || static_cast<int>(b.size()) != size_) {
    throw Error(ErrorKind::ShapeMismatch, "energy product size");
  }
  std::vector<cd> ma, mb;
  moments(a, ma);
  moments(b, mb);
  cd acc = 0.5 * ma[0] * std::conj(mb[0]);
  for (int j = 1; j < M_; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    acc += ma[jj] * std::conj(mb[jj]);
    const auto iv = static_cast<std::size_t>(v_index(j));
    acc += a[iv] * std::conj(b[iv]);
  }
  acc *= h_;
  if (has_moment()) {
    const auto mi = static_cast<std::size_t>(M_);
    acc += 0.5 * h_ * ma[mi] * std::conj(mb[mi]);
  }
  return acc;
}

double DiscreteGenerator::energy(const std::vector<cd>& z) const { return 0.5 * energy_inner(z, z).real(); }

double DiscreteGenerator::energy(const std::vector<double>& z) const {
  if (static_cast<int>(z.size()) != size_) throw Error(ErrorKind::ShapeMismatch, "energy size");
  std::vector<double> m;
  moments(z, m);
  double acc = 0.5 * m[0] * m[0];
  for (int j = 1; j < M_; ++j) {
    const double mj = m[static_cast<std::size_t>(j)];
    const double vj = z[static_cast<std::size_t>(v_index(j))];
    acc += mj * mj + vj * vj;
  }
  acc *= h_;
  if (has_moment()) acc += 0.5 * h_ * m[static_cast<std::size_t>(M_)] * m[static_cast<std::size_t>(M_)];
  return 0.5 * acc;
}

double DiscreteGenerator::boundary_power(const std::vector<double>& z) const {
  if (!has_moment()) return 0.0;
  const double mm = z[static_cast<std::size_t>(moment_index())];
  return mm * mm / k_.value();
}

double DiscreteGenerator::boundary_power(const std::vector<cd>& z) const {
  if (!has_moment()) return 0.0;
  return std::norm(z[static_cast<std::size_t>(moment_index())]) / k_.value();
}

void DiscreteGenerator::build_entries() {
  std::map<std::pair<int, int>, double> acc;
  const double ih2 = 1.0 / (h_ * h_);
  // Moment m_i as a combination of state entries.
  const auto moment_terms = [&](int i) {
    std::vector<std::pair<int, double>> t;
    if (i == 0) {
      t.emplace_back(w_index(1), 2.0 * ih2);
    } else if (i < M_) {
      if (i + 1 < M_) t.emplace_back(w_index(i + 1), ih2);
      t.emplace_back(w_index(i), -2.0 * ih2);
      if (i - 1 > 0) t.emplace_back(w_index(i - 1), ih2);
    } else if (has_moment()) {
      t.emplace_back(moment_index(), 1.0);
    }
    return t;
  };
  for (int j = 1; j < M_; ++j) {
    acc[{w_index(j), v_index(j)}] += 1.0;
    const int row = v_index(j);
    const double coef[3] = {-ih2, 2.0 * ih2, -ih2};
    for (int d = -1; d <= 1; ++d) {
      for (const auto& [col, c] : moment_terms(j + d)) acc[{row, col}] += coef[d + 1] * c;
    }
  }
  if (has_moment()) {
    acc[{moment_index(), v_index(M_ - 1)}] += 2.0 * ih2;
    acc[{moment_index(), moment_index()}] += -2.0 / (k_.value() * h_);
  }
  entries_.clear();
  kl_ = ku_ = 0;
  for (const auto& [rc, v] : acc) {
    if (v == 0.0) continue;
    entries_.push_back({rc.first, rc.second, v});
    kl_ = std::max(kl_, rc.first - rc.second);
    ku_ = std::max(ku_, rc.second - rc.first);
  }
}

template <class T>
BandedMatrix<T> DiscreteGenerator::assemble(T alpha, T beta) const {
  BandedMatrix<T> B(size_, kl_, ku_);
  for (int i = 0; i < size_; ++i) B.add(i, i, alpha);
  for (const auto& e : entries_) B.add(e.row, e.col, beta * e.value);
  return B;
}

template BandedMatrix<double> DiscreteGenerator::assemble(double, double) const;
template BandedMatrix<cd> DiscreteGenerator::assemble(cd, cd) const;

template <class T>
std::vector<T> DiscreteGenerator::from_state(const StatePair<T>& s) const {
  s.check();
  if (s.grid.intervals != M_) throw Error(ErrorKind::ShapeMismatch, "state grid differs from generator grid");
  std::vector<T> z(static_cast<std::size_t>(size_), T{});
  for (int j = 1; j < M_; ++j) {
    z[static_cast<std::size_t>(w_index(j))] = s.phi[static_cast<std::size_t>(j)];
    z[static_cast<std::size_t>(v_index(j))] = s.psi[static_cast<std::size_t>(j)];
  }
  if (has_moment()) {
    const auto p = [&](int j) { return s.psi[static_cast<std::size_t>(j)]; };
    const T dv1 = (3.0 * p(M_) - 4.0 * p(M_ - 1) + p(M_ - 2)) / (2.0 * h_);
    z[static_cast<std::size_t>(moment_index())] = -k_.value() * dv1;
  }
  return z;
}

template <class T>
StatePair<T> DiscreteGenerator::to_state(const std::vector<T>& z) const {
  if (static_cast<int>(z.size()) != size_) throw Error(ErrorKind::ShapeMismatch, "state vector size");
  StatePair<T> s(M_);
  for (int j = 1; j < M_; ++j) {
    s.phi[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(w_index(j))];
    s.psi[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(v_index(j))];
  }
  return s;
}

template std::vector<double> DiscreteGenerator::from_state(const StatePair<double>&) const;
template std::vector<cd> DiscreteGenerator::from_state(const StatePair<cd>&) const;
template StatePair<double> DiscreteGenerator::to_state(const std::vector<double>&) const;
template StatePair<cd> DiscreteGenerator::to_state(const std::vector<cd>&) const;

// ---------------------------------------------------------------- oracle

OracleResult oracle_eigenpair(const DiscreteGenerator& gen, cd shift) {
  constexpr int kMaxIterations = 200;
  constexpr double kTol = 1e-10;
  if (!std::isfinite(shift.real()) || !std::isfinite(shift.imag())) {
    throw Error(ErrorKind::InvalidArgument, "shift must be finite");
  }
  std::unique_ptr<BandedLU<cd>> lu;
  try {
    lu = std::make_unique<BandedLU<cd>>(gen.assemble<cd>(-shift, cd{1.0, 0.0}));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::LinearSolveFailure) throw;
    throw Error(ErrorKind::SingularShift, "A_h - shift I is singular");
  }

  const auto n = static_cast<std::size_t>(gen.size());
  std::vector<cd> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    z[i] = cd{1.0 + 0.5 * std::sin(1.7 * t), 0.3 * std::cos(0.9 * t)};
  }
  const auto normalize = [](std::vector<cd>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    s = std::sqrt(s);
    for (auto& c : v) c /= s;
    return s;
  };
  normalize(z);

  OracleResult res;
  cd prev = shift;
  bool have_prev = false;
  for (int it = 1; it <= kMaxIterations; ++it) {
    std::vector<cd> y = lu->solve(z);
    cd zy{};
    for (std::size_t i = 0; i < n; ++i) zy += std::conj(z[i]) * y[i];
    if (!std::isfinite(std::abs(zy))) throw Error(ErrorKind::SingularShift, "inverse iteration overflowed");
    normalize(y);
    z = std::move(y);
    if (zy == cd{}) continue;
    const cd est = shift + 1.0 / zy;
    if (have_prev && std::abs(est - prev) < kTol * std::max(1.0, std::abs(est))) {
      res.eigenvalue = est;
      res.iterations = it;
      const double en = std::sqrt(gen.energy_inner(z, z).real());
      for (auto& c : z) c /= en;
      res.vector = std::move(z);
      return res;
    }
    prev = est;
    have_prev = true;
  }
  throw Error(ErrorKind::NoConvergence, "inverse iteration did not converge in 200 iterations");
}

cd oracle_eigenvalue(const DiscreteGenerator& gen, cd shift) { return oracle_eigenpair(gen, shift).eigenvalue; }

ResolvedAbscissa resolved_abscissa(const DiscreteGenerator& gen, const SpectrumReport& report, int n_max) {
  std::vector<SpectralPoint> seeds;
  for (const auto& p : report.points) {
    if (p.n <= n_max) seeds.push_back(p);
  }
  if (seeds.empty()) throw Error(ErrorKind::EmptyReport, "no seeds for the resolved branch");
  ResolvedAbscissa r;
  r.eigenvalues = parallel_map<cd>(seeds.size(), [&](std::size_t i) {
    return oracle_eigenvalue(gen, seeds[i].lambda());
  });
  r.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    r.indices.push_back(seeds[i].n);
    if (r.eigenvalues[i].real() > r.value) {
      r.value = r.eigenvalues[i].real();
      r.argmax_n = seeds[i].n;
    }
  }
  return r;
}

}  // namespace beamspec

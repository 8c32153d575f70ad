#include "beamspec/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "beamspec/modes.hpp"

namespace beamspec {

using cd = std::complex<double>;

InitialCondition InitialCondition::parse(const std::string& text) {
  if (text == "poly") return poly();
  if (text == "zero") return zero();
  if (text == "mixed") return mixed();
  if (text.rfind("mode", 0) == 0) {
    std::string rest = text.substr(4);
    rest.erase(0, rest.find_first_not_of(" _-"));
    int j = -1;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), j);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && j >= 0) return eigenmode(j);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown initial condition '" + text + "'");
}

std::string InitialCondition::name() const {
  switch (kind) {
    case Kind::Poly: return "poly";
    case Kind::Zero: return "zero";
    case Kind::Mixed: return "mixed";
    case Kind::Mode: return "mode " + std::to_string(mode);
  }
  return "?";
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  if (!(t_final >= 10.0 * dt) || !std::isfinite(t_final)) {
    throw Error(ErrorKind::InvalidArgument, "t_final must be >= 10 dt");
  }
  if (M < 64) throw Error(ErrorKind::InvalidArgument, "M must be >= 64");
  if (record_every < 1) throw Error(ErrorKind::InvalidArgument, "record_every must be >= 1");
}

namespace {

std::vector<double> poly_state(const DiscreteGenerator& gen) {
  StatePair<double> s(gen.M());
  for (int j = 0; j <= gen.M(); ++j) {
    const double x = s.grid.x(j);
    s.phi[static_cast<std::size_t>(j)] = x * x * (1.0 - x) * (1.0 - x);
  }
  return gen.from_state(s);
}

std::vector<double> mode_state(const DiscreteGenerator& gen, int j) {
  const SpectralPoint p = find_eigenvalue(j, gen.gain());
  const OracleResult eig = oracle_eigenpair(gen, p.lambda());
  cd overlap{};
  for (int i = 1; i < gen.M(); ++i) {
    const cd cont = mode_value(p.tau, static_cast<double>(i) * gen.h(), 0);
    overlap += std::conj(eig.vector[static_cast<std::size_t>(gen.w_index(i))]) * cont;
  }
  const cd phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cd{1.0, 0.0};
  std::vector<double> z(eig.vector.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (eig.vector[i] * phase).real();
  const double e = gen.energy(z);
  if (!(e > 0.0)) throw Error(ErrorKind::DegenerateMode, "real part of the eigenvector vanishes");
  const double s = 1.0 / std::sqrt(e);
  for (auto& v : z) v *= s;
  return z;
}

}  // namespace

std::vector<double> initial_state(const DiscreteGenerator& gen, const InitialCondition& ic) {
  switch (ic.kind) {
    case InitialCondition::Kind::Zero: return std::vector<double>(static_cast<std::size_t>(gen.size()), 0.0);
    case InitialCondition::Kind::Poly: return poly_state(gen);
    case InitialCondition::Kind::Mode: return mode_state(gen, ic.mode);
    case InitialCondition::Kind::Mixed: {
      std::vector<double> z = poly_state(gen);
      std::vector<double> m = mode_state(gen, 3);
      const double s = std::sqrt(gen.energy(z));
      for (std::size_t i = 0; i < z.size(); ++i) z[i] += s * m[i];
      return z;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown initial condition");
}

EnergyTrace simulate(const SimConfig& config) {
  config.validate();
  const DiscreteGenerator gen(config.M, config.k);
  const BandedMatrix<double> lhs = gen.assemble<double>(1.0, -0.5 * config.dt);
  const BandedMatrix<double> rhs_op = gen.assemble<double>(1.0, 0.5 * config.dt);
  const BandedLU<double> lu(lhs);

  std::vector<double> z = initial_state(gen, config.ic);
  EnergyTrace trace;
  const auto record = [&](double t) {
    trace.times.push_back(t);
    trace.energy.push_back(gen.energy(z));
    trace.boundary_power.push_back(gen.boundary_power(z));
  };
  record(0.0);

  const long steps = std::lround(config.t_final / config.dt);
  for (long s = 1; s <= steps; ++s) {
    const std::vector<double> rhs = rhs_op.matvec(z);
    std::vector<double> x = lu.solve(rhs);
    // One step of iterative refinement keeps round-off drift of the
    // conservative case below 1e-10 per step.
    const std::vector<double> lx = lhs.matvec(x);
    std::vector<double> r(rhs.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - lx[i];
    lu.solve_in_place(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += r[i];
    z = std::move(x);
    if (s % config.record_every == 0 || s == steps) record(static_cast<double>(s) * config.dt);
  }
  return trace;
}

double dissipation_check(const EnergyTrace& trace) {
  const std::size_t n = trace.times.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "dissipation check needs >= 3 records");
  const double e0 = trace.energy.front();
  if (e0 == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dedt = (trace.energy[i + 1] - trace.energy[i - 1]) / (trace.times[i + 1] - trace.times[i - 1]);
    worst = std::max(worst, std::abs(dedt + trace.boundary_power[i]) / e0);
  }
  return worst;
}

double max_energy_increase(const EnergyTrace& trace) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < trace.energy.size(); ++i) {
    const double prev = trace.energy[i - 1];
    if (prev == 0.0) {
      worst = std::max(worst, trace.energy[i] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      continue;
    }
    worst = std::max(worst, trace.energy[i] / prev - 1.0);
  }
  return worst;
}

std::pair<double, double> default_window(const EnergyTrace& trace) {
  if (trace.times.empty()) throw Error(ErrorKind::InvalidArgument, "empty trace");
  const double t0 = trace.times.front(), t1 = trace.times.back();
  return {t0 + 0.2 * (t1 - t0), t1};
}

DecayEstimate fit_decay(const EnergyTrace& trace, std::pair<double, double> window) {
  if (trace.times.empty()) throw Error(ErrorKind::InvalidArgument, "empty trace");
  const double eps = 1e-9 * std::max(1.0, std::abs(trace.times.back()));
  if (!(window.first < window.second) || window.first < trace.times.front() - eps ||
      window.second > trace.times.back() + eps) {
    throw Error(ErrorKind::InvalidArgument, "fit window outside the trace");
  }
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < window.first - eps || t > window.second + eps) continue;
    if (!(trace.energy[i] > 0.0)) {
      throw Error(ErrorKind::NonpositiveEnergy, "energy <= 0 inside the fit window");
    }
    ts.push_back(t);
    ys.push_back(std::log(trace.energy[i]));
  }
  if (ts.size() < 2) throw Error(ErrorKind::InvalidArgument, "fit window holds fewer than two records");
  const double n = static_cast<double>(ts.size());
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tm += ts[i];
    ym += ys[i];
  }
  tm /= n;
  ym /= n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    sty += (ts[i] - tm) * (ys[i] - ym);
  }
  const double slope = sty / stt;
  const double intercept = ym - slope * tm;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - (intercept + slope * ts[i]);
    ss += r * r;
  }
  DecayEstimate d;
  d.mu_hat = -slope;
  d.M_hat = trace.energy.front() > 0.0 ? std::exp(intercept) / trace.energy.front() : 0.0;
  d.window = window;
  d.residual = std::sqrt(ss / n);
  return d;
}

}  // namespace beamspec

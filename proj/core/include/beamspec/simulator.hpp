#pragma once

// Closed-loop beam w_tt + w_xxxx = 0, w(0) = w_x(0) = w(1) = 0,
// w_xx(1, t) = -k w_xt(1, t), advanced with the trapezoidal rule on the
// discrete generator.

#include <string>
#include <utility>
#include <vector>

#include "beamspec/operator.hpp"

namespace beamspec {

struct InitialCondition {
  enum class Kind { Poly, Mode, Mixed, Zero };
  Kind kind = Kind::Poly;
  int mode = 1;  // for Kind::Mode

  static InitialCondition poly() { return {Kind::Poly, 0}; }
  static InitialCondition zero() { return {Kind::Zero, 0}; }
  static InitialCondition mixed() { return {Kind::Mixed, 3}; }
  static InitialCondition eigenmode(int j) { return {Kind::Mode, j}; }

  /// "poly", "zero", "mixed", "mode <j>" or "mode<j>".
  static InitialCondition parse(const std::string& text);
  std::string name() const;
};

struct SimConfig {
  int M = 200;
  double dt = 1e-3;
  double t_final = 5.0;
  Gain k{1.0};
  InitialCondition ic = InitialCondition::poly();
  int record_every = 1;

  void validate() const;
};

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> boundary_power;
};

/// Generator vector for an initial condition. "poly": w0 = x^2 (1-x)^2, w1 = 0.
/// "mode j": real part of the A_h eigenvector nearest lambda_j, phase-aligned to
/// the sampled continuous mode, unit energy. "mixed": poly plus mode 3 at equal
/// energy.
std::vector<double> initial_state(const DiscreteGenerator& gen, const InitialCondition& ic);

/// Throws LinearSolveFailure if I - (dt/2) A_h cannot be factored.
EnergyTrace simulate(const SimConfig& config);

/// max over interior records of |(E_{i+1} - E_{i-1}) / (t_{i+1} - t_{i-1}) + P_i| / E_0.
double dissipation_check(const EnergyTrace& trace);

/// Largest relative increase E_{j+1} / E_j - 1 between consecutive records.
double max_energy_increase(const EnergyTrace& trace);

struct DecayEstimate {
  double mu_hat = 0.0;
  double M_hat = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  double residual = 0.0;
};

/// Last 80% of the run.
std::pair<double, double> default_window(const EnergyTrace& trace);

/// Least-squares line through log E on the window: mu_hat = -slope,
/// M_hat = exp(intercept) / E(0).
DecayEstimate fit_decay(const EnergyTrace& trace, std::pair<double, double> window);

}  // namespace beamspec

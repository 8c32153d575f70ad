#pragma once

// Closed-form inverse of the generator A(phi, psi) = (psi, -phi'''') on
// H = H^2_e x L^2 with phi(0) = phi'(0) = phi(1) = 0, phi''(1) = -k psi'(1):
//
//   A^{-1}(phi, psi) = (u, phi),
//   u(x) = (3x^2 - x^3)/12 int (1-s)^3 psi + (x^3 - x^2)/4 (int (1-s) psi - k phi'(1))
//          - 1/6 int_0^x (x-s)^3 psi(s) ds,
//
// and a finite-difference generator A_h on the same state space.

#include <complex>
#include <cstdint>
#include <vector>

#include "beamspec/banded.hpp"
#include "beamspec/polynomial.hpp"
#include "beamspec/quadrature.hpp"
#include "beamspec/spectrum.hpp"

namespace beamspec {

/// Grid samples of a state (phi, psi) on M + 1 nodes.
template <class T>
struct StatePair {
  UniformGrid grid{1};
  std::vector<T> phi;
  std::vector<T> psi;

  StatePair() = default;
  explicit StatePair(int M) : grid(M), phi(grid.points(), T{}), psi(grid.points(), T{}) {}

  void check() const {
    if (phi.size() != grid.points() || psi.size() != grid.points()) {
      throw Error(ErrorKind::ShapeMismatch, "state samples do not match the grid");
    }
  }
};

/// Sampled A^{-1}: Simpson moments, cubic-exact cumulative integrals and a
/// fourth-order one-sided phi'(1). Requires M >= 32.
template <class T>
StatePair<T> apply_resolvent(const StatePair<T>& in, const Gain& k);

extern template StatePair<double> apply_resolvent(const StatePair<double>&, const Gain&);
extern template StatePair<std::complex<double>> apply_resolvent(const StatePair<std::complex<double>>&, const Gain&);

struct PolynomialState {
  Polynomial phi;
  Polynomial psi;
};

struct ResolventReport {
  Polynomial u;                    // first component of A^{-1}(phi, psi)
  double identity_residual = 0.0;  // max |(-u'''') - psi| on [0, 1]
  double copy_residual = 0.0;      // second output component vs phi (exactly 0 by construction)
  double bc_u0 = 0.0;              // |u(0)|
  double bc_du0 = 0.0;             // |u'(0)|
  double bc_u1 = 0.0;              // |u(1)|
  double bc_moment = 0.0;          // |u''(1) + k phi'(1)|

  double max_boundary() const;
  double max_residual() const;
};

/// Closed form evaluated in exact polynomial arithmetic, then A applied
/// analytically.
ResolventReport verify_resolvent(const PolynomialState& in, const Gain& k);

/// Only the polynomial u of the closed form.
Polynomial resolvent_polynomial(const PolynomialState& in, const Gain& k);

struct Triplet {
  int row, col;
  double value;
};

/// Finite-difference generator on the state (w_j, v_j), j = 1..M-1, plus the
/// boundary moment m_M = w''(1) when k > 0. Interior moments use central
/// differences with a ghost node enforcing w'(0) = 0; the right boundary moment
/// obeys m_M + (k h / 2) dm_M/dt = k v_{M-1} / h, the central-ghost form of
/// w''(1) = -k w_t'(1). In the energy product below Re<A_h z, z> = -|m_M|^2 / k.
class DiscreteGenerator {
 public:
  DiscreteGenerator(int M, const Gain& k);

  int M() const { return M_; }
  double h() const { return h_; }
  const Gain& gain() const { return k_; }
  int size() const { return size_; }
  bool has_moment() const { return k_.damped(); }

  int w_index(int j) const { return 2 * (j - 1); }
  int v_index(int j) const { return 2 * (j - 1) + 1; }
  int moment_index() const { return 2 * (M_ - 1); }

  template <class T>
  std::vector<T> apply(const std::vector<T>& z) const;

  /// Sum over j = 0..M-1 of w_j m_j conj(m_j') h (w_0 = 1/2, else 1) + sum v conj(v') h + (h/2) m_M conj(m_M').
  std::complex<double> energy_inner(const std::vector<std::complex<double>>& a,
                                    const std::vector<std::complex<double>>& b) const;
  double energy(const std::vector<double>& z) const;
  double energy(const std::vector<std::complex<double>>& z) const;
  /// k |v'(1)|^2 = |m_M|^2 / k.
  double boundary_power(const std::vector<double>& z) const;
  double boundary_power(const std::vector<std::complex<double>>& z) const;

  const std::vector<Triplet>& entries() const { return entries_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  /// alpha I + beta A_h in band storage.
  template <class T>
  BandedMatrix<T> assemble(T alpha, T beta) const;

  /// Sampled state -> generator vector. m_M = -k v'(1) with the second-order
  /// one-sided difference (3 v_M - 4 v_{M-1} + v_{M-2}) / (2h).
  template <class T>
  std::vector<T> from_state(const StatePair<T>& s) const;
  template <class T>
  StatePair<T> to_state(const std::vector<T>& z) const;

 private:
  template <class T>
  void moments(const std::vector<T>& z, std::vector<T>& m) const;
  void build_entries();

  int M_;
  Gain k_;
  double h_;
  int size_;
  int kl_ = 0, ku_ = 0;
  std::vector<Triplet> entries_;
};

DiscreteGenerator build_generator(int M, const Gain& k);

struct OracleResult {
  std::complex<double> eigenvalue{};
  std::vector<std::complex<double>> vector;  // unit energy norm
  int iterations = 0;
};

/// Shifted inverse iteration with a Rayleigh-type update. Converged when
/// successive estimates differ by < 1e-10 max(1, |lambda|); NoConvergence after
/// 200 iterations, SingularShift when A_h - shift I cannot be factored.
OracleResult oracle_eigenpair(const DiscreteGenerator& gen, std::complex<double> shift);
std::complex<double> oracle_eigenvalue(const DiscreteGenerator& gen, std::complex<double> shift);

struct ResolvedAbscissa {
  double value = 0.0;
  int argmax_n = 0;
  std::vector<std::complex<double>> eigenvalues;  // parallel to the seeds used
  std::vector<int> indices;
};

/// Max Re over oracle eigenvalues seeded at the root-finder lambda_n, n <= n_max.
/// Grid-scale modes of A_h are not part of this branch.
ResolvedAbscissa resolved_abscissa(const DiscreteGenerator& gen, const SpectrumReport& report,
                                   int n_max = 8);

}  // namespace beamspec

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "beamspec/modes.hpp"
#include "beamspec/operator.hpp"
#include "oracles.hpp"
#ifdef BEAMSPEC_HAVE_EIGEN
#include "dense_eigen.hpp"
#endif

using namespace beamspec;
using cd = std::complex<double>;

namespace {

// u = -int_0^x (x-s)^3 psi(s) ds / 6 + c2 x^2 + c3 x^3 with u(1) = 0 and
// u''(1) = -k phi'(1), integrals by Gauss-Legendre.
double cauchy_u(const std::function<double(double)>& psi, double k, double dphi1, double x) {
  auto P = [&](double y) {
    return y == 0.0 ? 0.0 : oracle::integrate([&](double s) { return (y - s) * (y - s) * (y - s) * psi(s) / 6.0; }, 0.0, y, 40);
  };
  const double P1 = P(1.0);
  const double P2 = oracle::integrate([&](double s) { return (1.0 - s) * psi(s); }, 0.0, 1.0, 40);
  const double c3 = (-k * dphi1 + P2 - 2.0 * P1) / 4.0;
  const double c2 = P1 - c3;
  return -P(x) + c2 * x * x + c3 * x * x * x;
}

template <class F, class G>
StatePair<double> sampled(int M, F phi, G psi) {
  StatePair<double> s(M);
  for (int j = 0; j <= M; ++j) {
    s.phi[static_cast<std::size_t>(j)] = phi(s.grid.x(j));
    s.psi[static_cast<std::size_t>(j)] = psi(s.grid.x(j));
  }
  return s;
}

std::vector<double> random_vector(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> z(static_cast<std::size_t>(n));
  for (auto& v : z) v = u(rng);
  return z;
}

std::vector<cd> to_complex(const std::vector<double>& z) { return {z.begin(), z.end()}; }

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("operator") {
  TEST_CASE("resolvent of zero is zero") {
    const StatePair<double> out = apply_resolvent(StatePair<double>(64), Gain(1.0));
    for (std::size_t j = 0; j < out.phi.size(); ++j) {
      CHECK(out.phi[j] == 0.0);
      CHECK(out.psi[j] == 0.0);
    }
  }

  TEST_CASE("resolvent of (0, 1) is the closed form quartic") {
    for (double k : {0.5, 1.0, 2.0}) {
      const auto out = apply_resolvent(sampled(64, [](double) { return 0.0; }, [](double) { return 1.0; }), Gain(k));
      for (int j = 0; j <= 64; ++j) {
        CHECK(std::abs(out.phi[static_cast<std::size_t>(j)] - oracle::resolvent_psi1(j / 64.0)) <= 1e-12);
        CHECK(out.psi[static_cast<std::size_t>(j)] == 0.0);
      }
    }
  }

  TEST_CASE("resolvent of (x^2 (1-x), 0) carries the boundary moment") {
    const double k = 1.0;
    const auto in = sampled(64, [](double x) { return x * x * (1.0 - x); }, [](double) { return 0.0; });
    const auto out = apply_resolvent(in, Gain(k));
    for (int j = 0; j <= 64; ++j) {
      const double x = j / 64.0;
      CHECK(std::abs(out.phi[static_cast<std::size_t>(j)] - k * (x * x * x - x * x) / 4.0) <= 1e-13);
      CHECK(out.psi[static_cast<std::size_t>(j)] == in.phi[static_cast<std::size_t>(j)]);
    }
  }

  TEST_CASE("sampled resolvent matches the Cauchy formula at fourth order") {
    const auto psi = [](double s) { return std::sin(3.0 * s) + s * s; };
    const auto phi = [](double x) { return x * x * (1.0 - x) * std::cos(x); };
    const double dphi1 = -std::cos(1.0);
    std::vector<double> errs;
    for (int M : {32, 64, 128, 256, 512}) {
      const auto out = apply_resolvent(sampled(M, phi, psi), Gain(2.0));
      double err = 0.0;
      for (int j = 0; j <= M; j += M / 8) {
        const double x = static_cast<double>(j) / M;
        err = std::max(err, std::abs(out.phi[static_cast<std::size_t>(j)] - cauchy_u(psi, 2.0, dphi1, x)));
      }
      CAPTURE(M);
      CHECK(err <= 1e-7);
      errs.push_back(err);
    }
    CHECK(std::log2(errs.front() / errs.back()) / 4.0 > 3.5);
  }

  TEST_CASE("complex resolvent is linear in the real and imaginary parts") {
    const auto a = sampled(64, [](double x) { return x * x * (1.0 - x); }, [](double s) { return std::exp(s); });
    const auto b = sampled(64, [](double x) { return x * x * (1.0 - x) * x; }, [](double s) { return std::cos(s); });
    StatePair<cd> c(64);
    for (std::size_t j = 0; j < c.phi.size(); ++j) {
      c.phi[j] = {a.phi[j], b.phi[j]};
      c.psi[j] = {a.psi[j], b.psi[j]};
    }
    const auto ra = apply_resolvent(a, Gain(1.0)), rb = apply_resolvent(b, Gain(1.0));
    const auto rc = apply_resolvent(c, Gain(1.0));
    for (std::size_t j = 0; j < c.phi.size(); ++j) CHECK(std::abs(rc.phi[j] - cd{ra.phi[j], rb.phi[j]}) <= 1e-15);
  }

  TEST_CASE("resolvent precondition and shape checks") {
    CHECK_THROWS_AS(apply_resolvent(StatePair<double>(16), Gain(1.0)), Error);
    StatePair<double> bad(64);
    bad.psi.pop_back();
    try {
      apply_resolvent(bad, Gain(1.0));
      FAIL("expected ShapeMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ShapeMismatch);
    }
  }

  TEST_CASE("A applied to the resolvent is the identity on polynomials") {
    const Polynomial x2_1mx{0.0, 0.0, 1.0, -1.0};
    for (double k : {0.5, 1.0, 2.0, 3.0})
      for (int p = 0; p <= 3; ++p)
        for (const Polynomial& phi : {Polynomial{}, x2_1mx}) {
          const ResolventReport r = verify_resolvent({phi, Polynomial::monomial(p)}, Gain(k));
          CHECK(r.identity_residual <= 1e-12);
          CHECK(r.max_boundary() <= 1e-12);
          CHECK(r.copy_residual == 0.0);
        }
    const ResolventReport zero = verify_resolvent({Polynomial{}, Polynomial{}}, Gain(1.0));
    CHECK(zero.max_residual() == 0.0);
    CHECK(zero.max_boundary() == 0.0);
  }

  TEST_CASE("exact polynomial resolvent matches the Cauchy formula") {
    const Polynomial psi{1.0, -2.0, 0.5, 3.0};
    const Polynomial phi{0.0, 0.0, 1.0, -1.0};
    const Polynomial u = resolvent_polynomial({phi, psi}, Gain(1.5));
    for (double x : {0.1, 0.4, 0.8, 1.0})
      CHECK(std::abs(u(x) - cauchy_u([&](double s) { return psi(s); }, 1.5, phi.derivative()(1.0), x)) <= 1e-13);
    const Polynomial one = resolvent_polynomial({Polynomial{}, Polynomial{1.0}}, Gain(1.0));
    CHECK(std::abs(one(0.37) - oracle::resolvent_psi1(0.37)) <= 1e-15);
  }

  TEST_CASE("generator shape") {
    const DiscreteGenerator g(64, Gain(1.0));
    CHECK(g.size() == 2 * 63 + 1);
    CHECK(g.kl() == 5);
    CHECK(g.ku() == 3);
    CHECK(DiscreteGenerator(64, Gain(0.0)).size() == 2 * 63);
    CHECK_THROWS_AS(DiscreteGenerator(32, Gain(1.0)), Error);
    for (const auto& e : g.entries()) {
      CHECK(e.row - e.col <= g.kl());
      CHECK(e.col - e.row <= g.ku());
    }
  }

  TEST_CASE("apply agrees with the assembled band matrix and the entries") {
    std::mt19937 rng(11);
    for (double k : {0.0, 1.0}) {
      const DiscreteGenerator g(80, Gain(k));
      const auto z = random_vector(rng, g.size());
      const auto a = g.apply(z);
      const auto b = g.assemble(0.0, 1.0).matvec(z);
      std::vector<double> c(z.size(), 0.0);
      for (const auto& e : g.entries()) c[static_cast<std::size_t>(e.row)] += e.value * z[static_cast<std::size_t>(e.col)];
      for (std::size_t i = 0; i < z.size(); ++i) {
        CHECK(std::abs(a[i] - b[i]) <= 1e-9 * (1.0 + std::abs(a[i])));
        CHECK(std::abs(a[i] - c[i]) <= 1e-9 * (1.0 + std::abs(a[i])));
      }
      const auto shifted = g.assemble(2.0, -0.5).matvec(z);
      for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(shifted[i] - (2.0 * z[i] - 0.5 * a[i])) <= 1e-9 * (1.0 + std::abs(a[i])));
    }
  }

  TEST_CASE("discrete generator acts as (psi, -phi'''') on smooth states") {
    // x^2 (1-x)^4 satisfies the k = 0 conditions, including phi''(1) = 0.
    const int M = 200;
    const DiscreteGenerator g(M, Gain(0.0));
    const auto phi = [](double x) { return x * x * (1.0 - x) * (1.0 - x) * (1.0 - x) * (1.0 - x); };
    const auto d4 = [](double x) {
      return 360.0 * x * x - 480.0 * x + 144.0;
    };
    StatePair<double> s(M);
    for (int j = 0; j <= M; ++j) {
      s.phi[static_cast<std::size_t>(j)] = phi(s.grid.x(j));
      s.psi[static_cast<std::size_t>(j)] = std::sin(kPi * s.grid.x(j));
    }
    const auto out = g.to_state(g.apply(g.from_state(s)));
    double err_psi = 0.0, err_phi = 0.0;
    for (int j = 5; j <= M - 5; ++j) {
      const double x = s.grid.x(j);
      err_phi = std::max(err_phi, std::abs(out.phi[static_cast<std::size_t>(j)] - std::sin(kPi * x)));
      err_psi = std::max(err_psi, std::abs(out.psi[static_cast<std::size_t>(j)] + d4(x)));
    }
    CHECK(err_phi <= 1e-14);
    CHECK(err_psi <= 1e-2);
  }

  TEST_CASE("state round trip") {
    const DiscreteGenerator g(64, Gain(1.0));
    std::mt19937 rng(5);
    const auto z = random_vector(rng, g.size());
    const auto back = g.from_state(g.to_state(z));
    for (int j = 1; j < 64; ++j) {
      CHECK(back[static_cast<std::size_t>(g.w_index(j))] == z[static_cast<std::size_t>(g.w_index(j))]);
      CHECK(back[static_cast<std::size_t>(g.v_index(j))] == z[static_cast<std::size_t>(g.v_index(j))]);
    }
    const auto s = g.to_state(z);
    CHECK(s.phi.front() == 0.0);
    CHECK(s.phi.back() == 0.0);
  }

  TEST_CASE("dissipation identity for random vectors") {
    std::mt19937 rng(42);
    for (double k : {0.0, 0.5, 1.0, 4.0}) {
      const DiscreteGenerator g(200, Gain(k));
      for (int t = 0; t < 100; ++t) {
        const auto z = to_complex(random_vector(rng, g.size()));
        const double norm2 = g.energy_inner(z, z).real();
        const double re = g.energy_inner(g.apply(z), z).real();
        if (k == 0.0) {
          CHECK(std::abs(re) <= 1e-6 * norm2);
        } else {
          CHECK(re <= 1e-8 * norm2);
          CHECK(std::abs(re + g.boundary_power(z)) <= 1e-9 * std::max(norm2, g.boundary_power(z)));
        }
      }
    }
  }

  TEST_CASE("energy forms agree") {
    std::mt19937 rng(9);
    const DiscreteGenerator g(100, Gain(1.0));
    const auto z = random_vector(rng, g.size());
    CHECK(g.energy(z) == doctest::Approx(g.energy(to_complex(z))).epsilon(1e-14));
    CHECK(g.boundary_power(z) == doctest::Approx(g.boundary_power(to_complex(z))));
    CHECK(g.energy(z) > 0.0);
  }

#ifdef BEAMSPEC_HAVE_EIGEN
  TEST_CASE("inverse iteration matches a dense eigensolver") {
    const DiscreteGenerator g(64, Gain(1.0));
    const auto all = oracle::dense_eigenvalues(g);
    const SpectrumReport r = compute_spectrum(5, Gain(1.0));
    for (const auto& p : r.points) {
      const cd est = oracle_eigenvalue(g, p.lambda() * 1.001);
      CHECK(rel(est, oracle::nearest(all, est)) <= 1e-9);
    }
    double max_re = -1e300;
    for (const cd e : all) max_re = std::max(max_re, e.real());
    CHECK(max_re < 0.0);
  }

  TEST_CASE("dense spectrum of the conservative generator is imaginary") {
    const DiscreteGenerator g(64, Gain(0.0));
    for (const cd e : oracle::dense_eigenvalues(g)) CHECK(std::abs(e.real()) <= 1e-8 * std::max(1.0, std::abs(e)));
  }
#endif

  TEST_CASE("oracle agrees with the root finder and converges at second order") {
    const SpectrumReport r = compute_spectrum(3, Gain(1.0));
    const DiscreteGenerator g400(400, Gain(1.0)), g800(800, Gain(1.0));
    for (int n : {0, 1, 2}) {
      CAPTURE(n);
      cd lambda{};
      for (const auto& p : r.points)
        if (p.n == n) lambda = p.lambda();
      const double gap400 = rel(oracle_eigenvalue(g400, lambda * 1.001), lambda);
      const double gap800 = rel(oracle_eigenvalue(g800, lambda * 1.001), lambda);
      CHECK(gap400 <= 0.01);
      CHECK(std::log2(gap400 / gap800) >= 1.5);
    }
  }

  TEST_CASE("conservative oracle finds i omega_1^2") {
    const double w1 = oracle::bisect_k0(kPi, 1.5 * kPi);
    const DiscreteGenerator g(400, Gain(0.0));
    const cd e = oracle_eigenvalue(g, cd{0.0, w1 * w1 * 1.001});
    CHECK(std::abs(e.real()) <= 1e-6);
    CHECK(e.imag() == doctest::Approx(15.418).epsilon(1e-3));
  }

  TEST_CASE("oracle with a far shift returns an actual eigenvalue") {
    const DiscreteGenerator g(400, Gain(1.0));
    const cd shift{0.0, 5e4};
    const OracleResult r = oracle_eigenpair(g, shift);
    CHECK(r.eigenvalue != shift);
    const auto az = g.apply(r.vector);
    std::vector<cd> res(az.size());
    for (std::size_t i = 0; i < az.size(); ++i) res[i] = az[i] - r.eigenvalue * r.vector[i];
    CHECK(std::sqrt(g.energy_inner(res, res).real()) <= 1e-7 * std::abs(r.eigenvalue));
    CHECK(g.energy_inner(r.vector, r.vector).real() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("oracle rejects non-finite shifts") {
    const DiscreteGenerator g(64, Gain(1.0));
    CHECK_THROWS_AS(oracle_eigenvalue(g, cd{std::nan(""), 0.0}), Error);
  }

  TEST_CASE("sampled continuous mode is an approximate eigenvector in resolvent form") {
    const Gain k(1.0);
    const SpectralPoint p = find_eigenvalue(1, k);
    double prev = 1e300;
    for (int M : {200, 400}) {
      const DiscreteGenerator g(M, k);
      StatePair<cd> s(M);
      for (int j = 0; j <= M; ++j) {
        const double x = s.grid.x(j);
        s.phi[static_cast<std::size_t>(j)] = mode_value(p.tau, x, 0);
        s.psi[static_cast<std::size_t>(j)] = p.lambda() * mode_value(p.tau, x, 0);
      }
      const auto z = g.from_state(s);
      const BandedLU<cd> lu(g.assemble(cd{0.0}, cd{1.0}));
      const auto y = lu.solve(z);
      std::vector<cd> res(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) res[i] = z[i] - p.lambda() * y[i];
      const double r = std::sqrt(g.energy_inner(res, res).real() / g.energy_inner(z, z).real());
      CAPTURE(M);
      CHECK(r <= 0.02);
      CHECK(r < prev);
      prev = r;
    }
  }

  TEST_CASE("discrete eigenvector approaches the sampled mode") {
    const Gain k(1.0);
    const SpectralPoint p = find_eigenvalue(2, k);
    double prev = 1e300;
    for (int M : {200, 400}) {
      const DiscreteGenerator g(M, k);
      const OracleResult o = oracle_eigenpair(g, p.lambda());
      StatePair<cd> s(M);
      for (int j = 0; j <= M; ++j) {
        const double x = s.grid.x(j);
        s.phi[static_cast<std::size_t>(j)] = mode_value(p.tau, x, 0);
        s.psi[static_cast<std::size_t>(j)] = p.lambda() * mode_value(p.tau, x, 0);
      }
      auto z = g.from_state(s);
      const double nz = std::sqrt(g.energy_inner(z, z).real());
      for (auto& v : z) v /= nz;
      const cd phase = g.energy_inner(z, o.vector);
      std::vector<cd> d(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) d[i] = o.vector[i] * phase / std::abs(phase) - z[i];
      const double dist = std::sqrt(g.energy_inner(d, d).real());
      CAPTURE(M);
      CHECK(dist <= 5e-3);
      CHECK(dist < prev);
      prev = dist;
    }
  }

  TEST_CASE("resolved abscissa matches the root finder") {
    const SpectrumReport r = compute_spectrum(50, Gain(1.0));
    const ResolvedAbscissa a = resolved_abscissa(DiscreteGenerator(200, Gain(1.0)), r);
    CHECK(std::abs(a.value - spectral_abscissa(r)) <= 0.02 * std::abs(spectral_abscissa(r)));
    CHECK(a.argmax_n == spectral_abscissa_detail(r).argmax_n);
    CHECK(a.eigenvalues.size() == a.indices.size());
  }

  TEST_CASE("resolvent gain in the discrete H2 norm is bounded and grid stable") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> coef(6);
    for (auto& c : coef) c = u(rng);
    const auto phi = [&](double x) { return x * x * (1.0 - x) * (coef[0] + coef[1] * x + coef[2] * std::sin(3.0 * x)); };
    const auto psi = [&](double x) { return coef[3] + coef[4] * std::cos(5.0 * x) + coef[5] * x * x; };
    double prev = 0.0;
    for (int M : {128, 256, 512}) {
      const auto in = sampled(M, phi, psi);
      const auto out = apply_resolvent(in, Gain(1.0));
      const double h = 1.0 / M;
      auto h2 = [&](const std::vector<double>& f) {
        double acc = 0.0;
        for (int j = 1; j < M; ++j) {
          const double d2 = (f[static_cast<std::size_t>(j + 1)] - 2.0 * f[static_cast<std::size_t>(j)] + f[static_cast<std::size_t>(j - 1)]) / (h * h);
          acc += d2 * d2 * h;
        }
        return std::sqrt(acc);
      };
      double psi_norm = 0.0;
      for (double v : in.psi) psi_norm += v * v * h;
      const double C = h2(out.phi) / (h2(in.phi) + std::sqrt(psi_norm));
      CAPTURE(M);
      CHECK(C < 1.0);
      if (prev > 0.0) CHECK(std::abs(C - prev) <= 0.01 * prev);
      prev = C;
    }
  }
}

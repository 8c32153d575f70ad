#include <doctest.h>

#include <cmath>
#include <limits>

#include "beamspec/charfun.hpp"
#include "beamspec/spectrum.hpp"
#include "oracles.hpp"

using namespace beamspec;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

cplx to_c(oracle::lcplx z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

}  // namespace

TEST_SUITE("charfun") {
  TEST_CASE("raw value vanishes at zero") {
    const CharValue v = eval_char(cplx{0.0, 0.0}, Gain(1.0));
    CHECK(v.scale_exponent == 0.0);
    CHECK(std::abs(v.raw()) == 0.0);
  }

  TEST_CASE("unit box carries no scaling and matches the long double formula") {
    for (double re : {-0.9, -0.3, 0.2, 0.8, 1.0})
      for (double im : {-1.0, -0.4, 0.0, 0.6})
        for (double k : {0.0, 0.5, 3.0}) {
          const cplx tau{re, im};
          if (tau == cplx{}) continue;
          const CharValue v = eval_char(tau, Gain(k));
          CHECK(v.scale_exponent == 0.0);
          const cplx ref = to_c(oracle::char_raw({re, im}, k));
          CHECK(std::abs(v.value - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
        }
  }

  TEST_CASE("scaled form times tau cosh tau reproduces the raw formula for |Re tau| <= 5") {
    double worst = 0.0;
    for (double re = -5.0; re <= 5.0; re += 0.37)
      for (double im = -3.0; im <= 3.0; im += 0.41)
        for (double k : {0.0, 1.0, 2.0}) {
          const cplx tau{re, im};
          const cplx ref = to_c(oracle::char_raw({re, im}, k));
          const cplx via = eval_char_scaled(tau, Gain(k)) * tau * std::cosh(tau);
          worst = std::max(worst, std::abs(via - ref) / std::abs(ref));
          worst = std::max(worst, rel(eval_char(tau, Gain(k)).raw(), ref));
        }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("consistency at tau = 1, k = 2") {
    const cplx direct = eval_char(1.0, Gain(2.0)).raw() / std::cosh(1.0);
    CHECK(rel(eval_char_scaled(1.0, Gain(2.0)), direct) <= 1e-14);
  }

  TEST_CASE("first k = 0 root is a zero of the scaled function") {
    const double w1 = oracle::bisect_k0(kPi, 1.5 * kPi);
    CHECK(w1 == doctest::Approx(3.9266).epsilon(1e-4));
    CHECK(std::abs(eval_char_scaled(w1, Gain(0.0))) <= 1e-14);
  }

  TEST_CASE("scaled value at (n + 1/2) pi decays like 1/n") {
    double worst = 0.0;
    for (int n = 10; n <= 10000; n *= 10) {
      const double t = (n + 0.5) * kPi;
      worst = std::max(worst, n * std::abs(eval_char_scaled(t, Gain(1.0))));
    }
    CHECK(worst < 1.0);
  }

  TEST_CASE("k = 0 reduction at 100.5 pi") {
    const double t = 100.5 * kPi;
    const cplx f = eval_char_scaled(t, Gain(0.0));
    const double expect = (std::sin(t) - std::cos(t) * std::tanh(t)) / t;
    CHECK(std::abs(f - expect) <= 1e-15);
    CHECK(std::abs(t * f) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("analytic derivative matches central differences") {
    for (const cplx tau : {cplx{2.0, 0.1}, cplx{0.7, -0.3}, cplx{9.0, 1.5}, cplx{40.0, 0.02}, cplx{-3.0, 0.5}})
      for (double k : {0.0, 1.0, 4.0}) {
        const auto f = [&](cplx z) { return eval_char_scaled(z, Gain(k)); };
        const cplx fd = oracle::central_difference(f, tau, 1e-5);
        CHECK(rel(eval_char_derivative(tau, Gain(k)), fd) <= 1e-6);
      }
  }

  TEST_CASE("derivative is nonzero at computed roots") {
    const Gain k(1.0);
    const SpectrumReport r = compute_spectrum(20, k);
    for (const auto& p : r.points) CHECK(std::abs(eval_char_derivative(p.tau, k)) > 1e-3);
  }

  TEST_CASE("k = 0 derivative and value are real on the real axis") {
    for (double t : {0.5, 2.0, 7.3, 55.0}) {
      const cplx d = eval_char_derivative(t, Gain(0.0));
      CHECK(std::abs(d.imag()) <= 1e-15 * std::max(1.0, std::abs(d.real())));
      const CharValue v = eval_char(t, Gain(0.0));
      CHECK(std::abs(v.value.imag()) <= std::numeric_limits<double>::epsilon() * std::abs(v.value.real()));
    }
  }

  TEST_CASE("conjugate eigenvalue is a root") {
    for (double kv : {0.5, 1.0, 2.0}) {
      const Gain k(kv);
      const SpectrumReport r = compute_spectrum(30, k);
      for (const auto& p : r.points) {
        const cplx partner = conjugate_partner(p.tau);
        CHECK(std::abs(kI * partner * partner - std::conj(p.lambda())) <= 1e-12 * std::abs(p.lambda()));
        CHECK(normalized_residual(partner, k) <= 1e-8);
      }
    }
  }

  TEST_CASE("bounded on horizontal strips up to Re tau = 1e4") {
    for (double k : {0.0, 1.0, 5.0}) {
      double worst = 0.0;
      for (double s = 1.0; s <= 1e4; s *= 1.07)
        for (double b : {-2.0, -1.0, 0.0, 0.5, 2.0}) {
          const cplx f = eval_char_scaled({s, b}, Gain(k));
          REQUIRE(std::isfinite(std::abs(f)));
          worst = std::max(worst, std::abs(f));
        }
      CHECK(worst <= 6.0 * (1.0 + k));
      const CharValue far = eval_char({1e4, 1.0}, Gain(k));
      CHECK(std::isfinite(std::abs(far.value)));
    }
  }

  TEST_CASE("errors") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eval_char({nan, 0.0}, Gain(1.0)), Error);
    try {
      eval_char({std::numeric_limits<double>::infinity(), 0.0}, Gain(1.0));
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
      CHECK(e.name() == "DomainError");
    }
    try {
      eval_char_scaled({0.0, kPi / 2.0}, Gain(1.0));
      FAIL("expected a pole error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Pole);
    }
    CHECK_THROWS_AS(Gain(-1.0), Error);
  }
}

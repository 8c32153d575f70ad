#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "beamspec/polynomial.hpp"
#include "beamspec/quadrature.hpp"
#include "oracles.hpp"

using namespace beamspec;

namespace {

std::vector<double> sample(int intervals, double (*f)(double)) {
  const UniformGrid g(intervals);
  std::vector<double> v(g.points());
  for (int j = 0; j <= intervals; ++j) v[static_cast<std::size_t>(j)] = f(g.x(j));
  return v;
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("grid nodes") {
    const UniformGrid g(8);
    const auto x = g.nodes();
    REQUIRE(x.size() == 9);
    CHECK(x.front() == 0.0);
    CHECK(x.back() == 1.0);
    CHECK(g.h() == 0.125);
    CHECK_THROWS_AS(UniformGrid(0), Error);
  }

  TEST_CASE("simpson is exact for cubics with even and odd interval counts") {
    auto cubic = [](double x) { return 1.0 - 2.0 * x + 3.0 * x * x - 4.0 * x * x * x; };
    const double exact = 1.0 - 1.0 + 1.0 - 1.0;
    for (int n : {1, 2, 3, 4, 5, 7, 10, 33}) {
      CAPTURE(n);
      const auto f = sample(n, +[](double x) { return 1.0 - 2.0 * x + 3.0 * x * x - 4.0 * x * x * x; });
      if (n == 1) {
        CHECK(simpson(f, 1.0) == doctest::Approx(0.5 * (cubic(0.0) + cubic(1.0))));
      } else {
        CHECK(std::abs(simpson(f, 1.0 / n) - exact) <= 1e-14);
      }
    }
  }

  TEST_CASE("simpson converges at fourth order on a smooth integrand") {
    const double exact = oracle::integrate([](double x) { return std::exp(std::sin(3.0 * x)); }, 0.0, 1.0);
    const auto f1 = sample(32, +[](double x) { return std::exp(std::sin(3.0 * x)); });
    const auto f2 = sample(64, +[](double x) { return std::exp(std::sin(3.0 * x)); });
    const double e1 = std::abs(simpson(f1, 1.0 / 32) - exact);
    const double e2 = std::abs(simpson(f2, 1.0 / 64) - exact);
    CHECK(std::log2(e1 / e2) > 3.7);
  }

  TEST_CASE("simpson on complex samples") {
    std::vector<std::complex<double>> f(65);
    for (int j = 0; j <= 64; ++j) f[static_cast<std::size_t>(j)] = {j / 64.0, 1.0};
    const auto s = simpson(f, 1.0 / 64);
    CHECK(std::abs(s - std::complex<double>{0.5, 1.0}) <= 1e-15);
  }

  TEST_CASE("simpson rejects a single sample") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(simpson(one, 1.0), Error);
  }

  TEST_CASE("cumulative integral is exact for cubics at every node") {
    for (int n : {3, 4, 9, 16}) {
      CAPTURE(n);
      const auto f = sample(n, +[](double x) { return 2.0 + x - 5.0 * x * x * x; });
      const auto K = cumulative_integral(f, 1.0 / n);
      for (int j = 0; j <= n; ++j) {
        const double x = static_cast<double>(j) / n;
        CHECK(std::abs(K[static_cast<std::size_t>(j)] - (2.0 * x + 0.5 * x * x - 1.25 * x * x * x * x)) <= 1e-14);
      }
    }
    const std::vector<double> three{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(cumulative_integral(three, 0.5), Error);
  }

  TEST_CASE("polynomial algebra") {
    const Polynomial p{1.0, -2.0, 0.0, 4.0};
    CHECK(p.degree() == 3);
    CHECK(p(2.0) == doctest::Approx(1.0 - 4.0 + 32.0));
    CHECK(p.derivative().coeffs() == std::vector<double>{-2.0, 0.0, 12.0});
    CHECK(p.derivative(2).coeffs() == std::vector<double>{0.0, 24.0});
    CHECK(p.derivative(4).degree() == -1);
    CHECK(p.antiderivative().derivative().coeffs() == p.coeffs());
    CHECK(p.antiderivative()(0.0) == 0.0);
    CHECK(p.integrate(0.0, 1.0) == doctest::Approx(1.0 - 1.0 + 1.0));
    const Polynomial q{0.0, 1.0};
    CHECK((p * q).coeffs() == std::vector<double>{0.0, 1.0, -2.0, 0.0, 4.0});
    CHECK((p - p).degree() == -1);
    CHECK((p + q).coeff(1) == -1.0);
    CHECK((2.0 * q).coeff(1) == 2.0);
    CHECK(Polynomial::monomial(3, 2.0)(0.5) == 0.25);
    CHECK(Polynomial{0.0, 1.0, -1.0}.max_abs(0.0, 1.0) == doctest::Approx(0.25));
  }
}

#include "beamspec/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace beamspec {

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::monomial(int degree, double scale) {
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = scale;
  return Polynomial(std::move(c));
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative(int order) const {
  std::vector<double> c = c_;
  for (int o = 0; o < order && !c.empty(); ++o) {
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    c = std::move(d);
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::antiderivative() const {
  if (c_.empty()) return {};
  std::vector<double> a(c_.size() + 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(a));
}

double Polynomial::integrate(double a, double b) const {
  const Polynomial P = antiderivative();
  return P(b) - P(a);
}

double Polynomial::max_abs(double a, double b, int samples) const {
  double m = 0.0;
  for (int i = 0; i <= samples; ++i) {
    m = std::max(m, std::abs((*this)(a + (b - a) * i / samples)));
  }
  return m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c = p.c_;
  for (auto& v : c) v *= s;
  return Polynomial(std::move(c));
}

}  // namespace beamspec

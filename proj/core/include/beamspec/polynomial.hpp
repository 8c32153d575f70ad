#pragma once

#include <initializer_list>
#include <vector>

namespace beamspec {

/// Real polynomial in monomial form, c[0] + c[1] x + ...
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(int degree, double scale = 1.0);

  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : 0.0; }

  double operator()(double x) const;
  Polynomial derivative(int order = 1) const;
  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const;
  double integrate(double a, double b) const;

  /// max |p(x)| sampled on `samples`+1 equispaced points of [a, b].
  double max_abs(double a, double b, int samples = 1000) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);

 private:
  void trim();
  std::vector<double> c_;
};

}  // namespace beamspec

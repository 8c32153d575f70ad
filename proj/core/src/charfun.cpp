#include "beamspec/charfun.hpp"

#include <algorithm>
#include <limits>

namespace beamspec {
namespace {

void require_finite(cplx tau) {
  if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    throw Error(ErrorKind::Domain, "characteristic function needs a finite tau");
  }
}

// Scaled trig/hyperbolic pieces: each factor carries exp(-s_re) or exp(-s_im).
struct ScaledPieces {
  double s_re = 0.0;
  double s_im = 0.0;
  cplx ch, sh;  // cosh, sinh * exp(-s_re)
  cplx c, s;    // cos, sin * exp(-s_im)
};

ScaledPieces scaled_pieces(cplx tau) {
  ScaledPieces p;
  const double a = std::abs(tau.real());
  const double b = std::abs(tau.imag());
  p.s_re = a > 1.0 ? a : 0.0;
  p.s_im = b > 1.0 ? b : 0.0;
  const cplx ep = std::exp(tau - p.s_re);
  const cplx em = std::exp(-tau - p.s_re);
  p.ch = 0.5 * (ep + em);
  p.sh = 0.5 * (ep - em);
  const cplx ip = std::exp(kI * tau - p.s_im);
  const cplx im = std::exp(-kI * tau - p.s_im);
  p.c = 0.5 * (ip + im);
  p.s = (ip - im) / (2.0 * kI);
  return p;
}

// e^{-2 tau} and e^{-tau} after reflecting to Re tau >= 0 (f is even).
struct HalfPlane {
  cplx tau;
  cplx e1;  // e^{-tau}
  cplx e2;  // e^{-2 tau}
  cplx denom;  // 1 + e^{-2 tau}
};

HalfPlane reflect(cplx tau) {
  require_finite(tau);
  if (tau == cplx{}) {
    throw Error(ErrorKind::Domain, "scaled characteristic function is 0/0 at tau = 0");
  }
  HalfPlane hp;
  hp.tau = tau.real() < 0.0 ? -tau : tau;
  hp.e1 = std::exp(-hp.tau);
  hp.e2 = hp.e1 * hp.e1;
  hp.denom = 1.0 + hp.e2;
  if (std::abs(hp.denom) < 64.0 * std::numeric_limits<double>::epsilon()) {
    throw Error(ErrorKind::Pole, "cosh(tau) = 0: tau is an odd multiple of i*pi/2");
  }
  return hp;
}

}  // namespace

CharValue eval_char(cplx tau, const Gain& k) {
  require_finite(tau);
  const ScaledPieces p = scaled_pieces(tau);
  const double s = p.s_re + p.s_im;
  const cplx one = std::exp(-s);
  const cplx value = kI * k.value() * tau * (one - p.c * p.ch) + p.ch * p.s - p.c * p.sh;
  return {value, s};
}

cplx eval_char_scaled(cplx tau_in, const Gain& k) {
  const HalfPlane hp = reflect(tau_in);
  const cplx tau = hp.tau;
  const cplx sech = 2.0 * hp.e1 / hp.denom;
  const cplx tanh = (1.0 - hp.e2) / hp.denom;
  const cplx c = std::cos(tau);
  const cplx s = std::sin(tau);
  return kI * k.value() * (sech - c) + s / tau - c * tanh / tau;
}

cplx eval_char_derivative(cplx tau_in, const Gain& k) {
  const HalfPlane hp = reflect(tau_in);
  const cplx tau = hp.tau;
  const cplx sech = 2.0 * hp.e1 / hp.denom;
  const cplx tanh = (1.0 - hp.e2) / hp.denom;
  const cplx c = std::cos(tau);
  const cplx s = std::sin(tau);
  const cplx inv = 1.0 / tau;
  // d/dtau of each term of f.
  const cplx d_damping = kI * k.value() * (-sech * tanh + s);
  const cplx d_sin = c * inv - s * inv * inv;
  const cplx d_cos_tanh = (-s * tanh + c * sech * sech) * inv - c * tanh * inv * inv;
  const cplx d = d_damping + d_sin - d_cos_tanh;
  // f is even, so f' is odd.
  return tau_in.real() < 0.0 ? -d : d;
}

double normalized_residual(cplx tau, const Gain& k) {
  const CharValue d = eval_char(tau, k);
  const ScaledPieces p = scaled_pieces(tau);
  // |D| / max(|cosh|, |cos|, |cos cosh|) with D carrying exp(-(s_re + s_im)).
  const double den = std::max({std::abs(p.ch) * std::exp(-p.s_im), std::abs(p.c) * std::exp(-p.s_re),
                               std::abs(p.c) * std::abs(p.ch)});
  return std::abs(d.value) / (std::abs(tau) * den);
}

}  // namespace beamspec

#pragma once

// Characteristic function of the boundary-damped beam operator.
//
//   D(tau; k) = i k tau (1 - cos tau cosh tau) + cosh tau sin tau - cos tau sinh tau
//
// lambda = i tau^2 is an eigenvalue iff D(tau; k) = 0 with tau != 0. For k = 0 this is
// cosh w sin w - cos w sinh w = 0, i.e. tan w = tanh w. (The k = 0 form is sometimes
// printed with a stray "cos tau" in place of "cos w"; it is the k = 0 specialization
// of D and is evaluated as such.)
//
// Roots come in the symmetric set {tau, -tau, i conj(tau), -i conj(tau)}; the second
// pair maps to conj(lambda). The canonical branch used throughout the library is
// 0 <= arg tau <= pi/4, i.e. Re lambda <= 0 and Im lambda >= 0.

#include "beamspec/types.hpp"

namespace beamspec {

using CharValue = ScaledComplex;

/// D(tau; k) with exp(|Re tau|) (when |Re tau| > 1) and exp(|Im tau|) (when
/// |Im tau| > 1) removed into scale_exponent. Inside the unit box the value is the
/// raw formula. Throws Domain on non-finite input.
CharValue eval_char(cplx tau, const Gain& k);

/// f(tau) = D(tau) / (tau cosh tau)
///        = i k (sech tau - cos tau) + sin tau / tau - cos tau tanh tau / tau.
/// Bounded on horizontal strips as Re tau -> infinity; even in tau. Throws Pole
/// when cosh tau vanishes and Domain at tau = 0.
cplx eval_char_scaled(cplx tau, const Gain& k);

/// d f / d tau, evaluated term by term (no differencing).
cplx eval_char_derivative(cplx tau, const Gain& k);

/// |D(tau)| / (|tau| max(|cosh tau|, |cos tau|, |cos tau cosh tau|)). Equals |f(tau)|
/// wherever |cos tau| <= 1 <= |cosh tau| (all roots near the real axis), stays O(eps)
/// at roots on the diagonal where D grows like cos tau cosh tau, and is invariant
/// under tau -> i conj(tau), the map to the conjugate eigenvalue.
double normalized_residual(cplx tau, const Gain& k);

/// The tau that represents conj(lambda) for lambda = i tau^2.
inline cplx conjugate_partner(cplx tau) { return kI * std::conj(tau); }

}  // namespace beamspec

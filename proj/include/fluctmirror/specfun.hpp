#pragma once

namespace fluctmirror::specfun {

/// Dawson function D(x) = exp(-x^2) * integral_0^x exp(t^2) dt.
///
/// Relative accuracy is about 1e-14 over the whole real line. D is odd and
/// decays as 1/(2x) for large |x|. Throws fluctmirror::domain_error for
/// non-finite input.
double dawson(double x);

/// Imaginary error function erfi(x) = (2/sqrt(pi)) * integral_0^x exp(t^2) dt,
/// computed as (2/sqrt(pi)) * exp(x^2) * D(x).
///
/// Throws fluctmirror::range_error once exp(x^2) overflows (|x| > ~26.6) and
/// fluctmirror::domain_error for non-finite input.
double erfi(double x);

}  // namespace fluctmirror::specfun

namespace fluctmirror::specfun {

/// k-th derivative of the Dawson function, k in 0..4. Uses the ODE
/// D' = 1 - 2xD for moderate |x| and the differentiated asymptotic series
/// beyond |x| = 8, where the ODE form cancels badly.
double dawson_derivative(int k, double x);

}  // namespace fluctmirror::specfun

#pragma once

#include <functional>
#include <vector>

namespace fluctmirror::quad {

using Integrand = std::function<double(double)>;

/// A pole of the integrand at `location` with multiplicity `order` (1..4).
struct Pole {
  double location = 0.0;
  int order = 1;
};

/// Truncation of an unbounded integration range. `remainder_bound` is an
/// analytic bound on the discarded contribution; it is added to the
/// reported error estimate.
struct TailPolicy {
  double truncation_radius = 0.0;
  double remainder_bound = 0.0;
};

struct QuadratureSpec {
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;
  std::vector<Pole> poles;
  /// Interior points where the integrand loses smoothness.
  std::vector<double> breakpoints;
  TailPolicy tail;

  /// Throws argument_error unless the tolerances are positive, every pole
  /// order is in 1..4 and no pole sits within rel_tol of [lo, hi]'s ends.
  void validate(double lo, double hi) const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

/// Adaptive 21-point Gauss-Kronrod quadrature with global bisection of the
/// interval carrying the largest error. Throws numerical_error when the
/// requested tolerance is not met within spec.max_subdivisions.
QuadResult integrate(const Integrand& g, double lo, double hi,
                     const QuadratureSpec& spec = {});

/// Cauchy principal value of integral_lo^hi g(s) / (s - pole) ds, by
/// subtracting g(pole) and adding g(pole) * ln|(hi - pole)/(pole - lo)|.
QuadResult pv_cauchy(const Integrand& g, double pole, double lo, double hi,
                     const QuadratureSpec& spec = {});

/// Hadamard finite part of integral_lo^hi g(s) / (s - pole)^order ds for
/// order in 1..4 (order 1 is the principal value).
///
/// The cofactor g must be smooth near the pole. Inside a window centred on
/// the pole, g is replaced by its Chebyshev interpolant and the finite parts
/// of T_j(x)/x^order are applied exactly; the rest of the interval is a
/// regular integral. Breakpoints in `spec` bound the window.
QuadResult finite_part(const Integrand& g, double pole, int order, double lo,
                       double hi, const QuadratureSpec& spec = {});

/// Finite part of integral_lo^hi g(s) / prod_i (s - p_i)^(n_i) ds over all
/// poles listed in spec.poles. Each pole is treated by finite_part on the
/// sub-interval nearest to it.
QuadResult singular_integrate(const Integrand& g, double lo, double hi,
                              const QuadratureSpec& spec);

}  // namespace fluctmirror::quad

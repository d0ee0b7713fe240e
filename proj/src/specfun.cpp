#include "fluctmirror/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fluctmirror/errors.hpp"

namespace fluctmirror::specfun {
namespace {

constexpr double kSeriesLimit = 1.0;
constexpr double kAsymptoticLimit = 8.0;
constexpr double kTiny = 1e-17;

// exp(-x^2) without the x^2 rounding error being amplified by the exponent.
double exp_minus_square(double x) {
  const double hi = x * x;
  const double lo = std::fma(x, x, -hi);
  return std::exp(-hi) * (1.0 - lo);
}

// Alternating Maclaurin series sum_n (-2)^n x^(2n+1) / (2n+1)!!.
double dawson_maclaurin(double x) {
  const double minus_two_x2 = -2.0 * x * x;
  double term = x;
  double sum = x;
  for (int n = 0; n < 200; ++n) {
    term *= minus_two_x2 / (2.0 * n + 3.0);
    sum += term;
    if (std::abs(term) <= kTiny * std::abs(sum)) break;
  }
  return sum;
}

// exp(-x^2) * sum_n x^(2n+1) / (n! (2n+1)); every term is positive so the
// sum carries no cancellation.
double dawson_positive_series(double x) {
  const double x2 = x * x;
  double power = x;  // x^(2n+1) / n!
  double sum = x;
  for (int n = 1; n < 1000; ++n) {
    power *= x2 / n;
    const double term = power / (2.0 * n + 1.0);
    sum += term;
    if (term <= kTiny * sum && n > x2) break;
  }
  return exp_minus_square(x) * sum;
}

// 1/(2x) * sum_n (2n-1)!! / (2x^2)^n, truncated at its smallest term.
double dawson_asymptotic(double x) {
  const double inv_2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 400; ++n) {
    const double next = term * (2.0 * n - 1.0) * inv_2x2;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term <= kTiny * sum) break;
  }
  return sum / (2.0 * x);
}

}  // namespace

double dawson(double x) {
  if (!std::isfinite(x)) throw domain_error("dawson: non-finite argument");
  const double ax = std::abs(x);
  double value;
  if (ax <= kSeriesLimit) {
    value = dawson_maclaurin(ax);
  } else if (ax <= kAsymptoticLimit) {
    value = dawson_positive_series(ax);
  } else {
    value = dawson_asymptotic(ax);
  }
  return std::copysign(value, x);
}

double erfi(double x) {
  if (!std::isfinite(x)) throw domain_error("erfi: non-finite argument");
  const double grow = std::exp(x * x);
  if (!std::isfinite(grow)) throw range_error("erfi: exp(x^2) overflows");
  return 2.0 * std::numbers::inv_sqrtpi * grow * dawson(x);
}

}  // namespace fluctmirror::specfun

namespace fluctmirror::specfun {

double dawson_derivative(int k, double x) {
  if (k < 0 || k > 4) throw argument_error("dawson_derivative: order must be 0..4");
  if (!std::isfinite(x)) throw domain_error("dawson_derivative: non-finite argument");
  const double ax = std::abs(x);
  // Odd derivatives of an odd function are even.
  const double parity = (k % 2 == 0) ? std::copysign(1.0, x) : 1.0;
  if (ax > kAsymptoticLimit) {
    // D(x) ~ sum_n a_n x^-(2n+1), a_n = (2n-1)!! / 2^(n+1), differentiated
    // term by term.
    const double inv_x = 1.0 / ax;
    const double inv_2x2 = 0.5 * inv_x * inv_x;
    double coeff = 0.5;  // a_n / x^(2n)
    double sum = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int n = 0; n < 400; ++n) {
      const int m = 2 * n + 1;
      double falling = 1.0;
      for (int i = 0; i < k; ++i) falling *= -(m + i);
      const double term = coeff * falling;
      if (std::abs(term) >= previous) break;
      sum += term;
      previous = std::abs(term);
      if (std::abs(term) <= kTiny * std::abs(sum)) break;
      coeff *= (2.0 * n + 1.0) * inv_2x2;
    }
    return parity * sum * std::pow(inv_x, k + 1);
  }
  double d_prev = dawson(ax);
  if (k == 0) return parity * d_prev;
  double d = 1.0 - 2.0 * ax * d_prev;
  for (int j = 1; j < k; ++j) {
    const double next = -2.0 * ax * d - 2.0 * j * d_prev;
    d_prev = d;
    d = next;
  }
  return parity * d;
}

}  // namespace fluctmirror::specfun

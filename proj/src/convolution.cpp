#include "fluctmirror/convolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fluctmirror/errors.hpp"
#include "fluctmirror/polynomial.hpp"

namespace fluctmirror::quad {
namespace {

using Wide = __int128;

Wide binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Wide r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Taylor shift: coefficients of p(x + shift) from those of p(x).
std::vector<Wide> shifted(const std::vector<Wide>& c, int shift) {
  std::vector<Wide> out(c.size(), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t k = 0; k <= i; ++k) {
      Wide p = 1;
      for (std::size_t e = 0; e < i - k; ++e) p *= shift;
      out[k] += c[i] * binomial(int(i), int(k)) * p;
    }
  }
  return out;
}

struct QuarticConvolution {
  Polynomial near_zero;  // in w, for 0 <= w <= 1 (unit half-width)
  Polynomial near_edge;  // in (w - 2), for 1 < w <= 2
};

// g(w) = integral_{w-1}^{1} p(t) p(w - t) dt with p(t) = (t^2 - 1)^4, done in
// exact integer arithmetic scaled by lcm(1..17).
QuarticConvolution unit_quartic_convolution() {
  const std::array<Wide, 9> p = {1, 0, -4, 0, 6, 0, -4, 0, 1};
  Wide lcm = 1;
  for (Wide m = 2; m <= 17; ++m) lcm = std::lcm((long long)lcm, (long long)m);

  std::vector<Wide> scaled(18, 0);  // lcm * coefficients of w^l
  for (int i = 0; i <= 8; ++i) {
    if (p[i] == 0) continue;
    for (int j = 0; j <= 8; ++j) {
      if (p[j] == 0) continue;
      for (int k = 0; k <= j; ++k) {
        // p_i p_j C(j,k) (-1)^k w^(j-k) * integral t^(i+k) dt
        const Wide coeff = p[i] * p[j] * binomial(j, k) * ((k % 2) ? -1 : 1);
        const int m = i + k;
        const Wide over = lcm / (m + 1);
        // (1 - (w - 1)^(m+1)) / (m + 1)
        scaled[j - k] += coeff * over;
        for (int l = 0; l <= m + 1; ++l) {
          const Wide sign = ((m + 1 - l) % 2) ? -1 : 1;
          scaled[j - k + l] -= coeff * over * binomial(m + 1, l) * sign;
        }
      }
    }
  }
  const double norm = (315.0 / 256.0) * (315.0 / 256.0) / double(lcm);
  auto to_double = [norm](const std::vector<Wide>& c) {
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = double(c[i]) * norm;
    return Polynomial(std::move(out));
  };
  return {to_double(scaled), to_double(shifted(scaled, 2))};
}

Distribution convolve_compact_quartic(double s0) {
  static const QuarticConvolution unit = unit_quartic_convolution();
  std::array<QuarticConvolution, 5> derivs;
  for (int n = 0; n <= 4; ++n) {
    derivs[n] = {unit.near_zero.derivative(n), unit.near_edge.derivative(n)};
  }
  auto fn = [s0, derivs](int n, double w) {
    const double x = std::abs(w) / s0;
    if (x >= 2.0) return 0.0;
    const double v = (x <= 1.0) ? derivs[n].near_zero(x) : derivs[n].near_edge(x - 2.0);
    // g is even: odd derivatives flip sign for w < 0.
    const double parity = (n % 2 == 1 && w < 0.0) ? -1.0 : 1.0;
    return parity * v / std::pow(s0, n + 1);
  };
  return Distribution::custom(fn, 7, Support{2.0 * s0, true},
                              std::numbers::sqrt2 * s0 / std::sqrt(11.0),
                              {-2.0 * s0, 2.0 * s0});
}

Distribution convolve_numerically(const Distribution& f) {
  const double r = f.support().half_width;
  const auto bps = f.breakpoints();
  const int order = std::min(f.smoothness(), 4);
  auto fn = [f, r, bps, order](int n, double w) {
    if (n > order) throw argument_error("convolution derivative not available");
    const double lo = std::max(-r, w - r);
    const double hi = std::min(r, w + r);
    if (!(lo < hi)) return 0.0;
    QuadratureSpec spec;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-12;
    for (double b : bps) {
      spec.breakpoints.push_back(b);
      spec.breakpoints.push_back(w - b);
    }
    return integrate([&](double s) { return f.pdf(s) * f.pdf_derivative(n, w - s); },
                     lo, hi, spec)
        .value;
  };
  std::vector<double> g_bps;
  for (double a : bps) {
    for (double b : bps) g_bps.push_back(a + b);
  }
  std::sort(g_bps.begin(), g_bps.end());
  g_bps.erase(std::unique(g_bps.begin(), g_bps.end()), g_bps.end());
  const int smooth = f.smoothness() >= kInfiniteSmoothness / 2
                         ? kInfiniteSmoothness
                         : 2 * f.smoothness() + 1;
  return Distribution::custom(fn, smooth, Support{2.0 * r, f.support().compact},
                              std::sqrt(2.0 * f.variance()), g_bps);
}

}  // namespace

Distribution self_convolution(const Distribution& f) {
  switch (f.kind()) {
    case DistributionKind::delta: return Distribution::delta();
    case DistributionKind::gaussian:
      return Distribution::gaussian(std::numbers::sqrt2 * f.width());
    case DistributionKind::compact_quartic: return convolve_compact_quartic(f.width());
    case DistributionKind::custom_symmetric: return convolve_numerically(f);
  }
  throw argument_error("unknown distribution kind");
}

}  // namespace fluctmirror::quad

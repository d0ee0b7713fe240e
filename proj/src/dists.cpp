#include "fluctmirror/dists.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fluctmirror/errors.hpp"
#include "fluctmirror/specfun.hpp"

namespace fluctmirror {
namespace {

constexpr double kGaussianTruncation = 8.0;
constexpr double kCompactNorm = 315.0 / 256.0;

// Probabilists' Hermite polynomials He_0..He_4.
double hermite(int n, double x) {
  const double x2 = x * x;
  switch (n) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return x2 - 1.0;
    case 3: return x * (x2 - 3.0);
    case 4: return x2 * (x2 - 6.0) + 3.0;
    default: throw argument_error("hermite: order out of range");
  }
}

void require_width(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw argument_error("distribution width must be positive and finite");
  }
}

// 945 j_4(k) / k^4, the transform of the unit compact-quartic density.
double compact_fourier_unit(double k) {
  const double ak = std::abs(k);
  if (ak <= 6.0) {
    const double h = -0.5 * k * k;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 200; ++m) {
      term *= h / (m * (9.0 + 2.0 * m));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum) && m > 3) break;
    }
    return sum;
  }
  return 945.0 * std::sph_bessel(4u, ak) / std::pow(ak, 4);
}

// n-th derivative of (t^2 - 1)^4, factored in u = 1 - t^2 so the values
// stay accurate near the support edge.
double compact_shape(int n, double t) {
  const double u = (1.0 - t) * (1.0 + t);
  const double t2 = t * t;
  switch (n) {
    case 0: return u * u * u * u;
    case 1: return -8.0 * t * u * u * u;
    case 2: return 8.0 * u * u * (7.0 * t2 - 1.0);
    case 3: return -48.0 * t * u * (7.0 * t2 - 3.0);
    case 4: return 48.0 * ((35.0 * t2 - 30.0) * t2 + 3.0);
    default: throw argument_error("compact density derivative out of range");
  }
}

}  // namespace

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::delta: return "delta";
    case DistributionKind::gaussian: return "gaussian";
    case DistributionKind::compact_quartic: return "compact";
    case DistributionKind::custom_symmetric: return "custom";
  }
  return "unknown";
}

std::optional<DistributionKind> parse_distribution_kind(std::string_view text) {
  if (text == "delta") return DistributionKind::delta;
  if (text == "gaussian") return DistributionKind::gaussian;
  if (text == "compact" || text == "compact-quartic") {
    return DistributionKind::compact_quartic;
  }
  if (text == "custom") return DistributionKind::custom_symmetric;
  return std::nullopt;
}

Distribution Distribution::delta() {
  Distribution d;
  d.kind_ = DistributionKind::delta;
  d.support_ = {0.0, true};
  return d;
}

Distribution Distribution::gaussian(double rms_width) {
  require_width(rms_width);
  Distribution d;
  d.kind_ = DistributionKind::gaussian;
  d.width_ = rms_width;
  d.smoothness_ = kInfiniteSmoothness;
  d.support_ = {kGaussianTruncation * rms_width, false};
  d.variance_ = rms_width * rms_width;
  d.tail_mass_ = std::erfc(kGaussianTruncation / std::numbers::sqrt2);
  d.max_derivative_ = 4;
  d.derivatives_ = std::make_shared<const DerivativeFn>(
      [rms_width](int n, double s) {
        const double x = s / rms_width;
        const double density = std::exp(-0.5 * x * x) /
                               (std::sqrt(2.0 * std::numbers::pi) * rms_width);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * hermite(n, x) * density / std::pow(rms_width, n);
      });
  return d;
}

Distribution Distribution::compact_quartic(double half_width) {
  require_width(half_width);
  Distribution d;
  d.kind_ = DistributionKind::compact_quartic;
  d.width_ = half_width;
  d.smoothness_ = 3;
  d.support_ = {half_width, true};
  d.breakpoints_ = {-half_width, half_width};
  d.variance_ = half_width * half_width / 11.0;
  d.max_derivative_ = 4;
  d.derivatives_ = std::make_shared<const DerivativeFn>(
      [half_width](int n, double s) {
        if (!(std::abs(s) < half_width)) return 0.0;
        return kCompactNorm * compact_shape(n, s / half_width) /
               std::pow(half_width, n + 1);
      });
  return d;
}

Distribution Distribution::custom(DerivativeFn derivatives, int smoothness,
                                  Support support, double width,
                                  std::vector<double> breakpoints) {
  if (!derivatives) throw argument_error("custom distribution needs a density");
  if (smoothness < 0) throw argument_error("custom smoothness must be >= 0");
  require_width(support.half_width);
  require_width(width);

  Distribution d;
  d.kind_ = DistributionKind::custom_symmetric;
  d.width_ = width;
  d.smoothness_ = smoothness;
  d.support_ = support;
  d.breakpoints_ = std::move(breakpoints);
  d.max_derivative_ = std::min(smoothness, 4);
  d.derivatives_ = std::make_shared<const DerivativeFn>(std::move(derivatives));

  const double r = support.half_width;
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-13;
  spec.breakpoints = d.breakpoints_;
  const auto& f = *d.derivatives_;
  const double mass = quad::integrate([&](double s) { return f(0, s); }, -r, r, spec).value;
  if (std::abs(mass - 1.0) > 1e-10) {
    throw argument_error("custom density is not normalised (mass " +
                         std::to_string(mass) + ")");
  }
  double peak = 0.0;
  for (int i = 0; i <= 64; ++i) peak = std::max(peak, std::abs(f(0, r * i / 64.0)));
  for (int i = 0; i <= 64; ++i) {
    const double s = r * (i + 0.37) / 65.0;
    if (std::abs(f(0, s) - f(0, -s)) > 1e-12 * peak) {
      throw argument_error("custom density is not symmetric");
    }
    if (f(0, s) < -1e-15 * peak) {
      throw argument_error("custom density is negative");
    }
  }
  d.variance_ = quad::integrate([&](double s) { return s * s * f(0, s); }, -r, r, spec).value;
  d.tail_mass_ = support.compact ? 0.0 : std::max(0.0, 1.0 - mass);
  return d;
}

double Distribution::pdf_derivative(int n, double s) const {
  if (kind_ == DistributionKind::delta) {
    throw argument_error("the delta distribution has no pointwise density");
  }
  if (n < 0 || n > max_derivative_) {
    throw argument_error("density derivative of order " + std::to_string(n) +
                         " is not available");
  }
  return (*derivatives_)(n, s);
}

Distribution make_distribution(DistributionKind kind, double width) {
  switch (kind) {
    case DistributionKind::delta: return Distribution::delta();
    case DistributionKind::gaussian: return Distribution::gaussian(width);
    case DistributionKind::compact_quartic: return Distribution::compact_quartic(width);
    case DistributionKind::custom_symmetric:
      throw argument_error("custom distributions are built with Distribution::custom");
  }
  throw argument_error("unknown distribution kind");
}

double fourier(const Distribution& d, double alpha) {
  switch (d.kind()) {
    case DistributionKind::delta: return 1.0;
    case DistributionKind::gaussian: {
      const double x = alpha * d.width();
      return std::exp(-0.5 * x * x);
    }
    case DistributionKind::compact_quartic:
      return compact_fourier_unit(alpha * d.width());
    case DistributionKind::custom_symmetric: break;
  }
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-12;
  spec.breakpoints = d.breakpoints();
  const double r = d.support().half_width;
  return 2.0 * quad::integrate(
                   [&](double s) { return std::cos(alpha * s) * d.pdf(s); }, 0.0,
                   r, spec)
                   .value;
}

quad::QuadratureSpec default_transform_spec() {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 4000;
  return spec;
}

TransformSet::TransformSet(Distribution d, TransformMethod method,
                           quad::QuadratureSpec spec)
    : dist_(std::move(d)), method_(method), spec_(std::move(spec)) {}

double TransformSet::derivative(int k, double u) const {
  return derivative_with_error(k, u).value;
}

quad::QuadResult TransformSet::derivative_with_error(int k, double u) const {
  if (k < 0 || k > 3) throw argument_error("transform derivative order must be 0..3");
  if (!std::isfinite(u)) throw argument_error("transform argument must be finite");

  if (method_ == TransformMethod::closed_form) {
    if (dist_.kind() == DistributionKind::delta) {
      if (u == 0.0) throw pole_error("F(u) = 1/u has a pole at u = 0");
      double factorial = 1.0;
      for (int i = 2; i <= k; ++i) factorial *= i;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      return {sign * factorial / std::pow(u, k + 1), 0.0, 0};
    }
    const double delta = dist_.width();
    const double outer = 1.0 / (std::numbers::sqrt2 * delta);
    const double inner = 0.5 * outer;
    return {outer * std::pow(inner, k) * specfun::dawson_derivative(k, inner * u),
            0.0, 0};
  }

  // F^(k)(u) = (-1/2)^k (1/2) PV integral f^(k)(s) / (s - pole), pole = -u/2.
  const double prefactor = std::pow(-0.5, k) * 0.5;
  const double pole = -0.5 * u;
  const double radius = dist_.support().half_width;
  const double w = dist_.width();
  const auto g = [this, k](double s) { return dist_.pdf_derivative(k, s); };

  quad::QuadratureSpec local = spec_;
  local.abs_tol = spec_.abs_tol / std::pow(w, k + 1);
  local.breakpoints.insert(local.breakpoints.end(), dist_.breakpoints().begin(),
                           dist_.breakpoints().end());

  const double tail_density =
      (dist_.support().compact)
          ? 0.0
          : (k == 0 ? 0.5 * dist_.tail_mass_bound()
                    : std::abs(dist_.pdf_derivative(k - 1, radius)));

  quad::QuadResult r;
  if (std::abs(pole) < 1.125 * radius) {
    const double reach = 1.25 * radius;
    local.tail.remainder_bound = 2.0 * tail_density / (reach - std::abs(pole));
    r = quad::pv_cauchy(g, pole, -reach, reach, local);
  } else {
    local.tail.remainder_bound = 2.0 * tail_density / (std::abs(pole) - radius);
    r = quad::integrate([&](double s) { return g(s) / (s - pole); }, -radius,
                        radius, local);
  }
  r.value *= prefactor;
  r.error *= std::abs(prefactor);
  return r;
}

TransformSet transforms(const Distribution& d,
                        std::optional<TransformMethod> method,
                        quad::QuadratureSpec spec) {
  const bool has_closed_form = d.kind() == DistributionKind::delta ||
                               d.kind() == DistributionKind::gaussian;
  const TransformMethod chosen =
      method.value_or(has_closed_form ? TransformMethod::closed_form
                                      : TransformMethod::quadrature);
  if (chosen == TransformMethod::closed_form && !has_closed_form) {
    throw argument_error("no closed-form transform for the " +
                         std::string(to_string(d.kind())) + " distribution");
  }
  if (chosen == TransformMethod::quadrature && d.smoothness() < 3) {
    throw argument_error(
        "the quadrature transform needs a density with at least three "
        "continuous derivatives");
  }
  return TransformSet(d, chosen, std::move(spec));
}

}  // namespace fluctmirror

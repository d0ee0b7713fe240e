#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "fluctmirror/pvquad.hpp"

namespace fluctmirror {

enum class DistributionKind { delta, gaussian, compact_quartic, custom_symmetric };

std::string_view to_string(DistributionKind kind);
/// Accepts "delta", "gaussian", "compact" / "compact-quartic", "custom".
std::optional<DistributionKind> parse_distribution_kind(std::string_view text);

/// Smoothness value used for infinitely differentiable densities.
inline constexpr int kInfiniteSmoothness = std::numeric_limits<int>::max();

/// Where the density lives: exactly on [-half_width, half_width] when
/// `compact`, otherwise effectively there after tail truncation.
struct Support {
  double half_width = 0.0;
  bool compact = true;
};

/// A symmetric probability density f(s) for the displacement s of a plate
/// from its mean position.
///
/// The delta kind is symbolic: it has no density values, and anything that
/// needs f or its derivatives pointwise rejects it.
class Distribution {
public:
  /// Evaluates the order-th derivative of f at s (order 0 is f itself).
  using DerivativeFn = std::function<double(int order, double s)>;

  static Distribution delta();
  /// Normal density with standard deviation `rms_width`.
  static Distribution gaussian(double rms_width);
  /// (315 / (256 s0^9)) (s^2 - s0^2)^4 on [-s0, s0]; f, f', f'', f''' vanish
  /// at the edges.
  static Distribution compact_quartic(double half_width);
  /// User-supplied even density. `derivatives` must provide orders up to
  /// min(smoothness, 4); `breakpoints` lists points where f loses smoothness.
  /// Normalisation, symmetry and positivity are checked numerically.
  static Distribution custom(DerivativeFn derivatives, int smoothness,
                             Support support, double width,
                             std::vector<double> breakpoints = {});

  DistributionKind kind() const { return kind_; }
  /// Delta: 0. Gaussian: rms displacement. Compact: support half-width.
  double width() const { return width_; }
  /// Number of continuous derivatives on the whole line (-1 for delta).
  int smoothness() const { return smoothness_; }
  Support support() const { return support_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  /// Second moment <s^2>.
  double variance() const { return variance_; }
  /// Analytic bound on the probability mass outside support().
  double tail_mass_bound() const { return tail_mass_; }

  double pdf(double s) const { return pdf_derivative(0, s); }
  /// n-th derivative of f, n <= 4. Throws argument_error for delta or for n
  /// beyond what the density provides.
  double pdf_derivative(int n, double s) const;

private:
  Distribution() = default;

  DistributionKind kind_ = DistributionKind::delta;
  double width_ = 0.0;
  int smoothness_ = -1;
  Support support_;
  std::vector<double> breakpoints_;
  double variance_ = 0.0;
  double tail_mass_ = 0.0;
  int max_derivative_ = -1;
  std::shared_ptr<const DerivativeFn> derivatives_;
};

/// Builds a delta, Gaussian or compact-quartic distribution. Throws
/// argument_error for non-positive widths (width is ignored for delta) and
/// for custom_symmetric, which needs Distribution::custom.
Distribution make_distribution(DistributionKind kind, double width = 0.0);

/// Fourier transform fhat(alpha) = integral exp(i alpha s) f(s) ds; real and
/// even because f is.
double fourier(const Distribution& d, double alpha);

enum class TransformMethod { closed_form, quadrature };

/// F(u) = PV integral f(s) / (2s + u) ds and its first three derivatives.
///
/// Derivatives on the quadrature path move onto f by parts:
///   F^(k)(u) = (-1/2)^k PV integral f^(k)(s) / (2s + u) ds,
/// so F''' needs smoothness >= 3. Closed forms exist for delta (F = 1/u) and
/// the Gaussian (F = D(u / (2 sqrt2 Delta)) / (sqrt2 Delta), D = Dawson).
class TransformSet {
public:
  TransformSet(Distribution d, TransformMethod method,
               quad::QuadratureSpec spec);

  double operator()(double u) const { return derivative(0, u); }
  /// k-th derivative of F at u, k in 0..3.
  double derivative(int k, double u) const;
  /// Same with the quadrature error estimate (zero on the closed-form path).
  quad::QuadResult derivative_with_error(int k, double u) const;

  TransformMethod method() const { return method_; }
  const Distribution& distribution() const { return dist_; }

private:
  Distribution dist_;
  TransformMethod method_;
  quad::QuadratureSpec spec_;
};

/// Default quadrature settings for the transform path.
quad::QuadratureSpec default_transform_spec();

/// Picks the closed form when one exists unless `method` forces a path.
/// Throws argument_error when the quadrature path is forced (or is the only
/// option) for a distribution with smoothness < 3, and when the closed form
/// is forced for a kind that has none.
TransformSet transforms(const Distribution& d,
                        std::optional<TransformMethod> method = std::nullopt,
                        quad::QuadratureSpec spec = default_transform_spec());

}  // namespace fluctmirror

#include "fluctmirror/plate2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "fluctmirror/convolution.hpp"
#include "fluctmirror/errors.hpp"

namespace fluctmirror::plate2 {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kGaussianReach = 8.0;

bool is_delta(const TwoPlateProblem& p) {
  return p.dist.kind() == DistributionKind::delta;
}

void require_narrow(const TwoPlateProblem& p) {
  validate(p);
  if (!is_delta(p) && !(3.0 * effective_width(p.dist) < p.separation)) {
    throw argument_error(
        "rho2 and E2 need the distribution width below a/3 so that only the "
        "plate singularities enter the support");
  }
}

// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n);
  std::vector<double> w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double root = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = root;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * root * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (root * p1 - p0) / (root * root - 1.0);
      const double step = p1 / dp;
      root -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[i] = -root;
    x[n - 1 - i] = root;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - root * root) * dp * dp);
  }
  return {x, w};
}

// (2 sin^2 psi - 3) (psi / sin psi)^4 / pi^4, which is the rho2 kernel times
// d^4 for d the distance to the singular line and psi = pi d / L its angle.
double pole_cofactor(double psi) {
  const double s = std::sin(psi);
  const double ratio = (psi == 0.0) ? 1.0 : psi / s;
  const double r2 = ratio * ratio;
  return (2.0 * s * s - 3.0) * r2 * r2 / (kPi2 * kPi2);
}

// Angle whose sine has the same square as sin(pi (z + r) / L), taken from
// whichever of the two singular lines (theta = 0 or theta = pi) is nearer,
// so that sin is evaluated without cancellation.
double reduced_angle(double s, double r, double z, double a) {
  const double length = s + r + a;
  const double theta = kPi * (z + r) / length;
  const double phi = kPi * (z - a - s) / length;  // theta - pi
  return std::abs(theta) <= std::abs(phi) ? theta : phi;
}

double rho2_kernel(double s, double r, double z, double a) {
  const double length = s + r + a;
  const double psi = reduced_angle(s, r, z, a);
  const double sn = std::sin(psi);
  const double s2 = sn * sn;
  return (2.0 * s2 - 3.0) / (std::pow(length, 4) * s2 * s2);
}

// cot(x) csc^2(x) - 1/x^3, regular and odd.
double regular_cot_csc2(double x) {
  if (std::abs(x) < 0.5) {
    // -(1/2) sum_{n>=2} 2^(2n) |B_2n| (2n-1)(2n-2) x^(2n-3) / (2n)!
    static constexpr double kBernoulli[] = {
        0.0,           1.0 / 6.0,       1.0 / 30.0,       1.0 / 42.0,
        1.0 / 30.0,    5.0 / 66.0,      691.0 / 2730.0,   7.0 / 6.0,
        3617.0 / 510.0, 43867.0 / 798.0, 174611.0 / 330.0, 854513.0 / 138.0,
        236364091.0 / 2730.0};
    const double x2 = x * x;
    double sum = 0.0;
    double power = x;          // x^(2n-3)
    double scale = 16.0 / 24.0;  // 2^(2n) / (2n)!
    for (int n = 2; n <= 12; ++n) {
      sum += scale * kBernoulli[n] * (2.0 * n - 1.0) * (2.0 * n - 2.0) * power;
      power *= x2;
      scale *= 4.0 / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
    }
    return -0.5 * sum;
  }
  const double sn = std::sin(x);
  return std::cos(x) / (sn * sn * sn) - 1.0 / (x * x * x);
}

quad::QuadratureSpec inner_spec(const TwoPlateProblem& p) {
  quad::QuadratureSpec spec = p.spec;
  spec.breakpoints = p.dist.breakpoints();
  spec.poles.clear();
  return spec;
}

}  // namespace

quad::QuadratureSpec TwoPlateProblem::default_spec() {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-10;
  spec.max_subdivisions = 2000;
  return spec;
}

double effective_width(const Distribution& d) {
  switch (d.kind()) {
    case DistributionKind::delta: return 0.0;
    case DistributionKind::gaussian: return kGaussianReach * d.width();
    case DistributionKind::compact_quartic: return d.width();
    case DistributionKind::custom_symmetric: return d.support().half_width;
  }
  return d.support().half_width;
}

void validate(const TwoPlateProblem& p) {
  if (!(p.separation > 0.0) || !std::isfinite(p.separation)) {
    throw argument_error("plate separation must be positive and finite");
  }
  if (!(2.0 * effective_width(p.dist) < p.separation)) {
    throw argument_error("distribution width must stay below half the separation");
  }
  for (double z : p.z_grid) {
    if (!(z >= 0.0 && z <= p.separation)) {
      throw argument_error("z grid must lie in [0, a]");
    }
  }
}

double rho1(const TwoPlateProblem& p) {
  validate(p);
  const double a = p.separation;
  const double prefactor = -kPi2 / 1440.0;
  if (is_delta(p)) return prefactor / std::pow(a, 4);

  const Distribution g = quad::self_convolution(p.dist);
  const double reach = g.kind() == DistributionKind::gaussian
                           ? kGaussianReach * g.width()
                           : g.support().half_width;
  quad::QuadratureSpec spec = p.spec;
  spec.breakpoints = g.breakpoints();
  spec.tail.remainder_bound = g.tail_mass_bound() / std::pow(a - reach, 4);
  const auto r = quad::integrate(
      [&](double w) { return g.pdf(w) / std::pow(w + a, 4); }, -reach, reach, spec);
  return prefactor * r.value;
}

double rho1_double_integral(const TwoPlateProblem& p, int nodes) {
  validate(p);
  const double a = p.separation;
  if (is_delta(p)) return -kPi2 / (1440.0 * std::pow(a, 4));
  const double reach = effective_width(p.dist);
  const auto [x, w] = gauss_legendre(nodes);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double s = reach * x[i];
    const double fs = p.dist.pdf(s);
    for (int j = 0; j < nodes; ++j) {
      const double r = reach * x[j];
      sum += w[i] * w[j] * fs * p.dist.pdf(r) / std::pow(s + r + a, 4);
    }
  }
  return -kPi2 / 1440.0 * sum * reach * reach;
}

double rho2(const TwoPlateProblem& p, double z) {
  require_narrow(p);
  const double a = p.separation;
  if (!(z > 0.0 && z < a)) throw argument_error("rho2 needs 0 < z < a");
  if (is_delta(p)) {
    const double sn = std::sin(kPi * z / a);
    const double s2 = sn * sn;
    return kPi2 / 48.0 * (2.0 * s2 - 3.0) / (std::pow(a, 4) * s2 * s2);
  }

  const Distribution& f = p.dist;
  const double reach = effective_width(f);
  const double wide = 1.25 * reach;
  const quad::QuadratureSpec spec = inner_spec(p);

  // Near plate 0 the singular line is r = -z (integrate r inside); near
  // plate a it is s = z - a (integrate s inside). `pole` is the position
  // of the line along the inner variable.
  const bool lower = z < 0.5 * a;
  const double pole = lower ? -z : z - a;
  const bool singular = std::abs(pole) < 1.125 * reach;

  const auto inner = [&](double outer) {
    const auto kernel = [&](double v) {
      return lower ? rho2_kernel(outer, v, z, a) : rho2_kernel(v, outer, z, a);
    };
    if (!singular) {
      return quad::integrate([&](double v) { return f.pdf(v) * kernel(v); },
                             -reach, reach, spec)
          .value;
    }
    const auto cofactor = [&](double v) {
      const double length = outer + v + a;
      const double psi = lower ? kPi * (z + v) / length
                               : kPi * (z - a - v) / length;
      return f.pdf(v) * pole_cofactor(psi);
    };
    return quad::finite_part(cofactor, pole, 4, -wide, wide, spec).value;
  };

  quad::QuadratureSpec outer_spec = spec;
  const auto r = quad::integrate(
      [&](double outer) {
        const double fo = f.pdf(outer);
        return fo == 0.0 ? 0.0 : fo * inner(outer);
      },
      -reach, reach, outer_spec);
  return kPi2 / 48.0 * r.value;
}

double energy_density_two(const TwoPlateProblem& p, double z) {
  return rho1(p) + rho2(p, z);
}

EnergyPerArea energy_per_area(const TwoPlateProblem& p) {
  EnergyPerArea e;
  e.e1 = p.separation * rho1(p);
  if (!is_delta(p)) {
    require_narrow(p);
    const Distribution& f = p.dist;
    const double a = p.separation;
    const double reach = effective_width(f);
    const quad::QuadratureSpec spec = inner_spec(p);
    // H(s, r) = h(r; s) + h(s; r), h(r; s) = -(pi / 48 L^3) cot(x) csc^2(x),
    // x = pi r / L. The -1/(48 pi^2 r^3) part of h integrates to zero
    // against the even f; what is left is regular.
    const auto inner = [&](double s) {
      return quad::integrate(
                 [&](double r) {
                   const double length = s + r + a;
                   const double x = kPi * r / length;
                   return f.pdf(r) * -kPi / (48.0 * std::pow(length, 3)) *
                          regular_cot_csc2(x);
                 },
                 -reach, reach, spec)
          .value;
    };
    const auto r = quad::integrate(
        [&](double s) {
          const double fs = f.pdf(s);
          return fs == 0.0 ? 0.0 : fs * inner(s);
        },
        -reach, reach, spec);
    e.e2 = 2.0 * r.value;
  }
  e.total = e.e1 + e.e2;
  return e;
}

double h_kernel(double s, double r, double a) {
  if (!(a > 0.0)) throw argument_error("h_kernel needs a > 0");
  if (s == 0.0 || r == 0.0) throw pole_error("H(s, r) is singular at s = 0 or r = 0");
  const double length = s + r + a;
  if (length == 0.0) throw pole_error("H(s, r) is singular at s + r + a = 0");
  if (std::abs(s) < 1e-4 * a && std::abs(r) < 1e-4 * a) {
    return -(1.0 / (s * s * s) + 1.0 / (r * r * r)) / (48.0 * kPi2) +
           kPi2 * (s + r) / (720.0 * std::pow(a, 4));
  }
  const double A = kPi * r / length;
  const double B = kPi * (a + r) / length;
  const double sa = std::sin(A);
  const double sb = std::sin(B);
  if (sa == 0.0 || sb == 0.0) throw pole_error("H(s, r) evaluated on a singular line");
  const double numerator =
      std::cos(A) * sb * sb * sb - sa * sa * sa * std::cos(B);
  return -kPi / 48.0 * numerator /
         (std::pow(length, 3) * sa * sa * sa * sb * sb * sb);
}

}  // namespace fluctmirror::plate2

#pragma once

#include <vector>

#include "fluctmirror/dists.hpp"
#include "fluctmirror/pvquad.hpp"

// Two parallel plates at mean positions 0 and a, both fluctuating with the
// same symmetric density. The energy density splits into a z-independent
// part rho1 and a position-dependent part rho2 that diverges at sharp plates.
namespace fluctmirror::plate2 {

struct TwoPlateProblem {
  double separation = 1.0;  // a
  Distribution dist = Distribution::delta();
  std::vector<double> z_grid;
  quad::QuadratureSpec spec = default_spec();

  static quad::QuadratureSpec default_spec();
};

/// Half-width of the region where the density is non-negligible (s0, or 8 D
/// for the Gaussian; 0 for delta).
double effective_width(const Distribution& d);

/// Throws argument_error unless a > 0 and effective_width < a/2.
void validate(const TwoPlateProblem& p);

/// rho1 = -(pi^2/1440) integral g(w) / (w + a)^4 dw, g = f * f.
double rho1(const TwoPlateProblem& p);

/// rho1 straight from the double integral over f(s) f(r) on a tensor
/// Gauss-Legendre grid with `nodes` points per axis; reference route.
double rho1_double_integral(const TwoPlateProblem& p, int nodes = 48);

/// rho2(z) = (pi^2/48) integral f(s) f(r) (2 sin^2 t - 3) / (L^4 sin^4 t),
/// L = s + r + a, t = pi (z + r) / L, for 0 < z < a. Fourth-order poles on
/// the lines r = -z and s = z - a are taken as Hadamard finite parts.
/// Smooth densities need effective_width < a/3.
double rho2(const TwoPlateProblem& p, double z);

/// rho1 + rho2.
double energy_density_two(const TwoPlateProblem& p, double z);

struct EnergyPerArea {
  double total = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
};

/// Energy per unit area between the plates, E = E1 + E2 with E1 = a rho1 and
/// E2 = integral f(s) f(r) H(s, r), its third-order poles at s = 0 and r = 0
/// taken as finite parts. A sharp plate gives E2 = 0.
EnergyPerArea energy_per_area(const TwoPlateProblem& p);

/// The E2 kernel: the z-antiderivative of the rho2 integrand evaluated
/// between z = 0 and z = a,
///   H = -(pi / (48 L^3)) [cot(x) csc^2(x) + cot(y) csc^2(y)],
/// x = pi r / L, y = pi s / L. Within 1e-4 a of the origin it switches to
/// -(1/(48 pi^2)) (1/s^3 + 1/r^3) + pi^2 (s + r) / (720 a^4).
/// Throws pole_error when s or r is zero.
double h_kernel(double s, double r, double a);

}  // namespace fluctmirror::plate2

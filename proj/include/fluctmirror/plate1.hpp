#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fluctmirror/dists.hpp"
#include "fluctmirror/pvquad.hpp"

// Single reflecting plate whose position fluctuates with a symmetric density
// f. Lengths are in an arbitrary unit L with hbar = c = 1; z is measured from
// the mean plate position and must be non-negative.
namespace fluctmirror::plate1 {

/// How an observable is evaluated. `automatic` takes the closed form when one
/// exists and falls back to the transform route otherwise.
enum class Route { automatic, closed_form, transform };

/// Renormalised observables at distance z. T_mu_nu = rho (eta_mu_nu + n_mu n_nu)
/// with n the plate normal, so T_tt = rho, T_xx = T_yy = -rho, T_zz = 0.
struct StressState {
  double z = 0.0;
  double phi_sq = 0.0;
  double rho = 0.0;
  std::array<double, 4> t_diag{};  // T_tt, T_xx, T_yy, T_zz
  double e_sq = 0.0;
  std::optional<double> v_cp;
};

/// <phi^2> = F'(2z) / (4 pi^2). Gaussian closed form
/// (1 - sqrt2 (z/D) Dawson(z / (sqrt2 D))) / (16 pi^2 D^2).
double phi_sq(const Distribution& d, double z, Route route = Route::automatic);

/// <rho> = F'''(2z) / (6 pi^2). Closed forms for delta, the Gaussian (through
/// the Dawson function) and the compact quartic (logarithmic, with a cusp at
/// z = s0).
double energy_density(const Distribution& d, double z,
                      Route route = Route::automatic);

StressState stress_tensor(const Distribution& d, double z,
                          std::optional<double> polarizability = std::nullopt,
                          Route route = Route::automatic);

/// <E^2> = -3 <rho> for the electromagnetic field.
double e_squared(const Distribution& d, double z, Route route = Route::automatic);

/// Casimir-Polder potential V = -(1/2) alpha <E^2> = (3/2) alpha <rho>.
double casimir_polder(const Distribution& d, double z, double polarizability,
                      Route route = Route::automatic);

struct PotentialMinimum {
  double z_min = 0.0;
  double v_min = 0.0;
  /// Zero crossings of rho bounding the positive region near the plate.
  double inner_zero = 0.0;
  double outer_zero = 0.0;
};

struct MinimizerSpec {
  /// Search range for the sign scan, in units of the distribution width.
  double scan_extent = 20.0;
  int scan_points = 400;
  /// Golden-section stop, in units of the width.
  double z_tolerance = 1e-8;
};

/// Outer well of V(z): the minimum beyond the positive-energy region.
/// Gaussian and compact quartic only.
PotentialMinimum find_potential_minimum(const Distribution& d,
                                        double polarizability,
                                        const MinimizerSpec& spec = {});

/// Zeros of rho on (0, extent * width) found by a sign scan plus bisection.
std::vector<double> energy_density_zeros(const Distribution& d,
                                         double extent = 20.0,
                                         int scan_points = 400);

/// Integral of rho over [0, inf): quadrature to Z = 40 width plus the tail
/// -1/(48 pi^2 Z^3). The next tail term enters the error estimate.
quad::QuadResult total_energy(const Distribution& d,
                              const quad::QuadratureSpec& spec = {});

enum class Quantity { phi_sq, rho, e_sq, casimir_polder, stress };

std::string_view to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view text);

/// One profile sample. A grid point that violates a precondition carries no
/// state and the reason in `gap`.
struct ProfilePoint {
  double z = 0.0;
  std::optional<StressState> state;
  std::string gap;

  /// Selected scalar, nullopt at gaps. Quantity::stress selects rho.
  std::optional<double> value(Quantity q) const;
};

struct ProfileOptions {
  Route route = Route::automatic;
  std::optional<double> polarizability;
  /// Worker threads; output order always follows the grid.
  int threads = 1;
};

/// Evaluates the observables at every grid point. Numerical failures
/// propagate; precondition violations become gaps.
std::vector<ProfilePoint> profile(const Distribution& d, Quantity quantity,
                                  const std::vector<double>& z_grid,
                                  const ProfileOptions& options = {});

}  // namespace fluctmirror::plate1

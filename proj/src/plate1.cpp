#include "fluctmirror/plate1.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "fluctmirror/errors.hpp"
#include "fluctmirror/specfun.hpp"

namespace fluctmirror::plate1 {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

void check_z(const Distribution& d, double z) {
  if (!std::isfinite(z) || z < 0.0) {
    throw argument_error("z must be finite and non-negative");
  }
  if (d.kind() == DistributionKind::delta && z == 0.0) {
    throw pole_error("a sharp plate has a pole at z = 0");
  }
}

bool has_closed_form(const Distribution& d) {
  return d.kind() != DistributionKind::custom_symmetric;
}

TransformSet pipeline(const Distribution& d) {
  if (d.kind() == DistributionKind::delta) {
    return transforms(d, TransformMethod::closed_form);
  }
  return transforms(d, TransformMethod::quadrature);
}

// 512 pi^2 s0^4 rho for the compact quartic at t = z / s0.
double compact_scaled_rho(double t) {
  if (t > 2.0) {
    // Expansion in y = 1/t; the y^-4 .. y^2 terms cancel exactly.
    const double y2 = 1.0 / (t * t);
    double power = y2 * y2;
    double sum = 0.0;
    for (int m = 4; m < 400; ++m) {
      const double c = 630.0 * (7.0 / (2 * m + 1) - 10.0 / (2 * m - 1) +
                                3.0 / (2 * m - 3));
      const double term = c * power;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      power *= y2;
    }
    return sum;
  }
  const double t2 = t * t;
  const double coeff = 315.0 * t * (7.0 * t2 - 3.0) * (t2 - 1.0);
  const double log_term =
      (t == 1.0) ? 0.0 : coeff * std::log((t + 1.0) / std::abs(t - 1.0));
  return log_term - 4410.0 * t2 * t2 + 4830.0 * t2 - 672.0;
}

double compact_rho(double s0, double z) {
  return compact_scaled_rho(z / s0) / (512.0 * kPi2 * std::pow(s0, 4));
}

void require_finite_width(const Distribution& d, const char* what) {
  if (d.kind() != DistributionKind::gaussian &&
      d.kind() != DistributionKind::compact_quartic) {
    throw argument_error(std::string(what) +
                         " needs a gaussian or compact-quartic distribution");
  }
}

}  // namespace

double phi_sq(const Distribution& d, double z, Route route) {
  check_z(d, z);
  if (route == Route::closed_form && d.kind() != DistributionKind::delta &&
      d.kind() != DistributionKind::gaussian) {
    throw argument_error("no closed form for <phi^2> with this distribution");
  }
  if (route != Route::transform) {
    if (d.kind() == DistributionKind::delta) return -1.0 / (16.0 * kPi2 * z * z);
    if (d.kind() == DistributionKind::gaussian) {
      const double w = d.width();
      const double x = z / (std::numbers::sqrt2 * w);
      // 1 - 2x D(x) = D'(x)
      return specfun::dawson_derivative(1, x) / (16.0 * kPi2 * w * w);
    }
  }
  return pipeline(d).derivative(1, 2.0 * z) / (4.0 * kPi2);
}

double energy_density(const Distribution& d, double z, Route route) {
  check_z(d, z);
  if (route == Route::closed_form && !has_closed_form(d)) {
    throw argument_error("no closed form for <rho> with a custom distribution");
  }
  if (route != Route::transform) {
    switch (d.kind()) {
      case DistributionKind::delta:
        return -1.0 / (16.0 * kPi2 * std::pow(z, 4));
      case DistributionKind::gaussian: {
        const double w = d.width();
        const double x = z / (std::numbers::sqrt2 * w);
        return specfun::dawson_derivative(3, x) / (192.0 * kPi2 * std::pow(w, 4));
      }
      case DistributionKind::compact_quartic:
        return compact_rho(d.width(), z);
      case DistributionKind::custom_symmetric:
        break;
    }
  }
  return pipeline(d).derivative(3, 2.0 * z) / (6.0 * kPi2);
}

StressState stress_tensor(const Distribution& d, double z,
                          std::optional<double> polarizability, Route route) {
  if (polarizability && !(*polarizability > 0.0)) {
    throw argument_error("polarizability must be positive");
  }
  StressState st;
  st.z = z;
  st.rho = energy_density(d, z, route);
  // <phi^2> has no closed form for the compact quartic.
  const bool phi_closed = d.kind() == DistributionKind::delta ||
                          d.kind() == DistributionKind::gaussian;
  st.phi_sq = phi_sq(d, z,
                     (route == Route::closed_form && !phi_closed) ? Route::transform
                                                                  : route);
  st.t_diag = {st.rho, -st.rho, -st.rho, 0.0};
  st.e_sq = -3.0 * st.rho;
  if (polarizability) st.v_cp = 1.5 * *polarizability * st.rho;
  return st;
}

double e_squared(const Distribution& d, double z, Route route) {
  return -3.0 * energy_density(d, z, route);
}

double casimir_polder(const Distribution& d, double z, double polarizability,
                      Route route) {
  if (!(polarizability > 0.0)) {
    throw argument_error("polarizability must be positive");
  }
  return 1.5 * polarizability * energy_density(d, z, route);
}

std::vector<double> energy_density_zeros(const Distribution& d, double extent,
                                         int scan_points) {
  if (d.kind() == DistributionKind::delta) {
    throw argument_error("a sharp plate has no finite energy-density profile");
  }
  if (scan_points < 2 || !(extent > 0.0)) {
    throw argument_error("zero scan needs extent > 0 and at least 2 points");
  }
  const double w = d.width();
  const auto rho = [&](double z) { return energy_density(d, z); };
  std::vector<double> zeros;
  double z_prev = 0.0;
  double r_prev = rho(0.0);
  for (int i = 1; i <= scan_points; ++i) {
    const double z = extent * w * i / scan_points;
    const double r = rho(z);
    if ((r_prev < 0.0) != (r < 0.0)) {
      double lo = z_prev;
      double hi = z;
      const bool lo_negative = r_prev < 0.0;
      for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((rho(mid) < 0.0) == lo_negative) lo = mid; else hi = mid;
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    z_prev = z;
    r_prev = r;
  }
  return zeros;
}

PotentialMinimum find_potential_minimum(const Distribution& d,
                                        double polarizability,
                                        const MinimizerSpec& spec) {
  require_finite_width(d, "find_potential_minimum");
  if (!(polarizability > 0.0)) {
    throw argument_error("polarizability must be positive");
  }
  const double w = d.width();
  const auto zeros = energy_density_zeros(d, spec.scan_extent, spec.scan_points);
  if (zeros.size() < 2) {
    throw numerical_error("could not bracket the positive-energy region",
                          zeros.empty() ? 0.0 : zeros.front(), 0.0);
  }
  const double outer = zeros[1];
  const auto v = [&](double z) { return casimir_polder(d, z, polarizability); };

  const double z_end = spec.scan_extent * w;
  const int n = spec.scan_points;
  const double step = (z_end - outer) / n;
  int best = 1;
  double best_v = v(outer + step);
  for (int i = 2; i < n; ++i) {
    const double vi = v(outer + i * step);
    if (vi < best_v) {
      best_v = vi;
      best = i;
    }
  }
  if (best == n - 1) {
    throw numerical_error("potential minimum not bracketed inside the scan range",
                          outer + best * step, step);
  }

  // Golden-section search on [outer + (best-1) step, outer + (best+1) step].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = outer + (best - 1) * step;
  double b = outer + (best + 1) * step;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double vc = v(c);
  double ve = v(e);
  while (b - a > spec.z_tolerance * w) {
    if (vc < ve) {
      b = e;
      e = c;
      ve = vc;
      c = b - inv_phi * (b - a);
      vc = v(c);
    } else {
      a = c;
      c = e;
      vc = ve;
      e = a + inv_phi * (b - a);
      ve = v(e);
    }
  }
  const double z_min = 0.5 * (a + b);
  return {z_min, v(z_min), zeros[0], outer};
}

quad::QuadResult total_energy(const Distribution& d,
                              const quad::QuadratureSpec& spec) {
  require_finite_width(d, "total_energy");
  const double w = d.width();
  const double z_max = 40.0 * w;
  quad::QuadratureSpec local = spec;
  for (double f : {0.5, 1.0, 2.0, 4.0, 10.0}) local.breakpoints.push_back(f * w);
  quad::QuadResult r = quad::integrate(
      [&](double z) { return energy_density(d, z); }, 0.0, z_max, local);
  r.value += -1.0 / (48.0 * kPi2 * std::pow(z_max, 3));
  // Next term of the large-z expansion: -(5/8pi^2) <s^2> / z^6.
  r.error += d.variance() / (8.0 * kPi2 * std::pow(z_max, 5));
  return r;
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::phi_sq: return "phisq";
    case Quantity::rho: return "rho";
    case Quantity::e_sq: return "esq";
    case Quantity::casimir_polder: return "cp";
    case Quantity::stress: return "stress";
  }
  return "unknown";
}

std::optional<Quantity> parse_quantity(std::string_view text) {
  for (Quantity q : {Quantity::phi_sq, Quantity::rho, Quantity::e_sq,
                     Quantity::casimir_polder, Quantity::stress}) {
    if (text == to_string(q)) return q;
  }
  return std::nullopt;
}

std::optional<double> ProfilePoint::value(Quantity q) const {
  if (!state) return std::nullopt;
  switch (q) {
    case Quantity::phi_sq: return state->phi_sq;
    case Quantity::rho: return state->rho;
    case Quantity::e_sq: return state->e_sq;
    case Quantity::casimir_polder: return state->v_cp;
    case Quantity::stress: return state->rho;
  }
  return std::nullopt;
}

std::vector<ProfilePoint> profile(const Distribution& d, Quantity quantity,
                                  const std::vector<double>& z_grid,
                                  const ProfileOptions& options) {
  if (quantity == Quantity::casimir_polder && !options.polarizability) {
    throw argument_error("the cp profile needs a polarizability");
  }
  std::vector<ProfilePoint> out(z_grid.size());
  auto fill = [&](std::size_t i) {
    ProfilePoint& p = out[i];
    p.z = z_grid[i];
    try {
      p.state = stress_tensor(d, p.z, options.polarizability, options.route);
    } catch (const pole_error& e) {
      p.gap = e.what();
    } catch (const argument_error& e) {
      p.gap = e.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(options.threads, 1)), 1, z_grid.size() ? z_grid.size() : 1);
  if (workers == 1) {
    for (std::size_t i = 0; i < z_grid.size(); ++i) fill(i);
    return out;
  }
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < z_grid.size(); i += workers) fill(i);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace fluctmirror::plate1

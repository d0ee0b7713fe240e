#include "fluctmirror/pvquad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>

#include "fluctmirror/errors.hpp"

namespace fluctmirror::quad {
namespace {

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208977491000, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  double floor;  // roundoff limit of `error`
};

bool operator<(const Segment& a, const Segment& b) { return a.error < b.error; }

Segment gauss_kronrod21(const Integrand& g, double lo, double hi, long& evals) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = g(centre);
  double res_gauss = 0.0;
  double res_kronrod = fc * kWgk[10];
  double res_abs = std::abs(res_kronrod);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(centre - dx);
    f2[j] = g(centre + dx);
    const double pair = f1[j] + f2[j];
    if (j % 2 == 1) res_gauss += kWg[j / 2] * pair;
    res_kronrod += kWgk[j] * pair;
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
  }
  evals += 21;
  const double mean = 0.5 * res_kronrod;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double abs_half = std::abs(half);
  res_abs *= abs_half;
  res_asc *= abs_half;
  double err = std::abs((res_kronrod - res_gauss) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  const double floor = 50.0 * kEps * res_abs;
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(floor, err);
  }
  return {lo, hi, res_kronrod * half, err, floor};
}

void check_pole_inside(double pole, double lo, double hi,
                       const QuadratureSpec& spec) {
  if (!(lo < pole && pole < hi)) {
    throw argument_error("pole must lie strictly inside the interval");
  }
  if (std::min(pole - lo, hi - pole) <= spec.rel_tol * (hi - lo)) {
    throw argument_error("pole too close to an interval endpoint");
  }
}

double tolerance(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

// Finite parts of integral_{-1}^{1} T_j(x) x^{-n} dx, n = 0..4, j < kCentred.
constexpr int kCentredNodes = 40;
// Finite parts of integral_{-1}^{1} T_j(x) (1+x)^{-n} dx, for the one-sided
// windows used when the pole coincides with a breakpoint.
constexpr int kOneSidedNodes = 16;

using MomentTable = std::array<std::array<double, kCentredNodes>, 5>;

const MomentTable& centred_moments() {
  static const MomentTable table = [] {
    std::array<std::array<long double, kCentredNodes>, 5> m{};
    for (int j = 0; j < kCentredNodes; ++j) {
      m[0][j] = (j % 2 == 1) ? 0.0L : 2.0L / (1.0L - 1.0L * j * j);
    }
    for (int n = 1; n <= 4; ++n) {
      m[n][0] = (n % 2 == 1) ? 0.0L : 2.0L / (1.0L - n);
      m[n][1] = m[n - 1][0];
      for (int j = 1; j + 1 < kCentredNodes; ++j) {
        m[n][j + 1] = 2.0L * m[n - 1][j] - m[n][j - 1];
      }
    }
    MomentTable out{};
    for (int n = 0; n <= 4; ++n) {
      for (int j = 0; j < kCentredNodes; ++j) out[n][j] = double(m[n][j]);
    }
    return out;
  }();
  return table;
}

using EdgeMomentTable = std::array<std::array<double, kOneSidedNodes>, 5>;

const EdgeMomentTable& edge_moments() {
  static const EdgeMomentTable table = [] {
    std::array<std::array<long double, kOneSidedNodes>, 5> m{};
    for (int j = 0; j < kOneSidedNodes; ++j) {
      m[0][j] = (j % 2 == 1) ? 0.0L : 2.0L / (1.0L - 1.0L * j * j);
    }
    for (int n = 1; n <= 4; ++n) {
      m[n][0] = (n == 1) ? std::log(2.0L) : std::pow(2.0L, 1 - n) / (1.0L - n);
      m[n][1] = m[n - 1][0] - m[n][0];
      for (int j = 1; j + 1 < kOneSidedNodes; ++j) {
        m[n][j + 1] = 2.0L * m[n - 1][j] - 2.0L * m[n][j] - m[n][j - 1];
      }
    }
    EdgeMomentTable out{};
    for (int n = 0; n <= 4; ++n) {
      for (int j = 0; j < kOneSidedNodes; ++j) out[n][j] = double(m[n][j]);
    }
    return out;
  }();
  return table;
}

// Chebyshev coefficients of the degree nodes-1 interpolant through
// first-kind nodes; values[k] = g(x_k), x_k = cos(pi (k + 1/2) / nodes).
std::vector<double> chebyshev_coefficients(const std::vector<double>& values) {
  const int nodes = static_cast<int>(values.size());
  std::vector<double> c(nodes, 0.0);
  for (int j = 0; j < nodes; ++j) {
    double sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
      sum += values[k] * std::cos(std::numbers::pi * j * (k + 0.5) / nodes);
    }
    c[j] = 2.0 * sum / nodes;
  }
  c[0] *= 0.5;
  return c;
}

double node(int k, int nodes) {
  return std::cos(std::numbers::pi * (k + 0.5) / nodes);
}

struct WindowSum {
  double value;
  double floor;  // roundoff level of `value`
};

// sum c_j m_j over the coefficients above the interpolation noise. The
// moments grow like j^(order-1), so noise-level coefficients would
// otherwise dominate for high-order poles.
WindowSum chopped_sum(const std::vector<double>& values,
                      std::span<const double> moments) {
  const auto c = chebyshev_coefficients(values);
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  const double noise = 64.0 * kEps * peak;
  double sum = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (std::abs(c[j]) <= noise) continue;
    sum += c[j] * moments[j];
    scale += std::abs(moments[j]);
  }
  return {sum, noise * std::max(scale, 1.0)};
}

// Finite part over [pole - width, pole + width] from a centred fit.
WindowSum centred_window(const Integrand& g, double pole, double width,
                         int order, int nodes, long& evals) {
  std::vector<double> values(nodes);
  for (int k = 0; k < nodes; ++k) values[k] = g(pole + width * node(k, nodes));
  evals += nodes;
  const WindowSum w = chopped_sum(values, centred_moments()[order]);
  const double factor = std::pow(width, 1 - order);
  return {factor * w.value, factor * w.floor};
}

// Same window assembled from two one-sided fits; only needs g to be
// C^(order-1) at the pole, not smooth across it.
WindowSum split_window(const Integrand& g, double pole, double width,
                       int order, int nodes, long& evals) {
  const double half = 0.5 * width;
  const double factor = std::pow(half, 1 - order);
  WindowSum total{0.0, 0.0};
  for (const double side : {1.0, -1.0}) {
    std::vector<double> values(nodes);
    for (int k = 0; k < nodes; ++k) {
      values[k] = g(pole + side * half * (node(k, nodes) + 1.0));
    }
    evals += nodes;
    const WindowSum w = chopped_sum(values, edge_moments()[order]);
    const double sign = (side < 0.0 && order % 2 == 1) ? -1.0 : 1.0;
    total.value += sign * factor * w.value;
    total.floor += factor * w.floor;
  }
  return total;
}

std::string describe(const char* what, double value, double error) {
  std::ostringstream os;
  os << what << " (estimate " << value << ", error " << error << ")";
  return os.str();
}

}  // namespace

void QuadratureSpec::validate(double lo, double hi) const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw argument_error("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw argument_error("max_subdivisions must be at least 1");
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw argument_error("integration interval must be finite and ordered");
  }
  const double margin = rel_tol * (hi - lo);
  for (const Pole& p : poles) {
    if (p.order < 1 || p.order > 4) {
      throw argument_error("pole order must be between 1 and 4");
    }
    if (std::abs(p.location - lo) <= margin ||
        std::abs(p.location - hi) <= margin) {
      throw argument_error("pole too close to an interval endpoint");
    }
  }
}

QuadResult integrate(const Integrand& g, double lo, double hi,
                     const QuadratureSpec& spec) {
  if (lo == hi) return {};
  if (lo > hi) {
    QuadResult r = integrate(g, hi, lo, spec);
    r.value = -r.value;
    return r;
  }
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0)) {
    throw argument_error("quadrature tolerances must be positive");
  }

  std::vector<double> cuts{lo};
  for (double b : spec.breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  long evals = 0;
  std::vector<Segment> heap;
  double value = 0.0;
  double error = 0.0;
  double floor = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push_back(gauss_kronrod21(g, cuts[i], cuts[i + 1], evals));
    value += heap.back().value;
    error += heap.back().error;
    floor += heap.back().floor;
  }
  std::make_heap(heap.begin(), heap.end());

  // Cancellation can put the requested tolerance below what double
  // precision resolves; stop at the roundoff floor and report it.
  while (error > std::max(tolerance(spec, value), 2.0 * floor)) {
    if (static_cast<int>(heap.size()) >= spec.max_subdivisions) {
      throw numerical_error(describe("quadrature did not converge", value, error),
                            value, error);
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw numerical_error(
          describe("quadrature hit the roundoff limit", value, error), value,
          error);
    }
    const Segment left = gauss_kronrod21(g, worst.lo, mid, evals);
    const Segment right = gauss_kronrod21(g, mid, worst.hi, evals);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    floor += left.floor + right.floor - worst.floor;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }

  // Re-sum to shed the drift of the running totals.
  value = 0.0;
  error = 0.0;
  for (const Segment& s : heap) {
    value += s.value;
    error += s.error;
  }
  if (!std::isfinite(value)) {
    throw numerical_error("integrand produced non-finite values", value, error);
  }
  return {value, error + spec.tail.remainder_bound, evals};
}

QuadResult pv_cauchy(const Integrand& g, double pole, double lo, double hi,
                     const QuadratureSpec& spec) {
  spec.validate(lo, hi);
  check_pole_inside(pole, lo, hi, spec);

  const double g_pole = g(pole);
  const double h = 1e-6 * (hi - lo);
  const Integrand regular = [&](double s) {
    if (s == pole) return (g(pole + h) - g(pole - h)) / (2.0 * h);
    return (g(s) - g_pole) / (s - pole);
  };
  QuadratureSpec split = spec;
  split.breakpoints.push_back(pole);
  QuadResult r = integrate(regular, lo, hi, split);
  r.value += g_pole * std::log((hi - pole) / (pole - lo));
  r.evaluations += 1;
  return r;
}

QuadResult finite_part(const Integrand& g, double pole, int order, double lo,
                       double hi, const QuadratureSpec& spec) {
  if (order < 1 || order > 4) {
    throw argument_error("finite_part: order must be between 1 and 4");
  }
  spec.validate(lo, hi);
  check_pole_inside(pole, lo, hi, spec);

  const double coincide = 1e-12 * (hi - lo);
  double width = std::min(pole - lo, hi - pole);
  bool kink_at_pole = false;
  for (double b : spec.breakpoints) {
    const double d = std::abs(b - pole);
    if (d <= coincide) {
      kink_at_pole = true;
    } else {
      width = std::min(width, d);
    }
  }

  long evals = 0;
  double best = 0.0;
  double best_error = std::numeric_limits<double>::infinity();
  double best_width = width;
  double best_floor = 0.0;
  int worse_in_a_row = 0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    WindowSum fine;
    WindowSum coarse;
    if (kink_at_pole) {
      fine = split_window(g, pole, width, order, kOneSidedNodes, evals);
      coarse = split_window(g, pole, width, order, kOneSidedNodes / 2, evals);
    } else {
      fine = centred_window(g, pole, width, order, kCentredNodes, evals);
      coarse = centred_window(g, pole, width, order, kCentredNodes / 2, evals);
    }
    const double err = std::abs(fine.value - coarse.value);
    if (err < best_error) {
      best = fine.value;
      best_error = err;
      best_width = width;
      best_floor = fine.floor;
      worse_in_a_row = 0;
    } else if (++worse_in_a_row >= 3) {
      break;
    }
    if (err <= std::max(tolerance(spec, fine.value), fine.floor)) break;
    width *= 0.5;
  }
  if (!std::isfinite(best)) {
    throw numerical_error("finite part produced non-finite values", best,
                          best_error);
  }

  const Integrand full = [&](double s) {
    return g(s) / std::pow(s - pole, order);
  };
  QuadResult left = integrate(full, lo, pole - best_width, spec);
  QuadResult right = integrate(full, pole + best_width, hi, spec);
  QuadResult out{best + left.value + right.value,
                 best_error + left.error + right.error,
                 evals + left.evaluations + right.evaluations};
  if (best_error > 1e3 * std::max(tolerance(spec, out.value), best_floor)) {
    throw numerical_error(
        describe("finite part window did not converge", out.value, out.error),
        out.value, out.error);
  }
  return out;
}

QuadResult singular_integrate(const Integrand& g, double lo, double hi,
                              const QuadratureSpec& spec) {
  spec.validate(lo, hi);
  std::vector<Pole> inside;
  for (const Pole& p : spec.poles) {
    if (p.location > lo && p.location < hi) inside.push_back(p);
  }
  const auto& all = spec.poles;
  auto denominator_without = [&all](double s, std::size_t skip_index,
                                    const Pole& skip) {
    double d = 1.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (i == skip_index && all[i].location == skip.location) continue;
      d *= std::pow(s - all[i].location, all[i].order);
    }
    return d;
  };
  if (inside.empty()) {
    return integrate(
        [&](double s) {
          return g(s) / denominator_without(s, all.size(), Pole{});
        },
        lo, hi, spec);
  }
  std::sort(inside.begin(), inside.end(),
            [](const Pole& a, const Pole& b) { return a.location < b.location; });

  QuadResult total;
  double piece_lo = lo;
  for (std::size_t j = 0; j < inside.size(); ++j) {
    const double piece_hi = (j + 1 < inside.size())
                                ? 0.5 * (inside[j].location + inside[j + 1].location)
                                : hi;
    std::size_t index = 0;
    while (all[index].location != inside[j].location) ++index;
    const Pole pole = inside[j];
    const Integrand cofactor = [&, index, pole](double s) {
      return g(s) / denominator_without(s, index, pole);
    };
    QuadratureSpec local = spec;
    local.poles.clear();
    const QuadResult r =
        finite_part(cofactor, pole.location, pole.order, piece_lo, piece_hi, local);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    piece_lo = piece_hi;
  }
  return total;
}

}  // namespace fluctmirror::quad

// fluctmirror: profile sweeps, total-energy checks, two-plate runs and the
// acceptance suite. Exit codes: 0 success, 2 argument error, 3 numerical
// failure or missed tolerance.
#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fluctmirror/acceptance.hpp"
#include "fluctmirror/errors.hpp"
#include "fluctmirror/plate1.hpp"
#include "fluctmirror/plate2.hpp"

#ifndef FLUCTMIRROR_VERSION
#define FLUCTMIRROR_VERSION "0.0.0"
#endif

namespace fm = fluctmirror;

namespace {

constexpr int kOk = 0;
constexpr int kArgument = 2;
constexpr int kNumerical = 3;

struct RunConfig {
  std::string command;
  std::string dist = "gaussian";
  double width = 1.0;
  std::string quantity;
  double zmin = 0.0;
  double zmax = 5.0;
  int steps = 101;
  double a = 1.0;
  double polarizability = 1.0;
  std::string output = "-";
  std::optional<double> tolerance;
  std::string header = "plain";
  double margin = 0.01;
  int threads = 1;
};

// Missed tolerance, reported with exit code 3.
struct tolerance_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

fm::Distribution distribution(const RunConfig& cfg) {
  const auto kind = fm::parse_distribution_kind(cfg.dist);
  if (!kind || *kind == fm::DistributionKind::custom_symmetric) {
    throw fm::argument_error("--dist must be delta, gaussian or compact");
  }
  if (*kind == fm::DistributionKind::delta) return fm::Distribution::delta();
  if (!(cfg.width > 0.0) || !std::isfinite(cfg.width)) {
    throw fm::argument_error("--width must be positive");
  }
  return fm::make_distribution(*kind, cfg.width);
}

std::vector<double> grid(double lo, double hi, int steps) {
  if (steps < 2) throw fm::argument_error("--steps must be at least 2");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw fm::argument_error("z range must satisfy zmin < zmax");
  }
  std::vector<double> z(steps);
  for (int i = 0; i < steps; ++i) z[i] = lo + (hi - lo) * i / (steps - 1);
  z.back() = hi;
  return z;
}

// Evaluates fn over the grid on `threads` workers; results keep grid order.
std::vector<double> ordered_map(const std::vector<double>& z, int threads,
                                const std::function<double(double)>& fn) {
  std::vector<double> out(z.size());
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, z.size());
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < z.size(); i += workers) out[i] = fn(z[i]);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

class Sink {
public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw fm::argument_error("cannot open output file " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

void provenance(std::ostream& os, const RunConfig& cfg) {
  if (cfg.header != "full") return;
  os << "# fluctmirror " << FLUCTMIRROR_VERSION << '\n';
  os << "# command=" << cfg.command << " dist=" << cfg.dist << " width=" << fmt(cfg.width)
     << " quantity=" << cfg.quantity << '\n';
  os << "# zmin=" << fmt(cfg.zmin) << " zmax=" << fmt(cfg.zmax) << " steps=" << cfg.steps
     << " a=" << fmt(cfg.a) << " margin=" << fmt(cfg.margin)
     << " polarizability=" << fmt(cfg.polarizability) << '\n';
  os << "# tolerance=" << (cfg.tolerance ? fmt(*cfg.tolerance) : "default")
     << " threads=" << cfg.threads << '\n';
}

int run_profile(const RunConfig& cfg) {
  const auto quantity = fm::plate1::parse_quantity(cfg.quantity);
  if (!quantity) throw fm::argument_error("--quantity must be phisq, rho, esq, cp or stress");
  const fm::Distribution d = distribution(cfg);
  if (cfg.zmin < 0.0) throw fm::argument_error("--zmin must be non-negative");
  const std::vector<double> z = grid(cfg.zmin, cfg.zmax, cfg.steps);

  fm::plate1::ProfileOptions options;
  options.threads = cfg.threads;
  if (*quantity == fm::plate1::Quantity::casimir_polder) {
    options.polarizability = cfg.polarizability;
  }
  const auto points = fm::plate1::profile(d, *quantity, z, options);
  for (const auto& p : points) {
    if (!p.state) throw fm::argument_error("z = " + fmt(p.z) + ": " + p.gap);
  }

  Sink sink(cfg.output);
  std::ostream& os = sink.out();
  provenance(os, cfg);
  if (*quantity == fm::plate1::Quantity::stress) {
    os << "z,T_tt,T_xx,T_yy,T_zz\n";
    for (const auto& p : points) {
      os << fmt(p.z);
      for (double t : p.state->t_diag) os << ',' << fmt(t);
      os << '\n';
    }
  } else {
    os << "z,value\n";
    for (const auto& p : points) os << fmt(p.z) << ',' << fmt(*p.value(*quantity)) << '\n';
  }
  return kOk;
}

int run_total_energy(const RunConfig& cfg) {
  const fm::Distribution d = distribution(cfg);
  if (d.kind() == fm::DistributionKind::delta) {
    throw fm::argument_error("total energy diverges for the delta distribution");
  }
  const double tolerance = cfg.tolerance.value_or(1e-7);
  if (!(tolerance > 0.0)) throw fm::argument_error("--tolerance must be positive");
  const double unit = std::pow(d.width(), 3);

  fm::quad::QuadratureSpec spec;
  spec.abs_tol = std::min(spec.abs_tol, 0.1 * tolerance / unit);
  const fm::quad::QuadResult r = fm::plate1::total_energy(d, spec);
  const double value = r.value * unit;
  const double error = r.error * unit;
  const bool pass = std::abs(value) <= tolerance && error <= tolerance;

  Sink sink(cfg.output);
  std::ostream& os = sink.out();
  provenance(os, cfg);
  os << "quantity,value\n"
     << "integral," << fmt(value) << '\n'
     << "error," << fmt(error) << '\n'
     << "tolerance," << fmt(tolerance) << '\n'
     << "status," << (pass ? "PASS" : "FAIL") << '\n';
  os.flush();
  if (!pass) throw tolerance_failure("integral of rho not within tolerance " + fmt(tolerance));
  return kOk;
}

int run_two_plate(const RunConfig& cfg) {
  const std::string quantity = cfg.quantity.empty() ? "energy" : cfg.quantity;
  if (quantity != "energy" && quantity != "rho") {
    throw fm::argument_error("two-plate --quantity must be energy or rho");
  }
  fm::plate2::TwoPlateProblem p;
  p.separation = cfg.a;
  p.dist = distribution(cfg);
  if (cfg.tolerance) {
    if (!(*cfg.tolerance > 0.0)) throw fm::argument_error("--tolerance must be positive");
    p.spec.rel_tol = *cfg.tolerance;
  }
  fm::plate2::validate(p);

  if (quantity == "energy") {
    const fm::plate2::EnergyPerArea e = fm::plate2::energy_per_area(p);
    Sink sink(cfg.output);
    std::ostream& os = sink.out();
    provenance(os, cfg);
    os << "quantity,value\n"
       << "E," << fmt(e.total) << '\n'
       << "E1," << fmt(e.e1) << '\n'
       << "E2," << fmt(e.e2) << '\n';
    return kOk;
  }

  if (!(cfg.margin > 0.0 && 2.0 * cfg.margin < cfg.a)) {
    throw fm::argument_error("--margin must lie in (0, a/2)");
  }
  const std::vector<double> z = grid(cfg.margin, cfg.a - cfg.margin, cfg.steps);
  const double rho1 = fm::plate2::rho1(p);
  const std::vector<double> values =
      ordered_map(z, cfg.threads, [&](double zi) { return rho1 + fm::plate2::rho2(p, zi); });

  Sink sink(cfg.output);
  std::ostream& os = sink.out();
  provenance(os, cfg);
  os << "z,value\n";
  for (std::size_t i = 0; i < z.size(); ++i) os << fmt(z[i]) << ',' << fmt(values[i]) << '\n';
  return kOk;
}

int run_validate(const RunConfig& cfg) {
  const auto results = fm::acceptance::run_all();
  Sink sink(cfg.output);
  std::ostream& os = sink.out();
  int failed = 0;
  for (const auto& c : results) {
    os << fm::acceptance::summary_line(c) << '\n';
    if (!c.pass()) ++failed;
  }
  os.flush();
  if (failed > 0) {
    throw tolerance_failure(std::to_string(failed) + " acceptance criteria failed");
  }
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  const auto env = [](const char* name) { return std::string("FLUCTMIRROR_") + name; };
  sub->add_option("--dist", cfg.dist, "delta | gaussian | compact")
      ->envname(env("DIST"))
      ->capture_default_str();
  sub->add_option("--width", cfg.width, "Gaussian rms width or compact half-width s0")
      ->envname(env("WIDTH"))
      ->capture_default_str();
  sub->add_option("--output", cfg.output, "output path, - for stdout")
      ->envname(env("OUTPUT"))
      ->capture_default_str();
  sub->add_option("--header", cfg.header, "plain | full (adds # provenance lines)")
      ->envname(env("HEADER"))
      ->check(CLI::IsMember({"plain", "full"}))
      ->capture_default_str();
  sub->add_option("--tolerance", cfg.tolerance, "pass threshold or quadrature tolerance")
      ->envname(env("TOLERANCE"));
  sub->add_option("--threads", cfg.threads, "worker threads for grid evaluation")
      ->envname(env("THREADS"))
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_grid(CLI::App* sub, RunConfig& cfg) {
  const auto env = [](const char* name) { return std::string("FLUCTMIRROR_") + name; };
  sub->add_option("--quantity", cfg.quantity)->envname(env("QUANTITY"));
  sub->add_option("--zmin", cfg.zmin)->envname(env("ZMIN"))->capture_default_str();
  sub->add_option("--zmax", cfg.zmax)->envname(env("ZMAX"))->capture_default_str();
  sub->add_option("--steps", cfg.steps)->envname(env("STEPS"))->capture_default_str();
  sub->add_option("--polarizability", cfg.polarizability, "alpha for --quantity cp")
      ->envname(env("POLARIZABILITY"))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Vacuum fluctuations near a mirror with a fluctuating position"};
  app.set_version_flag("--version", FLUCTMIRROR_VERSION);
  app.require_subcommand(1);

  CLI::App* profile = app.add_subcommand("profile", "single-plate z-profile as CSV");
  add_common(profile, cfg);
  add_grid(profile, cfg);

  CLI::App* total = app.add_subcommand("total-energy", "integral of rho over z >= 0");
  add_common(total, cfg);

  CLI::App* two = app.add_subcommand("two-plate", "two fluctuating plates: energy or rho profile");
  add_common(two, cfg);
  add_grid(two, cfg);
  two->add_option("--a", cfg.a, "plate separation")
      ->envname("FLUCTMIRROR_A")
      ->capture_default_str();
  two->add_option("--margin", cfg.margin, "rho profile covers [margin, a - margin]")
      ->envname("FLUCTMIRROR_MARGIN")
      ->capture_default_str();

  CLI::App* validate = app.add_subcommand("validate", "run acceptance criteria 1-12");
  validate->add_option("--output", cfg.output)->envname("FLUCTMIRROR_OUTPUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kArgument;
  }

  try {
    if (*profile) {
      cfg.command = "profile";
      if (cfg.quantity.empty()) cfg.quantity = "rho";
      return run_profile(cfg);
    }
    if (*total) {
      cfg.command = "total-energy";
      cfg.quantity = "rho";
      return run_total_energy(cfg);
    }
    if (*two) {
      cfg.command = "two-plate";
      return run_two_plate(cfg);
    }
    cfg.command = "validate";
    return run_validate(cfg);
  } catch (const fm::argument_error& e) {
    std::cerr << "fluctmirror: argument error: " << e.what() << '\n';
    return kArgument;
  } catch (const fm::pole_error& e) {
    std::cerr << "fluctmirror: argument error: " << e.what() << '\n';
    return kArgument;
  } catch (const fm::domain_error& e) {
    std::cerr << "fluctmirror: argument error: " << e.what() << '\n';
    return kArgument;
  } catch (const fm::numerical_error& e) {
    std::cerr << "fluctmirror: numerical failure: " << e.what() << " (best estimate "
              << fmt(e.best_estimate()) << " +- " << fmt(e.error_estimate()) << ")\n";
    return kNumerical;
  } catch (const tolerance_failure& e) {
    std::cerr << "fluctmirror: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "fluctmirror: numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

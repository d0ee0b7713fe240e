#pragma once

#include <string>
#include <vector>

// The numbered acceptance criteria, runnable from tests and the CLI.
namespace fluctmirror::acceptance {

struct Check {
  enum class Kind {
    relative,  // |measured - target| / |target| <= tolerance
    absolute,  // |measured - target| <= tolerance
    at_most,   // measured <= target (tolerance unused)
  };

  std::string label;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  Kind kind = Kind::relative;

  double deviation() const;
  bool pass() const;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Check> checks;

  bool pass() const;
  /// The failing check with the largest deviation-to-tolerance ratio, or the
  /// tightest passing one.
  const Check& worst() const;
};

/// Runs criteria 1..12 in order. A criterion whose evaluation throws is
/// recorded as a single failing check carrying the exception text.
std::vector<Criterion> run_all();

/// One machine-readable line:
/// `id=<n> status=PASS|FAIL measured=<v> target=<v> tolerance=<v> check="..."`
std::string summary_line(const Criterion& c);

}  // namespace fluctmirror::acceptance

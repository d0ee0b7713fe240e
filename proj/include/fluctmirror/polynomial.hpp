#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace fluctmirror {

/// Dense real polynomial, coefficients in ascending powers.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients)
      : c_(std::move(coefficients)) {}

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative(int order = 1) const {
    std::vector<double> d = c_;
    for (int k = 0; k < order; ++k) {
      if (d.empty()) break;
      for (std::size_t i = 1; i < d.size(); ++i) d[i - 1] = d[i] * double(i);
      d.pop_back();
    }
    return Polynomial(std::move(d));
  }

  const std::vector<double>& coefficients() const { return c_; }
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }

private:
  std::vector<double> c_;
};

}  // namespace fluctmirror

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ltspec/util.hpp"

namespace ltspec {

/// Cached Gamma(q/2) for q = 1..q_max, seeded by Gamma(1/2) = sqrt(pi) and
/// Gamma(1) = 1 and filled by the recurrence Gamma(x+1) = x Gamma(x).
struct HalfIntegerGammaTable {
  std::vector<double> values;  // values[q-1] = Gamma(q/2)

  explicit HalfIntegerGammaTable(int q_max = 64) {
    if (q_max < 2) throw std::invalid_argument("HalfIntegerGammaTable: q_max < 2");
    values.resize(q_max);
    values[0] = std::sqrt(pi);
    values[1] = 1.0;
    for (int q = 3; q <= q_max; ++q)
      values[q - 1] = (0.5 * (q - 2)) * values[q - 3];
  }

  double gamma_half(int q) const {
    if (q < 1 || q > static_cast<int>(values.size()))
      throw std::invalid_argument("HalfIntegerGammaTable: q out of range");
    return values[q - 1];
  }
};

inline double gamma_fn(double x) {
  if (x <= 0 && x == std::floor(x))
    throw std::invalid_argument("gamma_fn: pole at non-positive integer");
  return std::tgamma(x);
}

// Standard Beta, B(x,y) = Gamma(x)Gamma(y)/Gamma(x+y).
inline double beta_fn(double x, double y) {
  if (x <= 0 || y <= 0) throw std::invalid_argument("beta_fn: requires positive arguments");
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

}  // namespace ltspec

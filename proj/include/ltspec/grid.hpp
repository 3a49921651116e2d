#pragma once

#include <cmath>
#include <stdexcept>

#include "ltspec/util.hpp"

namespace ltspec {

/// Uniform 1D grid on [x_min_pad, x_max_pad].
struct Grid {
  double x_min_pad = 0;
  double x_max_pad = 1;
  int n_points = 2;

  double spacing() const { return (x_max_pad - x_min_pad) / (n_points - 1); }
  double point(int i) const { return x_min_pad + spacing() * i; }

  // Nearest grid index; caller checks the residual offset when exact
  // alignment matters.
  int index_near(double x) const {
    int i = static_cast<int>(std::lround((x - x_min_pad) / spacing()));
    if (i < 0) i = 0;
    if (i >= n_points) i = n_points - 1;
    return i;
  }
};

inline Grid make_grid(double x_lo, double x_hi, int n_points) {
  if (!(x_lo < x_hi)) throw std::invalid_argument("make_grid: requires x_lo < x_hi");
  if (n_points < 2) throw std::invalid_argument("make_grid: requires n_points >= 2");
  return Grid{x_lo, x_hi, n_points};
}

}  // namespace ltspec

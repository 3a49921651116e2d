#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ltspec/util.hpp"

namespace ltspec {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1,1)
  std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre polynomial, seeded with the
// Chebyshev estimate.
inline GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

inline double gl_integrate(const std::function<double(double)>& f, double a, double b,
                           const GaussLegendreRule& rule) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

// Composite trapezoid over uniformly sampled values.
inline double trapezoid(const std::vector<double>& f, double h) {
  if (f.size() < 2) throw std::invalid_argument("trapezoid: need >= 2 samples");
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * h;
}

// Composite Simpson; falls back to a trapezoid panel at the end when the
// interval count is odd.
inline double simpson(const std::vector<double>& f, double h) {
  if (f.size() < 2) throw std::invalid_argument("simpson: need >= 2 samples");
  if (f.size() == 2) return trapezoid(f, h);
  std::size_t n_int = f.size() - 1;
  std::size_t last = (n_int % 2 == 0) ? f.size() - 1 : f.size() - 2;
  double sum = f[0] + f[last];
  for (std::size_t i = 1; i < last; ++i) sum += f[i] * ((i % 2 == 1) ? 4.0 : 2.0);
  double result = sum * h / 3.0;
  if (n_int % 2 != 0) result += 0.5 * h * (f[f.size() - 2] + f.back());
  return result;
}

// Per-sample weights of the composite Simpson rule (trapezoid panel at the
// end when the interval count is odd); used for product quadrature on grids.
inline std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n < 2) throw std::invalid_argument("simpson_weights: need >= 2 samples");
  std::vector<double> w(n, 0.0);
  if (n == 2) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  std::size_t n_int = n - 1;
  std::size_t last = (n_int % 2 == 0) ? n - 1 : n - 2;
  w[0] += h / 3.0;
  w[last] += h / 3.0;
  for (std::size_t i = 1; i < last; ++i) w[i] += (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  if (n_int % 2 != 0) {
    w[n - 2] += 0.5 * h;
    w[n - 1] += 0.5 * h;
  }
  return w;
}

}  // namespace ltspec

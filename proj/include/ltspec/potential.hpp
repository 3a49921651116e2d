#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltspec/grid.hpp"
#include "ltspec/hermitian.hpp"
#include "ltspec/quadrature.hpp"
#include "ltspec/rng.hpp"
#include "ltspec/util.hpp"

namespace ltspec {

enum class Smoothness { smooth, piecewise_constant };

enum class PotentialKind {
  zero,
  square_well,
  truncated_gaussian,
  scalar_times_identity,
  random_hermitian,
};

/// Declarative recipe for a test potential; build_potential turns it into
/// sampled data. Serialization lives with the CLI configuration code.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::square_well;

  // square_well
  double depth = 1.0;  // V = -depth on [0, width]
  double width = 1.0;

  // truncated_gaussian: -amplitude * exp(-x^2/(2 sigma^2)) * bump(x/cutoff)
  double amplitude = 1.0;
  double sigma = 0.5;
  double cutoff = 1.0;

  // random_hermitian: two bump modes on [center-halfwidth, center+halfwidth]
  int n = 1;
  std::uint64_t seed = 1;
  double center = 0.0;
  double halfwidth = 1.0;
  double scale = 1.0;

  // zero: declared support [support_lo, support_hi]
  double support_lo = -1.0;
  double support_hi = 1.0;

  std::shared_ptr<PotentialSpec> scalar;  // inner spec for scalar_times_identity

  // Discretization knobs
  double target_spacing = 1e-3;
  int pad_points = 8;
};

// C-infinity bump, value 1 at t = 0, support (-1,1).
inline double bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

/// Compactly supported Hermitian matrix potential sampled on a uniform grid.
/// The analytic evaluator is kept alongside the samples so that refined
/// resamplings and Runge-Kutta midpoints stay exact.
class MatrixPotential {
 public:
  MatrixPotential(Grid grid, double x_min, double x_max, int n, Smoothness hint,
                  std::function<Matrix(double)> eval)
      : grid_(grid),
        x_min_(x_min),
        x_max_(x_max),
        n_(n),
        hint_(hint),
        eval_(std::move(eval)) {
    if (!(x_min < x_max)) throw std::invalid_argument("MatrixPotential: zero-width support");
    if (n < 1) throw std::invalid_argument("MatrixPotential: internal_dim < 1");
    i_lo_ = grid_.index_near(x_min_);
    i_hi_ = grid_.index_near(x_max_);
    double h = grid_.spacing();
    if (std::abs(grid_.point(i_lo_) - x_min_) > 1e-9 * h ||
        std::abs(grid_.point(i_hi_) - x_max_) > 1e-9 * h)
      throw std::invalid_argument("MatrixPotential: support endpoints must lie on the grid");
    samples_.reserve(grid_.n_points);
    for (int i = 0; i < grid_.n_points; ++i) {
      double x = grid_.point(i);
      if (i < i_lo_ || i > i_hi_) {
        samples_.push_back(Matrix::Zero(n_, n_));
      } else {
        samples_.push_back(require_hermitian(eval_(x), "MatrixPotential"));
      }
    }
  }

  const Grid& grid() const { return grid_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int dim() const { return n_; }
  Smoothness smoothness() const { return hint_; }
  int support_lo_index() const { return i_lo_; }
  int support_hi_index() const { return i_hi_; }
  const std::vector<Matrix>& samples() const { return samples_; }
  const Matrix& sample(int i) const { return samples_[i]; }

  // Evaluator; exactly zero outside the declared support.
  Matrix operator()(double x) const {
    if (x < x_min_ || x > x_max_) return Matrix::Zero(n_, n_);
    return eval_(x);
  }

  // sup over x of the spectral norm of V(x).
  double sup_norm() const {
    double s = 0;
    for (int i = i_lo_; i <= i_hi_; ++i) s = std::max(s, hermitian_norm(samples_[i]));
    return s;
  }

  /// integral over the support of tr V^p, p = 1, 2, 3. Trapezoid for
  /// piecewise-constant samples (exact on constants), Simpson for smooth.
  double integral_trace_power(int p) const {
    std::vector<double> f;
    f.reserve(i_hi_ - i_lo_ + 1);
    for (int i = i_lo_; i <= i_hi_; ++i) {
      Matrix m = samples_[i];
      Matrix acc = m;
      for (int q = 1; q < p; ++q) acc = acc * m;
      f.push_back(acc.trace().real());
    }
    double h = grid_.spacing();
    return hint_ == Smoothness::piecewise_constant ? trapezoid(f, h) : simpson(f, h);
  }

  // integral of tr V_-^p (fractional p allowed).
  double integral_trace_negative_power(double p) const {
    std::vector<double> f;
    f.reserve(i_hi_ - i_lo_ + 1);
    for (int i = i_lo_; i <= i_hi_; ++i) f.push_back(trace_negative_power(samples_[i], p));
    double h = grid_.spacing();
    return hint_ == Smoothness::piecewise_constant ? trapezoid(f, h) : simpson(f, h);
  }

  /// integral of tr (dV/dx)^2; the derivative uses the 4th-order central
  /// stencil on the samples with zero padding outside the support.
  double integral_trace_dv_squared() const {
    if (hint_ != Smoothness::smooth)
      throw std::invalid_argument("integral_trace_dv_squared: requires a smooth potential");
    double h = grid_.spacing();
    auto at = [&](int i) -> Matrix {
      if (i < 0 || i >= grid_.n_points) return Matrix::Zero(n_, n_);
      return samples_[i];
    };
    std::vector<double> f;
    int margin = 2;
    int lo = std::max(i_lo_ - margin, 0), hi = std::min(i_hi_ + margin, grid_.n_points - 1);
    f.reserve(hi - lo + 1);
    for (int i = lo; i <= hi; ++i) {
      Matrix d = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
      f.push_back((d * d).trace().real());
    }
    return simpson(f, h);
  }

  bool is_real() const {
    for (int i = i_lo_; i <= i_hi_; ++i)
      if (samples_[i].imag().cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, max_abs(samples_[i])))
        return false;
    return true;
  }

  MatrixPotential scaled(double factor) const {
    auto e = eval_;
    return MatrixPotential(grid_, x_min_, x_max_, n_, hint_,
                           [e, factor](double x) -> Matrix { return factor * e(x); });
  }

  MatrixPotential resampled(double target_spacing, int pad_points) const {
    double width = x_max_ - x_min_;
    int m = std::max(2, static_cast<int>(std::ceil(width / target_spacing)));
    double h = width / m;
    Grid g{x_min_ - pad_points * h, x_max_ + pad_points * h, m + 2 * pad_points + 1};
    return MatrixPotential(g, x_min_, x_max_, n_, hint_, eval_);
  }

 private:
  Grid grid_;
  double x_min_, x_max_;
  int n_;
  Smoothness hint_;
  std::function<Matrix(double)> eval_;
  std::vector<Matrix> samples_;
  int i_lo_ = 0, i_hi_ = 0;
};

namespace detail {

inline MatrixPotential from_evaluator(double x_min, double x_max, int n, Smoothness hint,
                                      std::function<Matrix(double)> eval,
                                      const PotentialSpec& spec) {
  if (!(x_min < x_max))
    throw std::invalid_argument("build_potential: zero-width support rejected");
  double width = x_max - x_min;
  int m = std::max(2, static_cast<int>(std::ceil(width / spec.target_spacing)));
  double h = width / m;
  int pad = std::max(2, spec.pad_points);
  Grid g{x_min - pad * h, x_max + pad * h, m + 2 * pad + 1};
  return MatrixPotential(g, x_min, x_max, n, hint, std::move(eval));
}

inline Matrix random_hermitian_matrix(int n, SplitMix64& rng) {
  Matrix g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = cplx(rng.gaussian(), rng.gaussian());
  return 0.5 * (g + g.adjoint());
}

}  // namespace detail

inline MatrixPotential build_potential(const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::zero: {
      int n = spec.n;
      if (n < 1) throw std::invalid_argument("build_potential: internal_dim < 1");
      return detail::from_evaluator(
          spec.support_lo, spec.support_hi, n, Smoothness::smooth,
          [n](double) { return Matrix::Zero(n, n); }, spec);
    }
    case PotentialKind::square_well: {
      if (spec.depth <= 0) throw std::invalid_argument("build_potential: well depth must be > 0");
      if (spec.width <= 0) throw std::invalid_argument("build_potential: well width must be > 0");
      double d = spec.depth;
      return detail::from_evaluator(
          0.0, spec.width, 1, Smoothness::piecewise_constant,
          [d](double) { return Matrix::Constant(1, 1, cplx(-d, 0)); }, spec);
    }
    case PotentialKind::truncated_gaussian: {
      if (spec.cutoff <= 0) throw std::invalid_argument("build_potential: cutoff must be > 0");
      if (spec.sigma <= 0) throw std::invalid_argument("build_potential: sigma must be > 0");
      double a = spec.amplitude, s = spec.sigma, c = spec.cutoff;
      return detail::from_evaluator(
          -c, c, 1, Smoothness::smooth,
          [a, s, c](double x) {
            double v = -a * std::exp(-x * x / (2 * s * s)) * bump(x / c);
            return Matrix::Constant(1, 1, cplx(v, 0));
          },
          spec);
    }
    case PotentialKind::scalar_times_identity: {
      if (!spec.scalar)
        throw std::invalid_argument("build_potential: scalar_times_identity needs an inner spec");
      if (spec.scalar->kind == PotentialKind::scalar_times_identity)
        throw std::invalid_argument("build_potential: nested scalar_times_identity");
      if (spec.n < 1) throw std::invalid_argument("build_potential: internal_dim < 1");
      PotentialSpec inner = *spec.scalar;
      inner.n = 1;
      inner.target_spacing = spec.target_spacing;
      inner.pad_points = spec.pad_points;
      MatrixPotential base = build_potential(inner);
      int n = spec.n;
      auto eval = [base, n](double x) -> Matrix {
        return base(x)(0, 0) * Matrix::Identity(n, n);
      };
      return MatrixPotential(base.grid(), base.x_min(), base.x_max(), n, base.smoothness(),
                             eval);
    }
    case PotentialKind::random_hermitian: {
      if (spec.n < 1) throw std::invalid_argument("build_potential: internal_dim < 1");
      if (spec.halfwidth <= 0) throw std::invalid_argument("build_potential: halfwidth must be > 0");
      SplitMix64 rng(spec.seed);
      Matrix m1 = spec.scale * detail::random_hermitian_matrix(spec.n, rng);
      Matrix m2 = spec.scale * detail::random_hermitian_matrix(spec.n, rng);
      double c = spec.center, w = spec.halfwidth;
      // Two bump modes so that [V(x), V(y)] != 0 in general.
      auto eval = [m1, m2, c, w](double x) -> Matrix {
        double t = (x - c) / w;
        return bump(t) * m1 + 0.6 * bump((t + 0.35) / 0.55) * m2;
      };
      return detail::from_evaluator(c - w, c + w, spec.n, Smoothness::smooth, eval, spec);
    }
  }
  throw std::invalid_argument("build_potential: unknown potential kind");
}

}  // namespace ltspec

#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ltspec/potential.hpp"
#include "ltspec/util.hpp"

namespace ltspec {

enum class JostDirection { from_plus_infinity, from_minus_infinity };

// The Jost equation is solved for |k| >= k_floor only; the scattering
// coefficients blow up like 1/k at the origin.
inline constexpr double jost_k_floor = 1e-3;

/// Matrix solution of -Y'' + V Y = k^2 Y normalized to a pure exponential
/// outside the support of V. values/derivatives cover the whole grid.
struct JostSolution {
  cplx k;
  JostDirection direction = JostDirection::from_plus_infinity;
  Grid grid;
  double tol = 1e-9;
  int i_support_lo = 0;
  int i_support_hi = 0;
  std::vector<Matrix> values;
  std::vector<Matrix> derivatives;
};

namespace detail {

inline void check_k(cplx k) {
  if (std::abs(k) < jost_k_floor)
    throw std::invalid_argument("jost_solve: |k| below 1e-3 is excluded");
  if (k.imag() < -1e-12)
    throw std::invalid_argument("jost_solve: lower half-plane Im k < 0 not supported");
}

// Free evolution of (Y, Y') over a signed displacement d:
//   Y(x+d) = cos(kd) Y + sin(kd)/k Y',   Y'(x+d) = -k sin(kd) Y + cos(kd) Y'.
inline void free_propagate(cplx k, double d, const Matrix& y, const Matrix& z, Matrix& y_out,
                           Matrix& z_out) {
  cplx c = std::cos(k * d), s = std::sin(k * d);
  y_out = c * y + (s / k) * z;
  z_out = -k * s * y + c * z;
}

}  // namespace detail

/// Classical RK4 on the first-order system (Y, Y'), fixed step equal to the
/// grid spacing. F integrates from x_max downward, G from x_min upward, so
/// the exponentially dominant solution is the one being tracked on the
/// imaginary axis. Outside the support the solution is continued with the
/// exact free propagator.
inline JostSolution jost_solve(const MatrixPotential& V, cplx k, JostDirection direction,
                               double tol = 1e-9) {
  detail::check_k(k);
  if (!(tol > 0)) throw std::invalid_argument("jost_solve: tol must be > 0");
  const Grid& g = V.grid();
  const double h = g.spacing();
  if (h < 1e-12) throw IntegratorError("jost_solve: step size underflow");
  const int n = V.dim();
  const int i_lo = V.support_lo_index(), i_hi = V.support_hi_index();

  JostSolution sol;
  sol.k = k;
  sol.direction = direction;
  sol.grid = g;
  sol.tol = tol;
  sol.i_support_lo = i_lo;
  sol.i_support_hi = i_hi;
  sol.values.assign(g.n_points, Matrix());
  sol.derivatives.assign(g.n_points, Matrix());

  const cplx k2 = k * k;
  auto w = [&](double x) -> Matrix { return V(x) - k2 * Matrix::Identity(n, n); };

  auto rk4_step = [&](double x, double step, Matrix& y, Matrix& z) {
    Matrix w0 = w(x), wm = w(x + 0.5 * step), w1 = w(x + step);
    Matrix k1y = z;
    Matrix k1z = w0 * y;
    Matrix k2y = z + (0.5 * step) * k1z;
    Matrix k2z = wm * (y + (0.5 * step) * k1y);
    Matrix k3y = z + (0.5 * step) * k2z;
    Matrix k3z = wm * (y + (0.5 * step) * k2y);
    Matrix k4y = z + step * k3z;
    Matrix k4z = w1 * (y + step * k3y);
    y += (step / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    z += (step / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
  };

  if (direction == JostDirection::from_plus_infinity) {
    // Boundary condition exact on [x_max, end of grid].
    for (int i = i_hi; i < g.n_points; ++i) {
      cplx e = std::exp(iu * k * g.point(i));
      sol.values[i] = e * Matrix::Identity(n, n);
      sol.derivatives[i] = iu * k * e * Matrix::Identity(n, n);
    }
    Matrix y = sol.values[i_hi], z = sol.derivatives[i_hi];
    for (int i = i_hi; i > i_lo; --i) {
      rk4_step(g.point(i), -h, y, z);
      sol.values[i - 1] = y;
      sol.derivatives[i - 1] = z;
    }
    for (int i = i_lo - 1; i >= 0; --i)
      detail::free_propagate(k, g.point(i) - g.point(i_lo), sol.values[i_lo],
                             sol.derivatives[i_lo], sol.values[i], sol.derivatives[i]);
  } else {
    for (int i = 0; i <= i_lo; ++i) {
      cplx e = std::exp(-iu * k * g.point(i));
      sol.values[i] = e * Matrix::Identity(n, n);
      sol.derivatives[i] = -iu * k * e * Matrix::Identity(n, n);
    }
    Matrix y = sol.values[i_lo], z = sol.derivatives[i_lo];
    for (int i = i_lo; i < i_hi; ++i) {
      rk4_step(g.point(i), h, y, z);
      sol.values[i + 1] = y;
      sol.derivatives[i + 1] = z;
    }
    for (int i = i_hi + 1; i < g.n_points; ++i)
      detail::free_propagate(k, g.point(i) - g.point(i_hi), sol.values[i_hi],
                             sol.derivatives[i_hi], sol.values[i], sol.derivatives[i]);
  }
  return sol;
}

/// Exact matrix-exponential propagation per constant panel; the oracle route
/// for piecewise-constant potentials.
inline JostSolution jost_solve_panels(const MatrixPotential& V, cplx k, JostDirection direction) {
  detail::check_k(k);
  if (V.smoothness() != Smoothness::piecewise_constant)
    throw std::invalid_argument("jost_solve_panels: requires a piecewise-constant potential");
  const Grid& g = V.grid();
  const double h = g.spacing();
  const int n = V.dim();
  const int i_lo = V.support_lo_index(), i_hi = V.support_hi_index();

  JostSolution sol;
  sol.k = k;
  sol.direction = direction;
  sol.grid = g;
  sol.tol = 0;
  sol.i_support_lo = i_lo;
  sol.i_support_hi = i_hi;
  sol.values.assign(g.n_points, Matrix());
  sol.derivatives.assign(g.n_points, Matrix());

  // One eigenbasis per sample panel; mu_j = sqrt(v_j - k^2).
  auto panel_step = [&](const Matrix& vconst, double step, Matrix& y, Matrix& z) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(vconst);
    Matrix u = es.eigenvectors();
    Matrix yb = u.adjoint() * y, zb = u.adjoint() * z;
    for (int j = 0; j < n; ++j) {
      cplx mu = std::sqrt(cplx(es.eigenvalues()[j], 0) - k * k);
      cplx ch, shm;  // cosh(mu d), sinh(mu d)/mu
      if (std::abs(mu) * std::abs(step) < 1e-6) {
        cplx m2 = mu * mu * step * step;
        ch = 1.0 + 0.5 * m2;
        shm = step * (1.0 + m2 / 6.0);
      } else {
        ch = std::cosh(mu * step);
        shm = std::sinh(mu * step) / mu;
      }
      for (int c = 0; c < n; ++c) {
        cplx yv = yb(j, c), zv = zb(j, c);
        yb(j, c) = ch * yv + shm * zv;
        zb(j, c) = mu * mu * shm * yv + ch * zv;
      }
    }
    y = u * yb;
    z = u * zb;
  };

  if (direction == JostDirection::from_plus_infinity) {
    for (int i = i_hi; i < g.n_points; ++i) {
      cplx e = std::exp(iu * k * g.point(i));
      sol.values[i] = e * Matrix::Identity(n, n);
      sol.derivatives[i] = iu * k * e * Matrix::Identity(n, n);
    }
    Matrix y = sol.values[i_hi], z = sol.derivatives[i_hi];
    for (int i = i_hi; i > i_lo; --i) {
      // panel value from the interval midpoint; panel edges sit on grid points
      panel_step(V(g.point(i) - 0.5 * h), -h, y, z);
      sol.values[i - 1] = y;
      sol.derivatives[i - 1] = z;
    }
    for (int i = i_lo - 1; i >= 0; --i)
      detail::free_propagate(k, g.point(i) - g.point(i_lo), sol.values[i_lo],
                             sol.derivatives[i_lo], sol.values[i], sol.derivatives[i]);
  } else {
    for (int i = 0; i <= i_lo; ++i) {
      cplx e = std::exp(-iu * k * g.point(i));
      sol.values[i] = e * Matrix::Identity(n, n);
      sol.derivatives[i] = -iu * k * e * Matrix::Identity(n, n);
    }
    Matrix y = sol.values[i_lo], z = sol.derivatives[i_lo];
    for (int i = i_lo; i < i_hi; ++i) {
      panel_step(V(g.point(i) + 0.5 * h), h, y, z);
      sol.values[i + 1] = y;
      sol.derivatives[i + 1] = z;
    }
    for (int i = i_hi + 1; i < g.n_points; ++i)
      detail::free_propagate(k, g.point(i) - g.point(i_hi), sol.values[i_hi],
                             sol.derivatives[i_hi], sol.values[i], sol.derivatives[i]);
  }
  return sol;
}

/// T(x,k) = e^{-ikx} F(x,k) on the grid; identically 1 for x >= x_max.
inline std::vector<Matrix> t_matrix(const MatrixPotential& V, cplx k, double tol = 1e-9) {
  JostSolution f = jost_solve(V, k, JostDirection::from_plus_infinity, tol);
  std::vector<Matrix> t;
  t.reserve(f.values.size());
  for (int i = 0; i < f.grid.n_points; ++i)
    t.push_back(std::exp(-iu * k * f.grid.point(i)) * f.values[i]);
  return t;
}

// Max over interior points of the second-order stencil residual
// || -D2 Y + V Y - k^2 Y || / max(1, ||Y||), a coarse sanity check on the
// returned solution (carries its own O(h^2 k^4) truncation).
inline double ode_stencil_residual(const JostSolution& sol, const MatrixPotential& V) {
  const Grid& g = sol.grid;
  double h = g.spacing(), worst = 0;
  for (int i = 1; i + 1 < g.n_points; ++i) {
    Matrix d2 = (sol.values[i + 1] - 2.0 * sol.values[i] + sol.values[i - 1]) / (h * h);
    Matrix r = -d2 + V.sample(i) * sol.values[i] - sol.k * sol.k * sol.values[i];
    worst = std::max(worst, max_abs(r) / std::max(1.0, max_abs(sol.values[i])));
  }
  return worst;
}

// Wronskian-type matrix W1[F,G](x,k) = G* F' - G'* F, x-independent for real k.
inline Matrix wronskian_w1(const JostSolution& f, const JostSolution& g, int i) {
  return g.values[i].adjoint() * f.derivatives[i] - g.derivatives[i].adjoint() * f.values[i];
}

}  // namespace ltspec

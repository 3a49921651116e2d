#pragma once

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ltspec/jost.hpp"
#include "ltspec/potential.hpp"
#include "ltspec/util.hpp"

namespace ltspec {

/// A(k), B(k) from the representation F = e^{-ikx} B + e^{ikx} A below the
/// support, solved from (F, F') at a single point:
///   A = e^{-ik x}(ik F + F')/(2ik),   B = e^{ik x}(ik F - F')/(2ik).
struct ABPair {
  Matrix A;
  Matrix B;
  double consistency = 0;  // reconstruction defect one grid point further out
};

inline ABPair extract_AB(const JostSolution& F, const MatrixPotential& V,
                         std::optional<double> x_eval_opt = std::nullopt) {
  const Grid& g = F.grid;
  int i_eval = V.support_lo_index() - 1;
  if (x_eval_opt) {
    double x_eval = *x_eval_opt;
    if (x_eval > V.x_min() + 1e-12)
      throw std::invalid_argument("extract_AB: x_eval inside the support");
    i_eval = g.index_near(x_eval);
    if (g.point(i_eval) > V.x_min() + 1e-12) i_eval = V.support_lo_index();
  }
  if (i_eval < 1) throw std::invalid_argument("extract_AB: grid has no room below the support");

  cplx k = F.k;
  double x = g.point(i_eval);
  const Matrix& f = F.values[i_eval];
  const Matrix& fp = F.derivatives[i_eval];
  ABPair out;
  out.A = std::exp(-iu * k * x) * (iu * k * f + fp) / (2.0 * iu * k);
  out.B = std::exp(iu * k * x) * (iu * k * f - fp) / (2.0 * iu * k);

  // Reconstruction check one point further out; a blow-up here means the
  // evaluation point was effectively inside the support.
  double x2 = g.point(i_eval - 1);
  Matrix recon = std::exp(-iu * k * x2) * out.B + std::exp(iu * k * x2) * out.A;
  double scale = std::max(1.0, max_abs(F.values[i_eval - 1]));
  out.consistency = max_abs(recon - F.values[i_eval - 1]) / scale;
  if (out.consistency > 1e-6)
    throw std::runtime_error("extract_AB: free-form reconstruction failed below the support");
  return out;
}

struct ScatteringRow {
  cplx k;
  Matrix A;
  Matrix B;
  cplx detA;
  // residuals of the algebraic relations, populated for real k
  double res_D = 0;
  double res_D1 = 0;
  double res_E = 0;
  bool ok = true;
  std::string error;
};

struct ScatteringData {
  std::vector<ScatteringRow> rows;

  double max_res_D() const {
    double m = 0;
    for (const auto& r : rows)
      if (r.ok) m = std::max(m, r.res_D);
    return m;
  }
  double max_res_D1() const {
    double m = 0;
    for (const auto& r : rows)
      if (r.ok) m = std::max(m, r.res_D1);
    return m;
  }
  double max_res_E() const {
    double m = 0;
    for (const auto& r : rows)
      if (r.ok) m = std::max(m, r.res_E);
    return m;
  }
};

inline ABPair solve_AB(const MatrixPotential& V, cplx k, double tol = 1e-9) {
  JostSolution f = jost_solve(V, k, JostDirection::from_plus_infinity, tol);
  return extract_AB(f, V);
}

/// Scan over real k: per point solves at +k and -k and reports the residuals
/// of the unitarity-type relations
///   D : A(-k)A*(-k) - B(k)B*(k) = 1
///   D1: B(-k)A*(-k) - A(k)B*(k) = 0
///   E : |det A(k)|^2 = det(1 + B(-k)B*(-k)).
/// Failures are recorded per row; the scan never aborts as a whole.
inline ScatteringData scattering_scan(const MatrixPotential& V, const std::vector<double>& k_grid,
                                      double tol = 1e-9) {
  ScatteringData data;
  int n = V.dim();
  for (double k : k_grid) {
    ScatteringRow row;
    row.k = cplx(k, 0);
    try {
      ABPair plus = solve_AB(V, cplx(k, 0), tol);
      ABPair minus = solve_AB(V, cplx(-k, 0), tol);
      row.A = plus.A;
      row.B = plus.B;
      row.detA = plus.A.determinant();
      Matrix id = Matrix::Identity(n, n);
      row.res_D = max_abs(minus.A * minus.A.adjoint() - plus.B * plus.B.adjoint() - id);
      row.res_D1 = max_abs(minus.B * minus.A.adjoint() - plus.A * plus.B.adjoint());
      cplx det_plus = plus.A.determinant();
      double lhs = std::norm(det_plus);
      double rhs = (id + minus.B * minus.B.adjoint()).determinant().real();
      row.res_E = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

/// Log-log decay slope of ||B(k)||; the contract for smooth bump-envelope
/// potentials is slope <= -3 at desk scale. Piecewise-constant potentials
/// only satisfy B = O(k^-2) and are rejected.
inline double b_decay_check(const MatrixPotential& V, const std::vector<double>& k_list,
                            double tol = 1e-9) {
  if (V.smoothness() != Smoothness::smooth)
    throw std::invalid_argument(
        "b_decay_check: potential is piecewise constant; B(k) decays only like k^-2 there, "
        "the all-order decay law needs a smooth potential");
  if (k_list.size() < 2 || k_list.back() < 8.0 * k_list.front())
    throw std::invalid_argument("b_decay_check: k_list must span roughly a decade (factor >= 8)");
  std::vector<double> lx, ly;
  for (double k : k_list) {
    if (!(k > 0)) throw std::invalid_argument("b_decay_check: k values must be positive");
    ABPair ab = solve_AB(V, cplx(k, 0), tol);
    double norm_b = ab.B.norm();
    if (norm_b < 1e-300) return -std::numeric_limits<double>::infinity();
    lx.push_back(std::log(k));
    ly.push_back(std::log(norm_b));
  }
  return fit_slope(lx, ly);
}

enum class BoundStateSource { det_A_zeros, fd_eigensolver };

struct BoundStateSet {
  std::vector<double> kappas;        // strictly decreasing
  std::vector<int> multiplicities;   // dim ker A(i kappa)
  BoundStateSource source = BoundStateSource::det_A_zeros;
  std::vector<std::string> warnings;

  double riesz(double gamma) const {
    double s = 0;
    for (std::size_t i = 0; i < kappas.size(); ++i)
      s += multiplicities[i] * std::pow(kappas[i] * kappas[i], gamma);
    return s;
  }
};

inline cplx det_A_imag_axis(const MatrixPotential& V, double kappa, double tol = 1e-10) {
  ABPair ab = solve_AB(V, cplx(0, kappa), tol);
  return ab.A.determinant();
}

inline double default_kappa_max(const MatrixPotential& V) {
  return 1.0 + std::sqrt(V.sup_norm());
}

// Multiplicity = number of singular values of A(i kappa) below 1e-6 ||A||.
// A -> 1 at large kappa, so the norm scale is floored at 1 to keep the test
// meaningful when every direction of A is near-singular (n = 1 at a root).
inline int kernel_dimension(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  double top = std::max(svd.singularValues()(0), 1.0);
  int m = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < 1e-6 * top) ++m;
  return m;
}

/// Bound states located as zeros of det A(i kappa) on (1e-3, kappa_max].
/// Sign changes of Re det A are bisected; even-order zeros (no sign change)
/// are caught as deep local minima of |det A| and refined by golden section.
/// Multiplicities come from the kernel dimension of A(i kappa).
inline BoundStateSet bound_states_from_detA(const MatrixPotential& V, double kappa_max = 0,
                                            double tol = 1e-8) {
  if (kappa_max <= 0) kappa_max = default_kappa_max(V);
  if (!(tol > 0)) throw std::invalid_argument("bound_states_from_detA: tol must be > 0");
  BoundStateSet out;
  out.source = BoundStateSource::det_A_zeros;

  const int n_scan = 400;
  const double kappa_lo = jost_k_floor;
  std::vector<double> ks(n_scan), re(n_scan), mag(n_scan);
  for (int i = 0; i < n_scan; ++i) {
    double t = static_cast<double>(i) / (n_scan - 1);
    ks[i] = kappa_lo + t * (kappa_max - kappa_lo);
    cplx d = det_A_imag_axis(V, ks[i]);
    re[i] = d.real();
    mag[i] = std::abs(d);
  }

  std::vector<double> roots;

  // odd-order zeros: bisection on Re det A
  for (int i = 0; i + 1 < n_scan; ++i) {
    if (re[i] == 0.0) {
      roots.push_back(ks[i]);
      continue;
    }
    if (re[i] * re[i + 1] < 0) {
      double a = ks[i], b = ks[i + 1], fa = re[i];
      bool converged = false;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        double fm = det_A_imag_axis(V, mid).real();
        if (fm == 0.0 || 0.5 * (b - a) < tol) {
          converged = true;
          a = b = mid;
          break;
        }
        if (fa * fm < 0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      if (!converged)
        out.warnings.push_back("root refinement did not converge near kappa = " +
                               std::to_string(0.5 * (a + b)));
      roots.push_back(0.5 * (a + b));
    }
  }

  // even-order zeros: local minima of |det A| that dip well below their
  // shoulders, refined by golden-section search
  double mag_scale = *std::max_element(mag.begin(), mag.end());
  for (int i = 1; i + 1 < n_scan; ++i) {
    if (!(mag[i] < mag[i - 1] && mag[i] < mag[i + 1])) continue;
    if (mag[i] > 1e-2 * std::min(mag[i - 1], mag[i + 1]) && mag[i] > 1e-4 * mag_scale) continue;
    if (re[i - 1] * re[i + 1] < 0) continue;  // already handled by bisection
    double a = ks[i - 1], b = ks[i + 1];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = std::abs(det_A_imag_axis(V, x1)), f2 = std::abs(det_A_imag_axis(V, x2));
    while (b - a > std::max(tol, 1e-7)) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = std::abs(det_A_imag_axis(V, x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = std::abs(det_A_imag_axis(V, x2));
      }
    }
    // parabola-vertex polish on Re det A; |det| flattens at the noise floor
    // while the vertex stays well conditioned
    double x0 = 0.5 * (a + b);
    for (double step : {1e-4, 1e-5}) {
      double fm = det_A_imag_axis(V, x0 - step).real();
      double f0 = det_A_imag_axis(V, x0).real();
      double fp = det_A_imag_axis(V, x0 + step).real();
      double curv = fp - 2 * f0 + fm;
      if (std::abs(curv) < 1e-300) break;
      double shift = -0.5 * step * (fp - fm) / curv;
      if (std::abs(shift) > 10 * step) break;
      x0 += shift;
    }
    roots.push_back(x0);
  }

  std::sort(roots.begin(), roots.end());

  // cluster guard: roots closer than 10 tol are unresolved
  for (std::size_t i = 0; i + 1 < roots.size(); ++i)
    if (roots[i + 1] - roots[i] < 10 * tol)
      out.warnings.push_back("unresolved root cluster near kappa = " + std::to_string(roots[i]));

  for (double kappa : roots) {
    ABPair ab = solve_AB(V, cplx(0, kappa), 1e-10);
    int m = kernel_dimension(ab.A);
    if (m < 1) continue;  // scan artifact, not a kernel
    out.kappas.push_back(kappa);
    out.multiplicities.push_back(m);
  }

  // strictly decreasing kappas
  std::reverse(out.kappas.begin(), out.kappas.end());
  std::reverse(out.multiplicities.begin(), out.multiplicities.end());
  return out;
}

/// Resonance screen: potentials with |det A(i 1e-3)| < 0.1 sit too close to a
/// zero-energy resonance and are flagged rather than processed.
inline bool resonance_screen(const MatrixPotential& V, double* value = nullptr) {
  double d = std::abs(det_A_imag_axis(V, jost_k_floor));
  if (value) *value = d;
  return d >= 0.1;
}

}  // namespace ltspec

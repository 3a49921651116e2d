// Test-only reference computations, independent of the library's solve paths.
#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <vector>

#include "ltspec/util.hpp"

namespace oracles {

// Bound states of the finite square well (depth v0 > 0, width a) from the
// textbook transcendental equations, solved by bisection per branch:
//   even: q tan(q a/2) = kappa,  odd: -q cot(q a/2) = kappa,
// with q = sqrt(v0 - kappa^2). Returns kappas in decreasing order.
inline std::vector<double> square_well_kappas(double v0, double a) {
  double qmax = std::sqrt(v0);
  auto kappa_of = [&](double q) { return std::sqrt(std::max(v0 - q * q, 0.0)); };

  std::vector<double> roots;
  auto solve_branch = [&](std::function<double(double)> f, double qlo, double qhi) {
    double flo = f(qlo), fhi = f(qhi);
    if (flo * fhi > 0) return;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (qlo + qhi);
      double fm = f(mid);
      if (fm == 0) {
        qlo = qhi = mid;
        break;
      }
      (flo * fm < 0 ? qhi : qlo) = mid;
      (flo * fm < 0 ? fhi : flo) = fm;
    }
    roots.push_back(kappa_of(0.5 * (qlo + qhi)));
  };

  const double eps = 1e-12;
  // even branches: q a/2 in [m pi, m pi + pi/2)
  for (int m = 0;; ++m) {
    double qlo = (2 * m) * ltspec::pi / a + (m == 0 ? 1e-9 : eps);
    double qhi = std::min((2 * m + 1) * ltspec::pi / a - eps, qmax - eps);
    if (qlo >= qmax) break;
    if (qhi <= qlo) continue;
    solve_branch([&](double q) { return q * std::tan(0.5 * q * a) - kappa_of(q); }, qlo, qhi);
  }
  // odd branches: q a/2 in (m pi + pi/2, (m+1) pi)
  for (int m = 0;; ++m) {
    double qlo = (2 * m + 1) * ltspec::pi / a + eps;
    double qhi = std::min((2 * m + 2) * ltspec::pi / a - eps, qmax - eps);
    if (qlo >= qmax) break;
    if (qhi <= qlo) continue;
    solve_branch([&](double q) { return -q / std::tan(0.5 * q * a) - kappa_of(q); }, qlo, qhi);
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  return roots;
}

// Hermitian eigenvalues via the general (Schur-based) complex eigensolver;
// an algorithmically independent route from SelfAdjointEigenSolver.
inline std::vector<double> hermitian_eigenvalues_schur(const ltspec::Matrix& m) {
  Eigen::ComplexEigenSolver<ltspec::Matrix> es(m);
  std::vector<double> ev;
  for (int i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()[i].real());
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Reciprocal transmission amplitude of the scalar square well on [0,a] by
// exact two-panel matching: with q = sqrt(k^2 + v0),
//   a(k) = e^{ika} [cos(qa) - i (k^2 + q^2)/(2kq) sin(qa)].
inline ltspec::cplx square_well_A(double v0, double a, double k) {
  double q = std::sqrt(k * k + v0);
  ltspec::cplx i(0, 1);
  return std::exp(i * k * a) *
         (std::cos(q * a) - i * ((k * k + q * q) / (2 * k * q)) * std::sin(q * a));
}

}  // namespace oracles

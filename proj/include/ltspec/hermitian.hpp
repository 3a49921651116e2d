#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "ltspec/util.hpp"

namespace ltspec {

inline constexpr double hermiticity_tol = 1e-13;  // max entry-norm

inline double hermiticity_defect(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

// Inputs within tolerance are symmetrized as (M + M*)/2; anything worse is
// a user error, not round-off.
inline Matrix require_hermitian(const Matrix& m, const char* who = "require_hermitian") {
  double scale = std::max(1.0, max_abs(m));
  if (hermiticity_defect(m) > hermiticity_tol * scale)
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
  return 0.5 * (m + m.adjoint());
}

// Scalar negative part, 2 x_- := |x| - x.
inline double negative_part(double x) { return 0.5 * (std::abs(x) - x); }

/// Matrix negative part: same eigenvectors, eigenvalues max(0, -lambda_i).
inline Matrix negative_part(const Matrix& m) {
  Matrix h = require_hermitian(m, "negative_part");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd neg = (-es.eigenvalues()).cwiseMax(0.0);
  return es.eigenvectors() * neg.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

// tr (M_-)^p without forming the fractional matrix power.
inline double trace_negative_power(const Matrix& m, double p) {
  Matrix h = require_hermitian(m, "trace_negative_power");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  double sum = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double neg = negative_part(es.eigenvalues()[i]);
    if (neg > 0) sum += std::pow(neg, p);
  }
  return sum;
}

// Spectral norm of a Hermitian matrix.
inline double hermitian_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ltspec

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltspec {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx iu{0.0, 1.0};

// Largest entry modulus; the norm used for residual reporting.
inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Matrix identity(int n) { return Matrix::Identity(n, n); }

struct IntegratorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace ltspec

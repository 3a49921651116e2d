#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Eigenvalues>

#include "ltspec/hermitian.hpp"
#include "ltspec/potential.hpp"
#include "ltspec/util.hpp"

namespace ltspec {

inline constexpr int fd_dimension_guard = 20000;  // desk-scale guard
inline constexpr double cluster_rel_gap = 1e-6;

/// Negative spectrum of a finite-difference discretization, with a
/// Richardson-extrapolated companion list from the (h, h/2) pair.
struct SpectrumResult {
  std::vector<double> eigenvalues;           // distinct, strictly increasing, < 0
  std::vector<int> multiplicities;
  double pad = 0;
  double grid_spacing = 0;
  std::vector<double> richardson_estimate;   // aligned with eigenvalues

  std::vector<double> kappas() const {
    std::vector<double> ks;
    for (double l : eigenvalues) ks.push_back(std::sqrt(-l));
    return ks;
  }
};

struct SliceOperatorSpectrum {
  double x_d = 0;
  std::vector<double> negative_eigenvalues;
};

namespace detail {

// Hermitian banded eigenvalues (ascending), LAPACK 'L' storage.
inline std::vector<double> band_eigenvalues_real(int n, int kd, std::vector<double>& ab) {
  std::vector<double> w(n);
  double zdummy = 0;
  lapack_int info = LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'L', n, kd, ab.data(), kd + 1,
                                  w.data(), &zdummy, 1);
  if (info != 0) throw std::runtime_error("dsbev failed, info = " + std::to_string(info));
  return w;
}

inline std::vector<double> band_eigenvalues_complex(int n, int kd, std::vector<cplx>& ab) {
  std::vector<double> w(n);
  cplx zdummy = 0;
  lapack_int info = LAPACKE_zhbev(LAPACK_COL_MAJOR, 'N', 'L', n, kd, ab.data(), kd + 1,
                                  w.data(), &zdummy, 1);
  if (info != 0) throw std::runtime_error("zhbev failed, info = " + std::to_string(info));
  return w;
}

// Negative eigenvalues of the 1D block FD matrix. The box grid is aligned
// with the support endpoints (pad_steps uniform steps on each side) and jump
// points are sampled as the mean of the two one-sided limits; both keep the
// eigenvalue error a clean O(h^2) for piecewise-constant potentials.
inline std::vector<double> fd_negatives_1d(const MatrixPotential& V, int support_subdiv,
                                           int pad_steps) {
  int n = V.dim();
  int n_tot = support_subdiv + 2 * pad_steps + 1;
  int ni = n_tot - 2;  // Dirichlet interior
  int dim = n * ni;
  if (dim > fd_dimension_guard)
    throw std::invalid_argument("fd_eigensolve_1d: matrix dimension exceeds the desk-scale guard");
  double h = (V.x_max() - V.x_min()) / support_subdiv;
  double lo = V.x_min() - pad_steps * h;
  double inv_h2 = 1.0 / (h * h);
  int kd = 2 * n - 1;

  bool real_path = V.is_real();
  std::vector<double> ab_r;
  std::vector<cplx> ab_c;
  if (real_path)
    ab_r.assign(static_cast<std::size_t>(kd + 1) * dim, 0.0);
  else
    ab_c.assign(static_cast<std::size_t>(kd + 1) * dim, cplx(0, 0));

  auto put = [&](int i, int j, cplx v) {  // i >= j
    std::size_t idx = static_cast<std::size_t>(i - j) + static_cast<std::size_t>(j) * (kd + 1);
    if (real_path)
      ab_r[idx] = v.real();
    else
      ab_c[idx] = v;
  };

  double dx = 1e-7 * h;
  for (int j = 0; j < ni; ++j) {
    double x = lo + (j + 1) * h;
    Matrix vj = 0.5 * (V(x - dx) + V(x + dx));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b <= a; ++b) {
        cplx d = vj(a, b);
        if (a == b) d += 2.0 * inv_h2;
        put(j * n + a, j * n + b, d);
      }
      if (j + 1 < ni) put((j + 1) * n + a, j * n + a, cplx(-inv_h2, 0));
    }
  }

  std::vector<double> all =
      real_path ? band_eigenvalues_real(dim, kd, ab_r) : band_eigenvalues_complex(dim, kd, ab_c);
  std::vector<double> neg;
  for (double l : all)
    if (l < 0) neg.push_back(l);
  std::sort(neg.begin(), neg.end());
  return neg;
}

struct Clustered {
  std::vector<double> values;
  std::vector<int> mults;
  std::vector<double> companions;  // cluster means of a second aligned list
};

inline Clustered cluster_eigenvalues(const std::vector<double>& primary,
                                     const std::vector<double>& secondary) {
  Clustered out;
  std::size_t i = 0;
  while (i < primary.size()) {
    std::size_t j = i + 1;
    while (j < primary.size() &&
           std::abs(primary[j] - primary[j - 1]) <=
               cluster_rel_gap * std::max({std::abs(primary[j]), std::abs(primary[j - 1]), 1e-30}))
      ++j;
    double sum = 0, sum2 = 0;
    for (std::size_t q = i; q < j; ++q) {
      sum += primary[q];
      sum2 += secondary[q];
    }
    out.values.push_back(sum / (j - i));
    out.companions.push_back(sum2 / (j - i));
    out.mults.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Second-order central differences with Dirichlet ends, solved at (h, h/2)
/// and Richardson-extrapolated. `eigenvalues` holds the fine-grid values,
/// `richardson_estimate` the extrapolation; multiplicities are assigned by
/// clustering at 1e-6 relative gap.
inline SpectrumResult fd_eigensolve_1d(const MatrixPotential& V, double pad, int n_points) {
  if (!(pad > 0)) throw std::invalid_argument("fd_eigensolve_1d: pad must be > 0");
  if (n_points < 50) throw std::invalid_argument("fd_eigensolve_1d: n_points must be >= 50");

  // Box geometry fixed at the coarse resolution so that both runs solve on
  // the identical domain.
  double width = V.x_max() - V.x_min();
  double h_target = (width + 2 * pad) / (n_points - 1);
  int m = std::max(2, static_cast<int>(std::lround(width / h_target)));
  double h = width / m;
  int pad_steps = std::max(1, static_cast<int>(std::ceil(pad / h)));

  std::vector<double> coarse = detail::fd_negatives_1d(V, m, pad_steps);
  std::vector<double> fine = detail::fd_negatives_1d(V, 2 * m, 2 * pad_steps);

  std::vector<double> extrap(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i)
    extrap[i] = i < coarse.size() ? fine[i] + (fine[i] - coarse[i]) / 3.0 : fine[i];

  detail::Clustered cl = detail::cluster_eigenvalues(fine, extrap);

  SpectrumResult res;
  res.pad = pad_steps * h;
  res.grid_spacing = 0.5 * h;
  res.eigenvalues = cl.values;
  res.multiplicities = cl.mults;
  res.richardson_estimate = cl.companions;
  return res;
}

inline double riesz_mean_of(const std::vector<double>& eigenvalues,
                            const std::vector<int>& multiplicities, double gamma) {
  if (gamma < 0) throw std::invalid_argument("riesz_mean: gamma must be >= 0");
  double s = 0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    s += multiplicities[i] * std::pow(std::abs(eigenvalues[i]), gamma);
  return s;
}

/// Riesz mean of order gamma, sum of m_l |lambda_l|^gamma.
inline double riesz_mean(const SpectrumResult& s, double gamma) {
  return riesz_mean_of(s.eigenvalues, s.multiplicities, gamma);
}

inline double riesz_mean_richardson(const SpectrumResult& s, double gamma) {
  return riesz_mean_of(s.richardson_estimate, s.multiplicities, gamma);
}

/// Scalar 2D potential kept as an analytic evaluator over a rectangular box,
/// so that several resolutions can be sampled consistently.
struct ScalarField2D {
  double x1_lo = -1, x1_hi = 1;
  double x2_lo = -1, x2_hi = 1;
  std::function<double(double, double)> f;

  double operator()(double x1, double x2) const { return f(x1, x2); }
};

/// 5-point Laplacian with Dirichlet boundary on the box; single resolution
/// (n_points per axis), negative eigenvalues only.
inline SpectrumResult fd_eigensolve_2d(const ScalarField2D& v, int n_points) {
  if (n_points < 10) throw std::invalid_argument("fd_eigensolve_2d: n_points must be >= 10");
  int n1 = n_points - 2, n2 = n_points - 2;
  int dim = n1 * n2;
  if (dim > fd_dimension_guard)
    throw std::invalid_argument("fd_eigensolve_2d: unknown count exceeds the desk-scale guard");
  double h1 = (v.x1_hi - v.x1_lo) / (n_points - 1);
  double h2 = (v.x2_hi - v.x2_lo) / (n_points - 1);
  double ih1 = 1.0 / (h1 * h1), ih2 = 1.0 / (h2 * h2);
  int kd = n1;
  std::vector<double> ab(static_cast<std::size_t>(kd + 1) * dim, 0.0);
  auto put = [&](int i, int j, double val) {
    ab[static_cast<std::size_t>(i - j) + static_cast<std::size_t>(j) * (kd + 1)] = val;
  };
  for (int j2 = 0; j2 < n2; ++j2) {
    double x2 = v.x2_lo + (j2 + 1) * h2;
    for (int j1 = 0; j1 < n1; ++j1) {
      double x1 = v.x1_lo + (j1 + 1) * h1;
      double vv = v(x1, x2);
      if (vv > 1e-12)
        throw std::invalid_argument("fd_eigensolve_2d: potential must be non-positive");
      int idx = j2 * n1 + j1;
      put(idx, idx, 2.0 * ih1 + 2.0 * ih2 + vv);
      if (j1 + 1 < n1) put(idx + 1, idx, -ih1);
      if (j2 + 1 < n2) put(idx + n1, idx, -ih2);
    }
  }
  std::vector<double> all = detail::band_eigenvalues_real(dim, kd, ab);
  std::vector<double> neg;
  for (double l : all)
    if (l < 0) neg.push_back(l);
  std::sort(neg.begin(), neg.end());

  detail::Clustered cl = detail::cluster_eigenvalues(neg, neg);
  SpectrumResult res;
  res.grid_spacing = std::max(h1, h2);
  res.eigenvalues = cl.values;
  res.multiplicities = cl.mults;
  res.richardson_estimate = cl.companions;
  return res;
}

/// Dense matrix of the 1D slice operator -d^2/dx1^2 + v(., x2) with Dirichlet
/// ends on the box's x1 extent.
inline RealMatrix slice_operator_matrix(const ScalarField2D& v, double x2, int n_points) {
  int ni = n_points - 2;
  double h = (v.x1_hi - v.x1_lo) / (n_points - 1);
  double ih = 1.0 / (h * h);
  RealMatrix m = RealMatrix::Zero(ni, ni);
  for (int j = 0; j < ni; ++j) {
    m(j, j) = 2.0 * ih + v(v.x1_lo + (j + 1) * h, x2);
    if (j + 1 < ni) {
      m(j, j + 1) = -ih;
      m(j + 1, j) = -ih;
    }
  }
  return m;
}

/// Negative spectrum of the frozen-coordinate operator W(x_2).
inline SliceOperatorSpectrum slice_spectrum(const ScalarField2D& v, double x2, int n_points) {
  if (x2 < v.x2_lo || x2 > v.x2_hi)
    throw std::invalid_argument("slice_spectrum: x2 outside the 2D grid");
  RealMatrix m = slice_operator_matrix(v, x2, n_points);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  SliceOperatorSpectrum s;
  s.x_d = x2;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] < 0) s.negative_eigenvalues.push_back(es.eigenvalues()[i]);
  std::sort(s.negative_eigenvalues.begin(), s.negative_eigenvalues.end());
  return s;
}

}  // namespace ltspec

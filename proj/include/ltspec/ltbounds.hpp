#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltspec/quadrature.hpp"
#include "ltspec/special.hpp"
#include "ltspec/spectrum.hpp"
#include "ltspec/util.hpp"

namespace ltspec {

/// L^cl_{gamma,d} = Gamma(gamma+1) / (2^d pi^{d/2} Gamma(gamma+d/2+1)).
inline double classical_constant(double gamma, int d) {
  if (gamma < 0) throw std::invalid_argument("classical_constant: gamma must be >= 0");
  if (d < 1) throw std::invalid_argument("classical_constant: d must be >= 1");
  return gamma_fn(gamma + 1.0) /
         (std::pow(2.0, d) * std::pow(pi, 0.5 * d) * gamma_fn(gamma + 0.5 * d + 1.0));
}

/// The same constant from the phase-space integral with the quadratic symbol,
/// (2 pi)^{-d} int (|xi|^2 - 1)_-^gamma d xi, reduced to a radial quadrature.
inline double classical_constant_phase_space(double gamma, int d, int gl_points = 96) {
  if (gamma < 0 || d < 1) throw std::invalid_argument("classical_constant_phase_space: bad args");
  double sphere = 2.0 * std::pow(pi, 0.5 * d) / gamma_fn(0.5 * d);
  GaussLegendreRule rule = gauss_legendre(gl_points);
  // r = sin(theta): int_0^1 (1-r^2)^gamma r^{d-1} dr
  double radial = gl_integrate(
      [&](double th) {
        double c = std::cos(th), s = std::sin(th);
        return std::pow(c * c, gamma) * std::pow(s, d - 1) * c;
      },
      0.0, 0.5 * pi, rule);
  return std::pow(2.0 * pi, -d) * sphere * radial;
}

/// Riesz mean against the semiclassical bound L^cl int tr V_-^{gamma+d/2}.
struct LtReport {
  double gamma = 0;
  int dimension = 1;
  double riesz_mean = 0;
  double potential_integral = 0;  // int tr V_-^{gamma+d/2}
  double lcl = 0;
  double classical_bound = 0;     // lcl * potential_integral
  double ratio = 0;
  double slack = 0;               // Richardson gap of the Riesz mean
  bool sharp_claim = true;        // false when gamma < 3/2
  bool replaced_positive_part = false;
};

namespace detail {

struct FdDefaults {
  double pad = 4;
  int n_points = 300;
};

// Padding from a coarse pre-solve: pad = 8/kappa_min keeps the Dirichlet
// truncation error near e^{-16}; resolution from the top of the spectrum.
inline FdDefaults fd_defaults_1d(const MatrixPotential& V) {
  FdDefaults d;
  double sup = V.sup_norm();
  if (sup <= 0) return d;
  double width = V.x_max() - V.x_min();
  SpectrumResult pre = fd_eigensolve_1d(V, 4.0, std::max(60, static_cast<int>(
                                                              (width + 8.0) / 0.05)));
  double kappa_min = 1.0, kappa_max = std::sqrt(sup);
  if (!pre.eigenvalues.empty()) {
    kappa_min = std::sqrt(-pre.eigenvalues.back());
    kappa_max = std::max(kappa_max, std::sqrt(-pre.eigenvalues.front()));
  }
  d.pad = std::clamp(8.0 / std::max(kappa_min, 0.2), 4.0, 44.0);
  double h = std::min(0.02, 0.15 / std::max(kappa_max, 1.0));
  double box = width + 2 * d.pad;
  d.n_points = static_cast<int>(box / h) + 2;
  // respect the desk-scale guard at the fine (h/2) resolution
  while (V.dim() * (2 * d.n_points - 1) > fd_dimension_guard && d.n_points > 60)
    d.n_points = d.n_points * 3 / 4;
  d.n_points = std::max(d.n_points, 60);
  return d;
}

inline MatrixPotential negative_part_potential(const MatrixPotential& V) {
  int n = V.dim();
  auto eval = [V, n](double x) -> Matrix { return -negative_part(V(x)); };
  return MatrixPotential(V.grid(), V.x_min(), V.x_max(), n, V.smoothness(), eval);
}

inline bool has_positive_part(const MatrixPotential& V) {
  for (int i = V.support_lo_index(); i <= V.support_hi_index(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(V.sample(i), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1e-10) return true;
  }
  return false;
}

}  // namespace detail

/// d = 1 matrix case. A potential with a positive part is replaced by -V_-
/// (reported in the result, never silently); the bound being checked is then
/// exactly the negative-part form of the inequality.
inline LtReport lt_ratio(const MatrixPotential& V_in, double gamma,
                         const SpectrumResult* precomputed = nullptr) {
  if (gamma < 0) throw std::invalid_argument("lt_ratio: gamma must be >= 0");
  LtReport rep;
  rep.gamma = gamma;
  rep.dimension = 1;
  rep.lcl = classical_constant(gamma, 1);
  rep.sharp_claim = gamma >= 1.5 - 1e-12;

  bool replace = detail::has_positive_part(V_in);
  MatrixPotential V = replace ? detail::negative_part_potential(V_in) : V_in;
  rep.replaced_positive_part = replace;

  rep.potential_integral = V.integral_trace_negative_power(gamma + 0.5);
  rep.classical_bound = rep.lcl * rep.potential_integral;

  SpectrumResult local;
  const SpectrumResult* spec = precomputed;
  if (!spec) {
    detail::FdDefaults d = detail::fd_defaults_1d(V);
    local = fd_eigensolve_1d(V, d.pad, d.n_points);
    spec = &local;
  }
  rep.riesz_mean = riesz_mean_richardson(*spec, gamma);
  rep.slack = std::abs(rep.riesz_mean - riesz_mean(*spec, gamma));
  rep.ratio = rep.classical_bound > 1e-300 ? rep.riesz_mean / rep.classical_bound : 0.0;
  return rep;
}

/// fd_eigensolve_2d at (h, h/2) with Richardson companions, same box.
inline SpectrumResult fd_eigensolve_2d_pair(const ScalarField2D& v, int n_points) {
  SpectrumResult coarse = fd_eigensolve_2d(v, n_points);
  SpectrumResult fine = fd_eigensolve_2d(v, 2 * n_points - 1);
  // flatten clusters to raw sorted lists for pairing
  std::vector<double> c_raw, f_raw;
  for (std::size_t i = 0; i < coarse.eigenvalues.size(); ++i)
    for (int q = 0; q < coarse.multiplicities[i]; ++q) c_raw.push_back(coarse.eigenvalues[i]);
  for (std::size_t i = 0; i < fine.eigenvalues.size(); ++i)
    for (int q = 0; q < fine.multiplicities[i]; ++q) f_raw.push_back(fine.eigenvalues[i]);
  std::vector<double> extrap(f_raw.size());
  for (std::size_t i = 0; i < f_raw.size(); ++i)
    extrap[i] = i < c_raw.size() ? f_raw[i] + (f_raw[i] - c_raw[i]) / 3.0 : f_raw[i];
  detail::Clustered cl = detail::cluster_eigenvalues(f_raw, extrap);
  SpectrumResult res;
  res.grid_spacing = fine.grid_spacing;
  res.eigenvalues = cl.values;
  res.multiplicities = cl.mults;
  res.richardson_estimate = cl.companions;
  return res;
}

inline double field2d_negative_power_integral(const ScalarField2D& v, double p,
                                              int samples = 481) {
  std::vector<double> wx = simpson_weights(samples, (v.x1_hi - v.x1_lo) / (samples - 1));
  std::vector<double> wy = simpson_weights(samples, (v.x2_hi - v.x2_lo) / (samples - 1));
  double total = 0;
  for (int i = 0; i < samples; ++i) {
    double x1 = v.x1_lo + (v.x1_hi - v.x1_lo) * i / (samples - 1);
    double row = 0;
    for (int j = 0; j < samples; ++j) {
      double x2 = v.x2_lo + (v.x2_hi - v.x2_lo) * j / (samples - 1);
      double neg = negative_part(v(x1, x2));
      if (neg > 0) row += wy[j] * std::pow(neg, p);
    }
    total += wx[i] * row;
  }
  return total;
}

/// d = 2 scalar case of the ratio check.
inline LtReport lt_ratio_2d(const ScalarField2D& v, double gamma, int n_points = 36,
                            const SpectrumResult* precomputed = nullptr) {
  if (gamma < 0) throw std::invalid_argument("lt_ratio_2d: gamma must be >= 0");
  LtReport rep;
  rep.gamma = gamma;
  rep.dimension = 2;
  rep.lcl = classical_constant(gamma, 2);
  rep.sharp_claim = gamma >= 1.5 - 1e-12;
  rep.potential_integral = field2d_negative_power_integral(v, gamma + 1.0);
  rep.classical_bound = rep.lcl * rep.potential_integral;
  SpectrumResult local;
  const SpectrumResult* spec = precomputed;
  if (!spec) {
    local = fd_eigensolve_2d_pair(v, n_points);
    spec = &local;
  }
  rep.riesz_mean = riesz_mean_richardson(*spec, gamma);
  rep.slack = std::abs(rep.riesz_mean - riesz_mean(*spec, gamma));
  rep.ratio = rep.classical_bound > 1e-300 ? rep.riesz_mean / rep.classical_bound : 0.0;
  return rep;
}

/// Ratios for alpha V over an increasing coupling list. The grid must resolve
/// the shortest wavelength ~ 1/sqrt(alpha sup||V||) with >= 10 points.
inline std::vector<LtReport> weyl_scan(const MatrixPotential& V, double gamma,
                                       const std::vector<double>& alphas) {
  for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
    if (!(alphas[i] < alphas[i + 1]))
      throw std::invalid_argument("weyl_scan: alphas must be increasing");
  if (!alphas.empty() && alphas.front() < 1.0)
    throw std::invalid_argument("weyl_scan: alphas must be >= 1");

  std::vector<LtReport> out;
  double sup = V.sup_norm();
  for (double alpha : alphas) {
    MatrixPotential va = V.scaled(alpha);
    if (sup <= 0) {
      LtReport rep;
      rep.gamma = gamma;
      out.push_back(rep);
      continue;
    }
    double wavelength = 1.0 / std::sqrt(alpha * sup);
    double h_needed = wavelength / 10.0;
    double pad = std::clamp(6.0 / std::pow(alpha * sup, 0.25), 1.5, 8.0);
    double box = V.x_max() - V.x_min() + 2 * pad;
    int n_points = static_cast<int>(box / std::min(h_needed, 0.01)) + 2;
    if (V.dim() * (2 * n_points - 1) > fd_dimension_guard)
      throw std::invalid_argument(
          "weyl_scan: resolving 1/sqrt(alpha sup||V||) with 10 points exceeds the desk-scale "
          "guard");
    SpectrumResult s = fd_eigensolve_1d(va, pad, n_points);
    out.push_back(lt_ratio(va, gamma, &s));
  }
  return out;
}

/// Residual of L^cl_{gamma,1} = (3/16) B(gamma-3/2, 3)/B(gamma-3/2, 5/2)
/// with the standard Beta function.
inline double aizenman_lieb_identity(double gamma) {
  if (!(gamma > 1.5))
    throw std::invalid_argument(
        "aizenman_lieb_identity: gamma must be > 3/2 (Beta argument hits the pole)");
  double lhs = classical_constant(gamma, 1);
  double rhs = (3.0 / 16.0) * beta_fn(gamma - 1.5, 3.0) / beta_fn(gamma - 1.5, 2.5);
  return std::abs(lhs - rhs) / lhs;
}

/// Numerical rendering of the gamma-lift chain on a computed spectrum:
///   B(g-3/2,5/2) sum m |l|^g  =  int t^{g-5/2} sum m ((l+t)_-)^{3/2} dt
///                            <=  (3/16) int t^{g-5/2} int tr (V+t)_-^2 dx dt
///                             =  (3/16) B(g-3/2,3) int tr V_-^{g+1/2} dx.
struct GammaLiftCheck {
  double lhs_direct = 0;
  double lhs_quadrature = 0;
  double rhs_quadrature = 0;
  double rhs_direct = 0;
};

inline GammaLiftCheck gamma_lift_check(const MatrixPotential& V, const SpectrumResult& s,
                                       double gamma) {
  if (!(gamma > 1.5)) throw std::invalid_argument("gamma_lift_check: gamma must be > 3/2");
  GammaLiftCheck out;
  out.lhs_direct = beta_fn(gamma - 1.5, 2.5) * riesz_mean_richardson(s, gamma);
  out.rhs_direct =
      (3.0 / 16.0) * beta_fn(gamma - 1.5, 3.0) * V.integral_trace_negative_power(gamma + 0.5);

  // sample eigenvalues of V(x) once
  std::vector<std::vector<double>> vev;
  for (int i = V.support_lo_index(); i <= V.support_hi_index(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(V.sample(i), Eigen::EigenvaluesOnly);
    std::vector<double> e(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
    vev.push_back(std::move(e));
  }
  double h = V.grid().spacing();
  std::vector<double> wx = simpson_weights(vev.size(), h);

  // t-integrals regularized by t = s^q, q = 1/(gamma - 3/2)
  double q = 1.0 / (gamma - 1.5);
  GaussLegendreRule rule = gauss_legendre(48);
  double t_top_spec = s.eigenvalues.empty() ? 0 : -s.eigenvalues.front();
  double t_top_pot = V.sup_norm();

  auto integrate_t = [&](double t_top, auto&& g_of_t) {
    if (t_top <= 0) return 0.0;
    double s_max = std::pow(t_top, 1.0 / q);
    double total = 0;
    int panels = 8;
    for (int p = 0; p < panels; ++p) {
      double a = s_max * p / panels, b = s_max * (p + 1) / panels;
      total += gl_integrate([&](double sv) { return q * g_of_t(std::pow(sv, q)); }, a, b, rule);
    }
    return total;
  };

  out.lhs_quadrature = integrate_t(t_top_spec, [&](double t) {
    double sum = 0;
    for (std::size_t i = 0; i < s.richardson_estimate.size(); ++i) {
      double shifted = negative_part(s.richardson_estimate[i] + t);
      if (shifted > 0) sum += s.multiplicities[i] * std::pow(shifted, 1.5);
    }
    return sum;
  });
  out.rhs_quadrature = (3.0 / 16.0) * integrate_t(t_top_pot, [&](double t) {
    double xint = 0;
    for (std::size_t j = 0; j < vev.size(); ++j) {
      double tr = 0;
      for (double lam : vev[j]) {
        double neg = negative_part(lam + t);
        tr += neg * neg;
      }
      xint += wx[j] * tr;
    }
    return xint;
  });
  return out;
}

/// The four ordered quantities of the dimension-lifting argument at d = 2,
/// evaluated at one resolution:
///   (1) tr (-Laplace + v)_-^gamma                  [2D box FD]
///   (2) tr (-d^2/dx2^2 - W_-(x2))_-^gamma          [block operator from slices]
///   (3) L^cl_{gamma,1} int tr W_-^{gamma+1/2} dx2
///   (4) L^cl_{gamma,2} int int v_-^{gamma+1}.
struct LiftingChain {
  double q_box = 0;
  double q_operator = 0;
  double q_slice_bound = 0;
  double q_classical = 0;
};

inline LiftingChain lifting_chain_once(const ScalarField2D& v, double gamma, int n_points) {
  LiftingChain c;
  SpectrumResult s2 = fd_eigensolve_2d(v, n_points);
  c.q_box = riesz_mean(s2, gamma);

  int ni = n_points - 2;
  if (ni * ni > fd_dimension_guard)
    throw std::invalid_argument("lifting_chain: unknown count exceeds the desk-scale guard");
  double h2 = (v.x2_hi - v.x2_lo) / (n_points - 1);
  double ih2 = 1.0 / (h2 * h2);

  // negative parts of the slice operators, and their trace powers
  std::vector<RealMatrix> wneg(ni);
  std::vector<double> slice_trace(n_points, 0.0);
  for (int j = 0; j < ni; ++j) {
    double x2 = v.x2_lo + (j + 1) * h2;
    RealMatrix sj = slice_operator_matrix(v, x2, n_points);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sj);
    Eigen::VectorXd neg = (-es.eigenvalues()).cwiseMax(0.0);
    wneg[j] = es.eigenvectors() * neg.asDiagonal() * es.eigenvectors().transpose();
    double tp = 0;
    for (int i = 0; i < neg.size(); ++i)
      if (neg[i] > 0) tp += std::pow(neg[i], gamma + 0.5);
    slice_trace[j + 1] = tp;
  }

  // block operator -d^2/dx2^2 - W_-(x2), banded with kd = ni
  int dim = ni * ni, kd = ni;
  std::vector<double> ab(static_cast<std::size_t>(kd + 1) * dim, 0.0);
  auto put = [&](int i, int j, double val) {
    ab[static_cast<std::size_t>(i - j) + static_cast<std::size_t>(j) * (kd + 1)] = val;
  };
  for (int j2 = 0; j2 < ni; ++j2) {
    for (int a = 0; a < ni; ++a) {
      for (int b = 0; b <= a; ++b) {
        double d = -wneg[j2](a, b);
        if (a == b) d += 2.0 * ih2;
        put(j2 * ni + a, j2 * ni + b, d);
      }
      if (j2 + 1 < ni) put((j2 + 1) * ni + a, j2 * ni + a, -ih2);
    }
  }
  std::vector<double> all = detail::band_eigenvalues_real(dim, kd, ab);
  for (double l : all)
    if (l < 0) c.q_operator += std::pow(-l, gamma);

  std::vector<double> wx2 = simpson_weights(n_points, h2);
  double sint = 0;
  for (int j = 0; j < n_points; ++j) sint += wx2[j] * slice_trace[j];
  c.q_slice_bound = classical_constant(gamma, 1) * sint;

  c.q_classical = classical_constant(gamma, 2) * field2d_negative_power_integral(v, gamma + 1.0);
  return c;
}

struct LiftingChainReport {
  LiftingChain base;
  LiftingChain refined;
  double slack12 = 0, slack23 = 0, slack34 = 0;
  bool ordered = false;
  std::string failing_link;
};

/// Runs the chain at two resolutions; each link must hold within
/// 1e-6 + the measured resolution gap of its two quantities.
inline LiftingChainReport lifting_chain_check(const ScalarField2D& v, double gamma,
                                              int n_points = 40) {
  if (gamma < 1.5 - 1e-12)
    throw std::invalid_argument("lifting_chain_check: gamma must be >= 3/2");
  LiftingChainReport rep;
  rep.base = lifting_chain_once(v, gamma, n_points);
  rep.refined = lifting_chain_once(v, gamma, (3 * n_points) / 2);
  auto gap = [&](double a, double b) { return std::abs(a - b); };
  rep.slack12 = 1e-6 + gap(rep.base.q_box, rep.refined.q_box) +
                gap(rep.base.q_operator, rep.refined.q_operator);
  rep.slack23 = 1e-6 + gap(rep.base.q_operator, rep.refined.q_operator) +
                gap(rep.base.q_slice_bound, rep.refined.q_slice_bound);
  rep.slack34 = 1e-6 + gap(rep.base.q_slice_bound, rep.refined.q_slice_bound) +
                gap(rep.base.q_classical, rep.refined.q_classical);
  rep.ordered = true;
  const LiftingChain& r = rep.refined;
  if (r.q_box > r.q_operator + rep.slack12) {
    rep.ordered = false;
    rep.failing_link = "box <= operator";
  } else if (r.q_operator > r.q_slice_bound + rep.slack23) {
    rep.ordered = false;
    rep.failing_link = "operator <= slice_bound";
  } else if (r.q_slice_bound > r.q_classical + rep.slack34) {
    rep.ordered = false;
    rep.failing_link = "slice_bound <= classical";
  }
  return rep;
}

/// Scalar fields sampled on a shared uniform 3D grid (x fastest).
struct ScalarField3D {
  Grid gx, gy, gz;
  std::vector<double> values;

  double at(int ix, int iy, int iz) const {
    return values[(static_cast<std::size_t>(iz) * gy.n_points + iy) * gx.n_points + ix];
  }
};

/// Right-hand side of the Pauli-operator bound:
///   L^cl_{gamma,3} int { (V+B)_-^{gamma+3/2} + (V-B)_-^{gamma+3/2} } dx.
inline double pauli_rhs(const ScalarField3D& v, const ScalarField3D& b, double gamma) {
  if (gamma < 1.5 - 1e-12) throw std::invalid_argument("pauli_rhs: gamma must be >= 3/2");
  if (v.gx.n_points != b.gx.n_points || v.gy.n_points != b.gy.n_points ||
      v.gz.n_points != b.gz.n_points || v.values.size() != b.values.size())
    throw std::invalid_argument("pauli_rhs: fields must share one grid");
  for (double bb : b.values)
    if (bb < 0) throw std::invalid_argument("pauli_rhs: B is a field strength length, B >= 0");

  std::vector<double> wx = simpson_weights(v.gx.n_points, v.gx.spacing());
  std::vector<double> wy = simpson_weights(v.gy.n_points, v.gy.spacing());
  std::vector<double> wz = simpson_weights(v.gz.n_points, v.gz.spacing());
  double p = gamma + 1.5;
  double total = 0;
  for (int iz = 0; iz < v.gz.n_points; ++iz)
    for (int iy = 0; iy < v.gy.n_points; ++iy)
      for (int ix = 0; ix < v.gx.n_points; ++ix) {
        double vv = v.at(ix, iy, iz), bb = b.at(ix, iy, iz);
        double up = negative_part(vv + bb), dn = negative_part(vv - bb);
        double f = (up > 0 ? std::pow(up, p) : 0.0) + (dn > 0 ? std::pow(dn, p) : 0.0);
        total += wx[ix] * wy[iy] * wz[iz] * f;
      }
  return classical_constant(gamma, 3) * total;
}

}  // namespace ltspec

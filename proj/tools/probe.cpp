// Scratch numerical probe (not installed); exercises the solver stack.
#include <cstdio>

#include "ltspec/jost.hpp"
#include "ltspec/potential.hpp"
#include "ltspec/scattering.hpp"
#include "ltspec/spectrum.hpp"

using namespace ltspec;


// appended probes
#include <cmath>
static void probe2() {
  using namespace ltspec;
  // triple-multiplicity tensor well
  PotentialSpec inner;
  inner.kind = PotentialKind::square_well;
  inner.depth = 4.0;
  inner.width = 1.0;
  PotentialSpec outer;
  outer.kind = PotentialKind::scalar_times_identity;
  outer.n = 3;
  outer.scalar = std::make_shared<PotentialSpec>(inner);
  MatrixPotential v3 = build_potential(outer);
  BoundStateSet bs3 = bound_states_from_detA(v3);
  std::printf("id3 well roots:");
  for (std::size_t i = 0; i < bs3.kappas.size(); ++i)
    std::printf(" kappa=%.8f (m=%d)", bs3.kappas[i], bs3.multiplicities[i]);
  std::printf("\n");

  // n=2 tensor: even-order zeros (no sign change)
  PotentialSpec outer2 = outer;
  outer2.n = 2;
  MatrixPotential v2 = build_potential(outer2);
  BoundStateSet bs2 = bound_states_from_detA(v2);
  std::printf("id2 well roots:");
  for (std::size_t i = 0; i < bs2.kappas.size(); ++i)
    std::printf(" kappa=%.8f (m=%d)", bs2.kappas[i], bs2.multiplicities[i]);
  std::printf("\n");

  // rand2 bound states + fd cross-check
  PotentialSpec rnd;
  rnd.kind = PotentialKind::random_hermitian;
  rnd.n = 2;
  rnd.seed = 7;
  rnd.scale = 1.5;
  MatrixPotential vr = build_potential(rnd);
  BoundStateSet bsr = bound_states_from_detA(vr);
  std::printf("rand2 roots:");
  for (std::size_t i = 0; i < bsr.kappas.size(); ++i)
    std::printf(" kappa=%.8f (m=%d)", bsr.kappas[i], bsr.multiplicities[i]);
  std::printf("\n");
  SpectrumResult srr = fd_eigensolve_1d(vr, 12.0, 900);
  std::printf("rand2 fd kappas:");
  for (std::size_t i = 0; i < srr.eigenvalues.size(); ++i)
    std::printf(" %.8f (m=%d)", std::sqrt(-srr.richardson_estimate[i]), srr.multiplicities[i]);
  std::printf("\n");

  // b-decay slope for the smooth bump
  PotentialSpec bump_spec;
  bump_spec.kind = PotentialKind::truncated_gaussian;
  bump_spec.amplitude = 4.0;
  bump_spec.sigma = 10.0;
  bump_spec.cutoff = 1.0;
  MatrixPotential vb = build_potential(bump_spec);
  std::vector<double> ks;
  for (double k = 8; k <= 64.01; k *= 1.4142135623730951) ks.push_back(k);
  double slope = b_decay_check(vb, ks);
  std::printf("b_decay slope (bump): %.3f\n", slope);

  // H(x,k) bound at k=8i vs 32i
  for (double kap : {8.0, 32.0}) {
    JostSolution f = jost_solve(vb, cplx(0, kap), JostDirection::from_plus_infinity);
    double sup = 0;
    for (int i = vb.support_lo_index(); i <= vb.support_hi_index(); ++i) {
      Matrix h = std::exp(-iu * f.k * f.grid.point(i)) * f.values[i] - Matrix::Identity(1, 1);
      sup = std::max(sup, max_abs(h));
    }
    std::printf("sup|H| at k=%gi: %.6e  (x (1+|k|)) = %.4f\n", kap, sup, sup * (1 + kap));
  }
}

int main() {
  // 1. Smooth scalar bump well, amplitude 4 on [-1,1].
  PotentialSpec bump_spec;
  bump_spec.kind = PotentialKind::truncated_gaussian;
  bump_spec.amplitude = 4.0;
  bump_spec.sigma = 10.0;  // nearly pure bump envelope
  bump_spec.cutoff = 1.0;
  bump_spec.target_spacing = 1e-3;
  MatrixPotential vb = build_potential(bump_spec);
  std::printf("bump: n=%d support [%g,%g] grid n=%d h=%g sup|V|=%g\n", vb.dim(), vb.x_min(),
              vb.x_max(), vb.grid().n_points, vb.grid().spacing(), vb.sup_norm());

  // residuals at k = 32 and k = 0.25, h = 1e-3
  for (double k : {0.25, 1.0, 8.0, 32.0}) {
    ScatteringData sd = scattering_scan(vb, {k});
    std::printf("k=%6.2f  res_D=%.3e res_D1=%.3e res_E=%.3e |detA|=%.12f ok=%d\n", k,
                sd.rows[0].res_D, sd.rows[0].res_D1, sd.rows[0].res_E, std::abs(sd.rows[0].detA),
                int(sd.rows[0].ok));
  }

  // 2. Square well transparency: V0 = 3 pi^2, a = 1, k = pi -> B = 0.
  PotentialSpec well_spec;
  well_spec.kind = PotentialKind::square_well;
  well_spec.depth = 3 * pi * pi;
  well_spec.width = 1.0;
  well_spec.target_spacing = 1e-3;
  MatrixPotential vw = build_potential(well_spec);
  ABPair ab = solve_AB(vw, cplx(pi, 0));
  std::printf("transparency: ||B|| = %.3e, |detA| = %.12f\n", ab.B.norm(),
              std::abs(ab.A.determinant()));

  // panels oracle vs RK4
  JostSolution frk = jost_solve(vw, cplx(pi, 0), JostDirection::from_plus_infinity);
  JostSolution fpan = jost_solve_panels(vw, cplx(pi, 0), JostDirection::from_plus_infinity);
  double worst = 0;
  for (int i = 0; i < frk.grid.n_points; ++i)
    worst = std::max(worst, max_abs(frk.values[i] - fpan.values[i]));
  std::printf("rk4 vs panels max diff: %.3e\n", worst);

  // 3. det A(i kappa) realness for a complex Hermitian 2x2 potential.
  PotentialSpec rnd;
  rnd.kind = PotentialKind::random_hermitian;
  rnd.n = 2;
  rnd.seed = 7;
  rnd.scale = 1.5;
  rnd.target_spacing = 1e-3;
  MatrixPotential vr = build_potential(rnd);
  std::printf("rand2 sup|V|=%g real=%d\n", vr.sup_norm(), int(vr.is_real()));
  for (double kap : {0.1, 0.5, 1.0, 1.5}) {
    cplx d = det_A_imag_axis(vr, kap);
    std::printf("  detA(i %4.2f) = %.10f %+.3e i\n", kap, d.real(), d.imag());
  }

  // 4. FD eigensolver vs detA zeros, shallow well 0.5 on [0,1].
  PotentialSpec shallow;
  shallow.kind = PotentialKind::square_well;
  shallow.depth = 0.5;
  shallow.width = 1.0;
  MatrixPotential vs = build_potential(shallow);
  BoundStateSet bs = bound_states_from_detA(vs);
  std::printf("shallow well detA roots:");
  for (std::size_t i = 0; i < bs.kappas.size(); ++i)
    std::printf(" kappa=%.8f (m=%d)", bs.kappas[i], bs.multiplicities[i]);
  std::printf("\n");
  SpectrumResult sr = fd_eigensolve_1d(vs, 25.0, 600);
  std::printf("fd negatives:");
  for (std::size_t i = 0; i < sr.eigenvalues.size(); ++i)
    std::printf(" %.8f (m=%d, rich %.8f -> kappa %.8f)", sr.eigenvalues[i], sr.multiplicities[i],
                sr.richardson_estimate[i], std::sqrt(-sr.richardson_estimate[i]));
  std::printf("\n");
  probe2();
  return 0;
}

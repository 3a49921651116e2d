#include <catch2/catch_amalgamated.hpp>

#include "ltspec/corpus.hpp"
#include "ltspec/scattering.hpp"
#include "ltspec/spectrum.hpp"
#include "oracles.hpp"

using namespace ltspec;

namespace {

PotentialSpec zero_spec() {
  PotentialSpec s;
  s.kind = PotentialKind::zero;
  s.support_lo = -1.0;
  s.support_hi = 1.0;
  s.target_spacing = 1e-3;
  return s;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> ks(n);
  for (int i = 0; i < n; ++i) ks[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return ks;
}

}  // namespace

TEST_CASE("free potential gives A = 1, B = 0") {
  MatrixPotential v0 = build_potential(zero_spec());
  ABPair ab = solve_AB(v0, cplx(1.7, 0));
  CHECK(max_abs(ab.A - Matrix::Identity(1, 1)) < 1e-11);
  CHECK(ab.B.norm() < 1e-11);
}

TEST_CASE("square well transparency at k = pi") {
  MatrixPotential v = build_potential(spec_square_well(3 * pi * pi, 1.0));
  ABPair ab = solve_AB(v, cplx(pi, 0));
  CHECK(ab.B.norm() <= 1e-8);
  CHECK(std::abs(std::abs(ab.A.determinant()) - 1.0) <= 1e-8);
}

TEST_CASE("A matches the closed-form reciprocal transmission amplitude") {
  double v0 = 4.0, a = 1.0;
  MatrixPotential v = build_potential(spec_square_well(v0, a));
  for (double k : {0.5, 1.0, 3.0, 9.0}) {
    ABPair ab = solve_AB(v, cplx(k, 0));
    cplx ref = oracles::square_well_A(v0, a, k);
    CHECK(std::abs(ab.A(0, 0) - ref) < 1e-8);
  }
}

TEST_CASE("x_eval inside the support is rejected") {
  MatrixPotential v = build_potential(spec_square_well(1.0, 1.0));
  JostSolution f = jost_solve(v, cplx(1.0, 0), JostDirection::from_plus_infinity);
  CHECK_THROWS_AS(extract_AB(f, v, 0.5), std::invalid_argument);
}

TEST_CASE("scattering relations hold on the smooth corpus") {
  // zero potential: all residuals vanish identically
  MatrixPotential v0 = build_potential(zero_spec());
  ScatteringData d0 = scattering_scan(v0, {0.5, 2.0});
  CHECK(d0.max_res_D() < 1e-10);
  CHECK(d0.max_res_E() < 1e-10);

  MatrixPotential v = build_potential(spec_random_hermitian(2, 7, 1.5));
  ScatteringData d = scattering_scan(v, log_grid(0.25, 32.0, 12));
  for (const auto& row : d.rows) REQUIRE(row.ok);
  CHECK(d.max_res_D() <= 1e-7);
  CHECK(d.max_res_D1() <= 1e-7);
  CHECK(d.max_res_E() <= 1e-7);

  SECTION("|det A| >= 1 on the real axis") {
    for (const auto& row : d.rows) CHECK(std::abs(row.detA) >= 1.0 - 1e-9);
  }

  SECTION("residuals shrink with at least second order under grid refinement") {
    MatrixPotential coarse = build_potential(spec_random_hermitian(2, 7, 1.5, 4e-3));
    MatrixPotential fine = build_potential(spec_random_hermitian(2, 7, 1.5, 2e-3));
    double k = 24.0;
    double rc = scattering_scan(coarse, {k}).max_res_D();
    double rf = scattering_scan(fine, {k}).max_res_D();
    CHECK(std::log2(rc / rf) >= 2.0);
  }
}

TEST_CASE("per-k failures are recorded without aborting the scan") {
  MatrixPotential v = build_potential(spec_bump_well(1.0, 1.0));
  ScatteringData d = scattering_scan(v, {1e-5, 1.0});
  REQUIRE(d.rows.size() == 2);
  CHECK_FALSE(d.rows[0].ok);
  CHECK(!d.rows[0].error.empty());
  CHECK(d.rows[1].ok);
}

TEST_CASE("b_decay_check contracts") {
  MatrixPotential smooth = build_potential(spec_gaussian_well(3.0, 0.5, 1.25));
  std::vector<double> ks;
  for (double k = 8.0; k <= 64.001; k *= std::sqrt(2.0)) ks.push_back(k);
  CHECK(b_decay_check(smooth, ks) <= -3.0);

  MatrixPotential pc = build_potential(spec_square_well(1.0, 1.0));
  CHECK_THROWS_AS(b_decay_check(pc, ks), std::invalid_argument);

  MatrixPotential v0 = build_potential(zero_spec());
  CHECK(b_decay_check(v0, ks) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("A(i kappa) is essentially real for real-sampled potentials") {
  MatrixPotential v = build_potential(spec_square_well(4.0, 1.0));
  for (double kap : {0.3, 1.0, 1.9}) {
    ABPair ab = solve_AB(v, cplx(0, kap));
    CHECK(ab.A.imag().cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, max_abs(ab.A)));
  }
}

TEST_CASE("large-k law for A on the upper imaginary axis") {
  MatrixPotential v = build_potential(spec_random_hermitian(2, 7, 1.5));
  Matrix vint = Matrix::Zero(2, 2);
  const auto& g = v.grid();
  // trapezoid of V over the support
  for (int i = v.support_lo_index(); i <= v.support_hi_index(); ++i) {
    double w = (i == v.support_lo_index() || i == v.support_hi_index()) ? 0.5 : 1.0;
    vint += w * g.spacing() * v.sample(i);
  }
  std::vector<double> consts;
  for (double kap : {8.0, 16.0, 32.0}) {
    cplx k(0, kap);
    ABPair ab = solve_AB(v, k);
    Matrix defect = ab.A - Matrix::Identity(2, 2) + vint / (2.0 * iu * k);
    consts.push_back(max_abs(defect) * kap * kap);
  }
  double lo = *std::min_element(consts.begin(), consts.end());
  double hi = *std::max_element(consts.begin(), consts.end());
  CHECK(hi <= 3.0 * lo);  // fitted constant stable across the octaves
}

TEST_CASE("bound states from det A zeros") {
  SECTION("free potential has none") {
    MatrixPotential v0 = build_potential(zero_spec());
    BoundStateSet bs = bound_states_from_detA(v0);
    CHECK(bs.kappas.empty());
  }

  SECTION("shallow well binds exactly one state, matching the FD route") {
    MatrixPotential v = build_potential(spec_square_well(0.5, 1.0));
    BoundStateSet bs = bound_states_from_detA(v);
    REQUIRE(bs.kappas.size() == 1);
    CHECK(bs.multiplicities[0] == 1);
    std::vector<double> oracle = oracles::square_well_kappas(0.5, 1.0);
    REQUIRE(oracle.size() == 1);
    CHECK(bs.kappas[0] == Catch::Approx(oracle[0]).margin(1e-8));
    SpectrumResult fd = fd_eigensolve_1d(v, 35.0, 700);
    REQUIRE(fd.eigenvalues.size() == 1);
    CHECK(std::sqrt(-fd.richardson_estimate[0]) == Catch::Approx(bs.kappas[0]).margin(1e-5));
  }

  SECTION("identity-tensor well keeps the scalar kappas with multiplicity n") {
    MatrixPotential v1 = build_potential(spec_square_well(4.0, 1.0));
    MatrixPotential v3 = build_potential(spec_identity_tensor(spec_square_well(4.0, 1.0), 3));
    BoundStateSet b1 = bound_states_from_detA(v1);
    BoundStateSet b3 = bound_states_from_detA(v3);
    REQUIRE(b1.kappas.size() == b3.kappas.size());
    for (std::size_t i = 0; i < b1.kappas.size(); ++i) {
      CHECK(b3.kappas[i] == Catch::Approx(b1.kappas[i]).margin(1e-6));
      CHECK(b3.multiplicities[i] == 3 * b1.multiplicities[i]);
    }
    SpectrumResult fd = fd_eigensolve_1d(v3, 12.0, 800);
    REQUIRE(fd.eigenvalues.size() == b3.kappas.size());
    for (std::size_t i = 0; i < fd.eigenvalues.size(); ++i) {
      CHECK(fd.multiplicities[i] == 3);
      CHECK(std::sqrt(-fd.richardson_estimate[i]) ==
            Catch::Approx(b3.kappas[b3.kappas.size() - 1 - i]).margin(1e-4));
    }
  }

  SECTION("kappas are strictly decreasing") {
    MatrixPotential v = build_potential(spec_random_hermitian(3, 3, 1.2));
    BoundStateSet bs = bound_states_from_detA(v);
    for (std::size_t i = 0; i + 1 < bs.kappas.size(); ++i)
      CHECK(bs.kappas[i] > bs.kappas[i + 1]);
  }
}

TEST_CASE("resonance screen accepts the corpus") {
  for (const auto& e : corpus_all()) {
    MatrixPotential v = build_potential(e.spec);
    double val = 0;
    INFO(e.name);
    CHECK(resonance_screen(v, &val));
    CHECK(val >= 0.1);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include "ltspec/corpus.hpp"
#include "ltspec/ltbounds.hpp"

using namespace ltspec;

TEST_CASE("classical constants: exact paper values") {
  CHECK(std::abs(classical_constant(1.5, 1) - 3.0 / 16.0) <= 1e-12);
  CHECK(std::abs(classical_constant(0.5, 1) - 0.25) <= 1e-12);
  CHECK(classical_constant(1.0, 1) == Catch::Approx(2.0 / (3.0 * pi)).epsilon(1e-12));
  CHECK(classical_constant(1.5, 2) == Catch::Approx(1.0 / (10.0 * pi)).epsilon(1e-12));
}

TEST_CASE("phase-space quadrature agrees with the Gamma closed form") {
  for (double gamma : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    for (int d : {1, 2, 3}) {
      INFO("gamma=" << gamma << " d=" << d);
      double cf = classical_constant(gamma, d);
      double ps = classical_constant_phase_space(gamma, d);
      CHECK(std::abs(ps - cf) <= 1e-8 * cf);
    }
  }
}

TEST_CASE("product law of the classical constants") {
  for (double gamma : {1.5, 2.0, 2.5}) {
    for (int d : {2, 3}) {
      double lhs = classical_constant(gamma, 1) * classical_constant(gamma + 0.5, d - 1);
      double rhs = classical_constant(gamma, d);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
  }
}

TEST_CASE("aizenman-lieb identity against the Beta-function form") {
  CHECK(aizenman_lieb_identity(2.0) <= 1e-12);
  CHECK(aizenman_lieb_identity(2.5) <= 1e-12);
  CHECK(aizenman_lieb_identity(4.0) <= 1e-12);
  // the gamma = 5/2 value is 5/32, the leading coefficient of the third
  // trace identity
  CHECK(std::abs(classical_constant(2.5, 1) - 5.0 / 32.0) <= 1e-12);
  CHECK_THROWS_AS(aizenman_lieb_identity(1.5), std::invalid_argument);
  CHECK_THROWS_AS(aizenman_lieb_identity(1.0), std::invalid_argument);
}

TEST_CASE("lt ratio: zero potential reports ratio 0") {
  PotentialSpec s;
  s.kind = PotentialKind::zero;
  s.support_lo = -1.0;
  s.support_hi = 1.0;
  s.target_spacing = 1e-2;
  LtReport r = lt_ratio(build_potential(s), 1.5);
  CHECK(r.ratio == 0.0);
  CHECK(r.riesz_mean == 0.0);
}

TEST_CASE("lt ratio stays below one on the corpus") {
  for (const auto& e : corpus_all()) {
    MatrixPotential v = build_potential(e.spec);
    for (double gamma : {1.5, 2.0, 2.5}) {
      LtReport r = lt_ratio(v, gamma);
      INFO(e.name << " gamma=" << gamma);
      CHECK(r.ratio <= 1.0 + 1e-6 + r.slack / std::max(r.classical_bound, 1e-300));
    }
  }
}

TEST_CASE("positive-part potentials are replaced, never silently") {
  // shifted bump: positive lobe plus negative core
  Grid g = make_grid(-1.2, 1.2, 1201);
  auto eval = [](double x) -> Matrix {
    return Matrix::Constant(1, 1, cplx(2.0 * bump(x / 1.0) - 1.2 * bump(x / 0.5), 0));
  };
  MatrixPotential v(g, -1.0, 1.0, 1, Smoothness::smooth, eval);
  LtReport r = lt_ratio(v, 1.5);
  CHECK(r.replaced_positive_part);
  CHECK(r.ratio <= 1.0 + 1e-6 + r.slack / std::max(r.classical_bound, 1e-300));
}

TEST_CASE("gamma-lift chain holds numerically on a corpus spectrum") {
  MatrixPotential v = build_potential(spec_random_hermitian(2, 7, 1.5));
  detail::FdDefaults d = detail::fd_defaults_1d(v);
  SpectrumResult s = fd_eigensolve_1d(v, d.pad, d.n_points);
  for (double gamma : {2.0, 2.5}) {
    GammaLiftCheck c = gamma_lift_check(v, s, gamma);
    INFO("gamma=" << gamma);
    // quadrature reproduces both Beta-reduced sides
    CHECK(c.lhs_quadrature ==
          Catch::Approx(c.lhs_direct).epsilon(1e-6).margin(1e-9));
    CHECK(c.rhs_quadrature ==
          Catch::Approx(c.rhs_direct).epsilon(1e-6).margin(1e-9));
    // and the lift inequality itself
    CHECK(c.lhs_quadrature <= c.rhs_quadrature * (1 + 1e-9) + 1e-9);
  }
}

TEST_CASE("weyl scan: ratios approach one from below") {
  MatrixPotential v = build_potential(spec_square_well(4.0, 1.0));
  std::vector<LtReport> r = weyl_scan(v, 1.5, {25.0, 100.0, 400.0});
  REQUIRE(r.size() == 3);
  CHECK(r[0].ratio < 1.0);
  CHECK(r[1].ratio >= r[0].ratio - 1e-3);
  CHECK(r[2].ratio >= r[1].ratio - 1e-3);
  CHECK(r[2].ratio >= 0.9);
  for (const auto& rep : r) CHECK(rep.ratio <= 1.0 + 1e-6 + 1e-3);
}

TEST_CASE("weyl scan validations") {
  MatrixPotential v = build_potential(spec_square_well(4.0, 1.0));
  CHECK_THROWS_AS(weyl_scan(v, 1.5, {100.0, 25.0}), std::invalid_argument);
  CHECK_THROWS_AS(weyl_scan(v, 1.5, {0.5, 25.0}), std::invalid_argument);
  // resolving alpha = 1e6 would blow the desk-scale guard
  CHECK_THROWS_AS(weyl_scan(v, 1.5, {1e6}), std::invalid_argument);
}

TEST_CASE("lt ratio in 2d") {
  LtReport r = lt_ratio_2d(field2d_gaussian_well(), 1.5, 31);
  CHECK(r.ratio > 0.0);
  CHECK(r.ratio <= 1.0 + 1e-6 + r.slack / std::max(r.classical_bound, 1e-300));
}

TEST_CASE("lifting chain") {
  SECTION("zero field: all four quantities vanish") {
    ScalarField2D v;
    v.x1_lo = v.x2_lo = -2.0;
    v.x1_hi = v.x2_hi = 2.0;
    v.f = [](double, double) { return 0.0; };
    LiftingChain c = lifting_chain_once(v, 1.5, 24);
    CHECK(c.q_box == 0.0);
    CHECK(c.q_operator == 0.0);
    CHECK(c.q_slice_bound == 0.0);
    CHECK(c.q_classical == 0.0);
  }

  SECTION("separable wells: ordered") {
    LiftingChainReport rep = lifting_chain_check(field2d_separable_wells(), 1.5, 36);
    INFO(rep.failing_link);
    CHECK(rep.ordered);
  }

  SECTION("gaussian well: ordered and consistent with the d = 2 ratio") {
    LiftingChainReport rep = lifting_chain_check(field2d_gaussian_well(), 1.5, 36);
    INFO(rep.failing_link);
    CHECK(rep.ordered);
    CHECK(rep.refined.q_box <= rep.refined.q_classical * (1 + 1e-6) + rep.slack12 + rep.slack34);
  }
}

TEST_CASE("pauli rhs") {
  Grid g = make_grid(0.0, 1.0, 33);
  auto constant_field = [&](double value) {
    ScalarField3D f;
    f.gx = f.gy = f.gz = g;
    f.values.assign(static_cast<std::size_t>(33) * 33 * 33, value);
    return f;
  };

  SECTION("V = B = 0 gives 0") {
    CHECK(pauli_rhs(constant_field(0.0), constant_field(0.0), 1.5) == 0.0);
  }

  SECTION("B = 0 doubles the spin-free functional") {
    ScalarField3D v = constant_field(-1.0);
    double with_spin = pauli_rhs(v, constant_field(0.0), 1.5);
    double expect = 2.0 * classical_constant(1.5, 3);  // 2 Lcl int 1^3 over the cube
    CHECK(with_spin == Catch::Approx(expect).epsilon(1e-12));
  }

  SECTION("V = -1, B = 1 on the unit cube: closed form 8 Lcl") {
    double value = pauli_rhs(constant_field(-1.0), constant_field(1.0), 1.5);
    CHECK(value == Catch::Approx(8.0 * classical_constant(1.5, 3)).epsilon(1e-12));
  }

  SECTION("negative B rejected") {
    CHECK_THROWS_AS(pauli_rhs(constant_field(-1.0), constant_field(-0.1), 1.5),
                    std::invalid_argument);
  }

  SECTION("gamma below 3/2 rejected") {
    CHECK_THROWS_AS(pauli_rhs(constant_field(-1.0), constant_field(0.0), 1.0),
                    std::invalid_argument);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include "ltspec/corpus.hpp"
#include "ltspec/sumrules.hpp"

using namespace ltspec;

namespace {

PotentialSpec zero_spec() {
  PotentialSpec s;
  s.kind = PotentialKind::zero;
  s.support_lo = -1.0;
  s.support_hi = 1.0;
  s.target_spacing = 2e-3;
  return s;
}

}  // namespace

TEST_CASE("zero potential: every moment and both sides vanish") {
  MatrixPotential v0 = build_potential(zero_spec());
  SumRuleReport r = sum_rule_report(v0);
  CHECK(std::abs(r.I0) < 1e-9);
  CHECK(std::abs(r.I2) < 1e-9);
  CHECK(std::abs(r.I4) < 1e-9);
  CHECK(r.residual1 < 1e-9);
  CHECK(r.residual2 < 1e-9);
  CHECK(r.residual3 < 1e-9);
}

TEST_CASE("moment integrals are nonnegative for even j") {
  for (const char* name : {"bump4", "gauss3", "rand2"}) {
    PotentialSpec spec;
    for (const auto& e : corpus_smooth())
      if (e.name == name) spec = e.spec;
    MatrixPotential v = build_potential(spec);
    detail::LogDetSampler shared(v);
    for (int j : {0, 2, 4}) {
      INFO(name << " j=" << j);
      CHECK(integral_Ij_detail(v, j, 1e-4, &shared).value >= -1e-9);
    }
  }
}

TEST_CASE("integral_Ij rejections") {
  MatrixPotential pc = build_potential(spec_square_well(1.0, 1.0));
  CHECK_THROWS_AS(integral_Ij(pc, 2), std::invalid_argument);
  MatrixPotential v = build_potential(spec_bump_well(1.0, 1.0));
  CHECK_THROWS_AS(integral_Ij(v, 1), std::invalid_argument);
  CHECK_THROWS_AS(integral_Ij(v, 6), std::invalid_argument);
}

TEST_CASE("second trace identity used as an oracle for I2") {
  // rearranged: I2 = (2 pi / 3) [ (3/16) int tr V^2 - sum m kappa^3 ]
  MatrixPotential v = build_potential(spec_bump_well(4.0, 1.0));
  BoundStateSet bs = bound_states_from_detA(v, 0, 1e-10);
  double s3 = 0;
  for (std::size_t i = 0; i < bs.kappas.size(); ++i)
    s3 += bs.multiplicities[i] * std::pow(bs.kappas[i], 3);
  double implied = (2 * pi / 3.0) * ((3.0 / 16.0) * v.integral_trace_power(2) - s3);
  double direct = integral_Ij(v, 2);
  CHECK(direct == Catch::Approx(implied).epsilon(1e-3));
}

TEST_CASE("trace identities hold on the smooth corpus") {
  for (const char* name : {"bump4", "gauss3"}) {
    PotentialSpec spec;
    for (const auto& e : corpus_smooth())
      if (e.name == name) spec = e.spec;
    SumRuleReport r = sum_rule_report(build_potential(spec));
    INFO(name);
    CHECK(r.residual1 <= 1e-3);
    CHECK(r.residual2 <= 1e-3);
    CHECK(r.residual3 <= 1e-3);
  }
}

TEST_CASE("identity-tensor potential doubles every side") {
  PotentialSpec scalar = spec_bump_well(2.5, 1.0);
  SumRuleReport one = sum_rule_report(build_potential(scalar));
  SumRuleReport two = sum_rule_report(build_potential(spec_identity_tensor(scalar, 2)));
  CHECK(two.lhs1 == Catch::Approx(2 * one.lhs1).epsilon(1e-6));
  CHECK(two.lhs2 == Catch::Approx(2 * one.lhs2).epsilon(1e-6));
  CHECK(two.lhs3 == Catch::Approx(2 * one.lhs3).epsilon(1e-6));
  CHECK(two.rhs1 == Catch::Approx(2 * one.rhs1).epsilon(1e-6));
  CHECK(two.rhs2 == Catch::Approx(2 * one.rhs2).epsilon(1e-6));
  CHECK(two.rhs3 == Catch::Approx(2 * one.rhs3).epsilon(1e-6));
}

TEST_CASE("scale covariance of the second identity") {
  double c = 1.7;
  PotentialSpec base = spec_bump_well(2.0, 1.0);
  PotentialSpec scaled_spec = spec_bump_well(2.0 * c, 1.0);
  SumRuleReport a = sum_rule_report(build_potential(base));
  SumRuleReport b = sum_rule_report(build_potential(scaled_spec));
  CHECK(b.lhs2 == Catch::Approx(c * c * a.lhs2).epsilon(1e-10));
  CHECK(b.rhs2 == Catch::Approx(c * c * a.rhs2).epsilon(1e-3));
}

TEST_CASE("log-det series remainder order") {
  MatrixPotential v = build_potential(spec_bump_well(4.0, 1.0));

  SECTION("zero potential gives the sentinel") {
    MatrixPotential v0 = build_potential(zero_spec());
    LogDetSeriesResult r = logdet_series_check(v0, {8.0, 16.0, 32.0});
    CHECK(r.slope == -std::numeric_limits<double>::infinity());
  }

  SECTION("full series: remainder of order at least k^-5.5") {
    LogDetSeriesResult r = logdet_series_check(v, {8.0, 16.0, 32.0});
    CHECK(r.slope <= -5.5);
  }

  SECTION("one term kept: remainder of order ~ k^-3") {
    LogDetSeriesResult r = logdet_series_check(v, {8.0, 16.0, 32.0}, 1);
    CHECK(r.slope >= -3.5);
    CHECK(r.slope <= -2.5);
  }

  SECTION("piecewise-constant potentials are rejected") {
    MatrixPotential pc = build_potential(spec_square_well(1.0, 1.0));
    CHECK_THROWS_AS(logdet_series_check(pc, {8.0, 16.0}), std::invalid_argument);
  }

  SECTION("kappa range is validated") {
    CHECK_THROWS_AS(logdet_series_check(v, {2.0, 8.0}), std::invalid_argument);
    CHECK_THROWS_AS(logdet_series_check(v, {8.0, 80.0}), std::invalid_argument);
  }
}

TEST_CASE("dispersion formula at k = 2i") {
  MatrixPotential v = build_potential(spec_bump_well(4.0, 1.0));
  DispersionCheck dc = dispersion_check(v);
  CHECK(dc.defect <= 1e-3 * std::max(1.0, std::abs(dc.lhs)));
}

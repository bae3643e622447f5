#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <iostream>

#include "doctest.h"
#include "sapt/recursion.hpp"

using namespace sapt;
using MS = MatrixSymbol;

TEST_CASE("scaling configs satisfy their structural invariants") {
  for (Scaling tag : {Scaling::nr, Scaling::sr}) {
    ScalingConfig cfg = make_config(tag, 3);
    CHECK(cfg.pi0 * cfg.pi0 == cfg.pi0);
    CHECK(cfg.u0 * cfg.u0.dagger() == MS::identity());
    CHECK(cfg.u0.dagger() * cfg.u0 == MS::identity());
    CHECK(cfg.u0 * cfg.pi0 * cfg.u0.dagger() == MS::pi_ref());
  }
}

TEST_CASE("free Foldy-Wouthuysen identity: u0 H0 u0* = E beta") {
  ScalingConfig cfg = make_config(Scaling::sr, 3);
  MS h0 = cfg.u0 * cfg.H.coeff(0) * cfg.u0.dagger();
  CHECK(h0 == MS::beta().scaled(ScalarExpr::energy()));
}

TEST_CASE("nr projection: first orders") {
  ScalingConfig cfg = make_config(Scaling::nr, 3);
  PowerSeries pi = build_projection(cfg, 1);
  MS pi1 = MS::xi_dot_alpha().scaled(ScalarExpr::mass(-1).scaled(Rational(1, 2)));
  CHECK(pi.coeff(1) == pi1);
  CHECK(pi.coeff(1).block_diag(cfg.pi0).is_zero());  // purely off-diagonal

  PowerSeries pi3 = build_projection(cfg, 3);
  MS pi2 = (MS::xi_squared() * MS::beta()).scaled(ScalarExpr::mass(-2).scaled(Rational(-1, 4)));
  CHECK(pi3.coeff(2) == pi2);
}

TEST_CASE("nr pi^(3) against the printed fixture and its defect-consistent variant") {
  ScalingConfig cfg = make_config(Scaling::nr, 3);
  PowerSeries pi = build_projection(cfg, 3);

  FixtureDiff printed = compare_fixture("nr_pi3", pi);
  FixtureDiff corrected = compare_fixture("nr_pi3_defect", pi);
  if (!printed.pass) {
    std::cout << "nr_pi3 printed-fixture mismatches (order,row,col):\n";
    for (const auto& m : printed.mismatches)
      std::cout << "  (" << m.order << "," << m.row << "," << m.col << ") expected " << m.expected
                << "  got " << m.actual << "\n";
  }
  // The printed third-order term has a grad-V coefficient that fails the
  // order-3 commutation defect; the recursion lands on the eps/(4m^2) value.
  CHECK(corrected.pass);
  CHECK(!printed.pass);
  for (const auto& m : printed.mismatches) CHECK(m.order == 3);
}

TEST_CASE("nr unitary: low orders") {
  ScalingConfig cfg = make_config(Scaling::nr, 3);
  PowerSeries pi = build_projection(cfg, 3);
  PowerSeries u = build_unitary(cfg, 2, pi);
  MS u1 = (MS::xi_dot_alpha() * MS::beta()).scaled(ScalarExpr::mass(-1).scaled(Rational(-1, 2)));
  MS u2 = MS::xi_squared().scaled(ScalarExpr::mass(-2).scaled(Rational(-1, 8)));
  CHECK(u.coeff(1) == u1);
  CHECK(u.coeff(2) == u2);
}

TEST_CASE("u3 adjudication: defects are the acceptance bar") {
  U3Adjudication adj = adjudicate_u3();
  std::cout << "u3 adjudication: defects_pass=" << adj.defects_pass
            << " matches_prop=" << adj.matches_prop
            << " matches_appendix=" << adj.matches_appendix << " named=" << adj.named_match
            << "\n";
  ScalingConfig cfg = make_config(Scaling::nr, 3);
  PowerSeries pi = build_projection(cfg, 3);
  PowerSeries u = build_unitary(cfg, 3, pi);
  std::cout << "computed u3:\n" << u.coeff(3).latex() << "\n";
  CHECK(adj.defects_pass);
  // The defect-consistent u3 agrees with the appendix derivation in the
  // B.Sigma and xi^2 (xi.alpha) beta terms but with the opposite sign on the
  // grad-V term; it matches neither printed variant verbatim.
  CHECK(!adj.matches_prop);
  CHECK(!adj.matches_appendix);
  CHECK(adj.named_match == "none");
}

TEST_CASE("sr projection and unitary have no first or second order correction") {
  ScalingConfig cfg = make_config(Scaling::sr, 2);
  PowerSeries pi = build_projection(cfg, 2);
  CHECK(pi.coeff(1).is_zero());
  CHECK(pi.coeff(2).is_zero());
  PowerSeries u = build_unitary(cfg, 2, pi);
  CHECK(u.coeff(1).is_zero());
  CHECK(u.coeff(2).is_zero());
}

TEST_CASE("nr diagonalized hamiltonian") {
  AdiabaticChain chain = build_chain(Scaling::nr, 3);
  CHECK(chain.h.coeff(0) == MS::beta().scaled(ScalarExpr::mass()));
  CHECK(chain.h.coeff(1).is_zero());
  MS h2 = (MS::xi_squared() * MS::beta()).scaled(ScalarExpr::mass(-1).scaled(Rational(1, 2))) +
          MS::scalar(ScalarExpr::field(FieldKind::V));
  CHECK(chain.h.coeff(2) == h2);
  MS h3 = (MS::b_dot_sigma() * MS::beta())
              .scaled(ScalarExpr::eps() * ScalarExpr::mass(-1).scaled(Rational(-1, 2)));
  CHECK(chain.h.coeff(3) == h3);
  CHECK(compare_fixture("nr_h3", chain.h).pass);
}

TEST_CASE("sr diagonalized hamiltonian leading orders") {
  AdiabaticChain chain = build_chain(Scaling::sr, 3);
  CHECK(chain.h.coeff(0) == MS::beta().scaled(ScalarExpr::energy()));
  CHECK(chain.h.coeff(1).is_zero());
  CHECK(chain.h.coeff(2) == MS::scalar(ScalarExpr::field(FieldKind::V)));
}

TEST_CASE("nr effective hamiltonian through fourth order equals the printed result") {
  AdiabaticChain chain = build_chain(Scaling::nr, 4);
  FixtureDiff d = compare_fixture("nr_heff4", chain.h_eff);
  if (!d.pass) {
    std::cout << "nr_heff4 mismatches:\n";
    for (const auto& m : d.mismatches)
      std::cout << "  (" << m.order << "," << m.row << "," << m.col << ") expected " << m.expected
                << "  got " << m.actual << "\n";
  }
  CHECK(d.pass);
}

TEST_CASE("sr effective hamiltonian through third order equals the printed result") {
  AdiabaticChain chain = build_chain(Scaling::sr, 3);
  FixtureDiff d = compare_fixture("sr_heff3", chain.h_eff);
  if (!d.pass) {
    std::cout << "sr_heff3 mismatches:\n";
    for (const auto& m : d.mismatches)
      std::cout << "  (" << m.order << "," << m.row << "," << m.col << ") expected " << m.expected
                << "  got " << m.actual << "\n";
  }
  CHECK(d.pass);
}

TEST_CASE("effective hamiltonian invariants") {
  for (Scaling tag : {Scaling::nr, Scaling::sr}) {
    const int K = tag == Scaling::nr ? 4 : 3;
    AdiabaticChain chain = build_chain(tag, K);
    MS piref = MS::pi_ref();
    for (int n = 0; n <= K; ++n) {
      MS h = chain.h_eff.coeff(n);
      CHECK(h.dagger() == h);
      CHECK(piref * h == h);
      CHECK(h * piref == h);
    }
  }
}

TEST_CASE("defect verification passes through the supported orders") {
  for (Scaling tag : {Scaling::nr, Scaling::sr}) {
    const int K = tag == Scaling::nr ? 4 : 3;
    ScalingConfig cfg = make_config(tag, K);
    PowerSeries pi = build_projection(cfg, K);
    PowerSeries u = build_unitary(cfg, K, pi);
    auto reports = verify_defects(cfg, pi, u, K);
    for (const auto& r : reports) {
      if (!r.pass)
        std::cout << scaling_name(tag) << " defect " << r.kind << " fails first at order "
                  << r.max_nonvanishing << "\n";
      CHECK(r.pass);
    }
  }
}

TEST_CASE("defect reports expose genuine failures") {
  ScalingConfig cfg = make_config(Scaling::nr, 1);
  PowerSeries bare(Scaling::nr, 1);
  bare.set_coeff(0, cfg.pi0);
  PowerSeries unit(Scaling::nr, 1);
  unit.set_coeff(0, MS::identity());
  auto reports = verify_defects(cfg, bare, unit, 1);
  // pi_0 alone: the commutation defect at order 1 is [H_1, pi_0]
  const DefectReport* comm = nullptr;
  for (const auto& r : reports)
    if (r.kind == "commutation") comm = &r;
  REQUIRE(comm);
  CHECK(!comm->pass);
  CHECK(comm->max_nonvanishing == 1);
  CHECK(comm->residuals.at(1) == commutator(MS::xi_dot_alpha(), cfg.pi0));

  // at order 0 everything is clean
  auto zero_order = verify_defects(cfg, bare.truncated(0), unit.truncated(0), 0);
  for (const auto& r : zero_order) CHECK(r.pass);
}

TEST_CASE("unsupported orders are refused") {
  ScalingConfig nr = make_config(Scaling::nr, 9);
  CHECK_THROWS_AS(build_projection(nr, 9), UnsupportedOrder);
  ScalingConfig sr = make_config(Scaling::sr, 4);
  CHECK_THROWS_AS(build_projection(sr, 4), UnsupportedOrder);
}

TEST_CASE("recursion is deterministic") {
  AdiabaticChain a = build_chain(Scaling::nr, 4);
  AdiabaticChain b = build_chain(Scaling::nr, 4);
  CHECK(a.pi == b.pi);
  CHECK(a.u == b.u);
  CHECK(a.h == b.h);
  CHECK(a.h_eff == b.h_eff);
}

TEST_CASE("triple products may be associated either way up to truncation") {
  ScalingConfig cfg = make_config(Scaling::nr, 3);
  PowerSeries pi = build_projection(cfg, 3);
  PowerSeries u = build_unitary(cfg, 3, pi);
  PowerSeries lhs = series_moyal(series_moyal(u, pi), u.dagger());
  PowerSeries rhs = series_moyal(u, series_moyal(pi, u.dagger()));
  CHECK(lhs == rhs);
}

TEST_CASE("taylor consistency between the scalings") {
  TaylorReport r3 = taylor_compare_scalings(3);
  CHECK(r3.zero_through(3));

  TaylorReport r4 = taylor_compare_scalings(4);
  CHECK(r4.zero_through(3));
  MS darwin = (MS::laplace_v() * MS::pi_ref())
                  .scaled(ScalarExpr::eps(2) * ScalarExpr::mass(-2).scaled(Rational(1, 8)));
  if (!(r4.residual.coeff(4) == darwin))
    std::cout << "taylor residual at 4:\n" << r4.residual.coeff(4).latex() << "\n";
  CHECK(r4.residual.coeff(4) == darwin);

  TaylorReport r0 = taylor_compare_scalings(0);
  CHECK(r0.zero_through(0));
}

TEST_CASE("field-free reduction matches the kinetic expansion") {
  TaylorReport r = taylor_compare_scalings(4, /*zero_fields=*/true);
  for (int n = 0; n <= 4; ++n) CHECK(r.residual.coeff(n).is_zero());

  AdiabaticChain chain = build_chain(Scaling::nr, 4);
  PowerSeries free_heff = chain.h_eff.with_zero_fields();
  MS piref = MS::pi_ref();
  CHECK(free_heff.coeff(0) == piref.scaled(ScalarExpr::mass()));
  CHECK(free_heff.coeff(2) ==
        (MS::xi_squared() * piref).scaled(ScalarExpr::mass(-1).scaled(Rational(1, 2))));
  CHECK(free_heff.coeff(3).is_zero());
  CHECK(free_heff.coeff(4) == (MS::xi_squared() * MS::xi_squared() * piref)
                                  .scaled(ScalarExpr::mass(-3).scaled(Rational(-1, 8))));
}

TEST_CASE("fixture diff reporting") {
  CHECK_THROWS_AS(compare_fixture("does_not_exist", PowerSeries(Scaling::nr, 1)), UnknownFixture);
  AdiabaticChain chain = build_chain(Scaling::nr, 3);
  FixtureDiff d = compare_fixture("nr_u3_prop", chain.u);
  nlohmann::json j = d.to_json();
  CHECK(j.contains("mismatches"));
  CHECK(j["name"] == "nr_u3_prop");
}

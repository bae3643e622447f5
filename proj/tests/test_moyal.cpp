#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "sapt/moyal.hpp"

using namespace sapt;
using MS = MatrixSymbol;

namespace {

MS half_xi_alpha_over_m() {
  return MS::xi_dot_alpha().scaled(ScalarExpr::mass(-1).scaled(Rational(1, 2)));
}

MS random_poly_symbol(std::mt19937_64& rng, int depth = 1) {
  auto atom = [&]() -> MS {
    switch (rng() % 7) {
      case 0: return MS::beta();
      case 1: return MS::alpha(1 + (int)(rng() % 3));
      case 2: return MS::identity().scaled(ScalarExpr::xi(1 + (int)(rng() % 3)));
      case 3: return MS::xi_dot_alpha();
      case 4: return MS::identity().scaled(ScalarExpr::field(FieldKind::V));
      case 5: return MS::sigma_big(1 + (int)(rng() % 3));
      default: return MS::identity();
    }
  };
  MS a = atom();
  for (int k = 0; k < depth; ++k) {
    switch (rng() % 3) {
      case 0: a = a + atom(); break;
      case 1: a = a * atom(); break;
      default: a = a - atom(); break;
    }
  }
  return a;
}

}  // namespace

TEST_CASE("order (0,0) is the pointwise product") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 50; ++k) {
    MS f = random_poly_symbol(rng), g = random_poly_symbol(rng);
    CHECK(moyal_term(f, g, 0, 0) == f * g);
  }
}

TEST_CASE("(1,1) on a position-only symbol vanishes") {
  MS v = MS::identity().scaled(ScalarExpr::field(FieldKind::V));
  std::mt19937_64 rng(19);
  for (int k = 0; k < 20; ++k) CHECK(moyal_term(v, random_poly_symbol(rng), 1, 1).is_zero());
}

TEST_CASE("(1,0) matches the explicit Poisson bracket") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 50; ++k) {
    MS f = random_poly_symbol(rng), g = random_poly_symbol(rng);
    MS bracket;
    for (int j = 1; j <= 3; ++j)
      bracket += f.d_xi(j) * g.d_x(j) - f.d_x(j) * g.d_xi(j);
    CHECK(moyal_term(f, g, 1, 0) ==
          bracket.scaled(ScalarExpr::imag_unit().scaled(Rational(-1, 2))));
  }
}

TEST_CASE("(1,1) of the first projection correction reproduces -B.Sigma/(4m^2)") {
  MS pi1 = half_xi_alpha_over_m();
  MS expected = MS::b_dot_sigma().scaled(ScalarExpr::mass(-2).scaled(Rational(-1, 4)));
  CHECK(moyal_term(pi1, pi1, 1, 1) == expected);
}

TEST_CASE("nr resummation examples") {
  MS pi1 = half_xi_alpha_over_m();
  MS expected =
      MS::b_dot_sigma().scaled(ScalarExpr::eps() * ScalarExpr::mass(-2).scaled(Rational(-1, 4)));
  CHECK(nr_term(pi1, pi1, 1) == expected);

  // (u1 # H1)_{(2)} vanishes: both linear in xi and x-independent
  MS u1 = (MS::xi_dot_alpha() * MS::beta()).scaled(ScalarExpr::mass(-1).scaled(Rational(-1, 2)));
  CHECK(nr_term(u1, MS::xi_dot_alpha(), 2).is_zero());

  // constant f: order 0 is the pointwise product
  MS f = MS::beta();
  std::mt19937_64 rng(29);
  for (int k = 0; k < 20; ++k) {
    MS g = random_poly_symbol(rng);
    CHECK(nr_term(f, g, 0) == f * g);
  }
}

TEST_CASE("nr order 0 resums the full position-momentum bracket series") {
  // [V, pi_1]-type commutator at order zero: i eps grad V . d_xi
  MS v = MS::identity().scaled(ScalarExpr::field(FieldKind::V));
  MS pi1 = half_xi_alpha_over_m();
  MS comm = nr_term(v, pi1, 0) - nr_term(pi1, v, 0);
  MS expected;
  for (int j = 1; j <= 3; ++j) {
    std::array<int, 3> d{0, 0, 0};
    d[j - 1] = 1;
    expected += MS::alpha(j).scaled(ScalarExpr::field(FieldKind::V, d));
  }
  expected = expected.scaled(ScalarExpr::imag_unit() * ScalarExpr::eps() *
                             ScalarExpr::mass(-1).scaled(Rational(1, 2)));
  CHECK(comm == expected);
}

TEST_CASE("sr resummation examples") {
  // momentum-only pair: orders 1 and 2 vanish, first magnetic term at 3
  MS f = MS::xi_dot_alpha(), g = MS::xi_dot_alpha();
  CHECK(sr_term(f, g, 0) == f * g);
  CHECK(sr_term(f, g, 1).is_zero());
  CHECK(sr_term(f, g, 2).is_zero());
  CHECK(sr_term(f, g, 3) == moyal_term(f, g, 1, 1).scaled(ScalarExpr::eps()));

  // position-only V: order 1 is the eps (1,0) term
  MS v = MS::identity().scaled(ScalarExpr::field(FieldKind::V));
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    MS h = random_poly_symbol(rng);
    CHECK(sr_term(v, h, 1) == moyal_term(v, h, 1, 0).scaled(ScalarExpr::eps()));
  }

  // E-containing momentum-only symbols are legal in sr products
  MS e = MS::identity().scaled(ScalarExpr::energy());
  CHECK(sr_term(e, e, 0) == MS::identity().scaled(ScalarExpr::energy(2)));
  CHECK(sr_term(e, e, 1).is_zero());
  // scalar-valued factors kill (1,1) by antisymmetry of B; matrix factors do not
  CHECK(sr_term(e, e, 3).is_zero());
  MS eb = MS::beta().scaled(ScalarExpr::energy());
  CHECK(!sr_term(eb, MS::xi_dot_alpha(), 3).is_zero());
}

TEST_CASE("unsupported orders are refused") {
  MS e = MS::identity().scaled(ScalarExpr::energy());
  CHECK_THROWS_AS(moyal_term(e, e, 3, 1), UnsupportedOrder);
  CHECK_THROWS_AS(moyal_term(e, e, 1, 2), UnsupportedOrder);
  CHECK_THROWS_AS(sr_term(e, e, 5), UnsupportedOrder);
  // nr expansion of E-symbols against x-dependent factors does not terminate
  MS v = MS::identity().scaled(ScalarExpr::field(FieldKind::V));
  CHECK_THROWS_AS(nr_term(e, v, 0), NonTerminating);
}

TEST_CASE("bilinearity") {
  std::mt19937_64 rng(37);
  for (int k = 0; k < 200; ++k) {
    MS f1 = random_poly_symbol(rng), f2 = random_poly_symbol(rng), g = random_poly_symbol(rng);
    int n = (int)(rng() % 2), kk = (int)(rng() % 2);
    if (n == 0) kk = 0;
    MS lhs = moyal_term(f1 + f2, g, n, kk);
    CHECK(lhs == moyal_term(f1, g, n, kk) + moyal_term(f2, g, n, kk));
    MS rhs = moyal_term(g, f1 + f2, n, kk);
    CHECK(rhs == moyal_term(g, f1, n, kk) + moyal_term(g, f2, n, kk));
  }
}

TEST_CASE("adjoint compatibility order by order") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 150; ++k) {
    MS f = random_poly_symbol(rng), g = random_poly_symbol(rng);
    for (int j = 0; j <= 2; ++j) {
      CHECK(nr_term(f, g, j).dagger() == nr_term(g.dagger(), f.dagger(), j));
      CHECK(sr_term(f, g, j).dagger() == sr_term(g.dagger(), f.dagger(), j));
    }
  }
}

TEST_CASE("degree counting: (n,k) carries n+k momentum derivatives") {
  std::mt19937_64 rng(43);
  const int table[][2] = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {1, 1}, {2, 1}, {2, 2}};
  for (int k = 0; k < 100; ++k) {
    MS f = random_poly_symbol(rng), g = random_poly_symbol(rng);
    auto df = f.xi_degree(), dg = g.xi_degree();
    REQUIRE(df);
    REQUIRE(dg);
    for (auto [n, kk] : table) {
      if (n + kk > *df + *dg) CHECK(moyal_term(f, g, n, kk).is_zero());
    }
  }
}

TEST_CASE("B = 0 kills every magnetic order") {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 100; ++k) {
    MS f = random_poly_symbol(rng).with_zero_fields(true, false);
    MS g = random_poly_symbol(rng).with_zero_fields(true, false);
    // every k >= 1 term carries a B or dB atom, so zeroing B empties it
    for (int j = 1; j <= 2; ++j)
      CHECK(nr_term(f, g, j).with_zero_fields(true, false).is_zero());
    for (int n = 3; n <= 4; ++n) {
      MS srn = sr_term(f, g, n).with_zero_fields(true, false);
      // what survives is the non-magnetic (n,0) ladder
      auto df = f.xi_degree(), dg = g.xi_degree();
      MS expect = (df && dg && n <= *df + *dg)
                      ? moyal_term(f, g, n, 0).scaled(ScalarExpr::eps(n)).with_zero_fields(true, false)
                      : MS::zero();
      CHECK(srn == expect);
    }
  }
}

TEST_CASE("series product: identity and grading") {
  std::mt19937_64 rng(53);
  PowerSeries id(Scaling::nr, 3);
  id.set_coeff(0, MS::identity());
  PowerSeries s(Scaling::nr, 3);
  for (int n = 0; n <= 3; ++n) s.set_coeff(n, random_poly_symbol(rng));
  CHECK(series_moyal(id, s) == s);
  CHECK(series_moyal(s, id) == s);

  PowerSeries s2 = s;
  s2.set_coeff(3, random_poly_symbol(rng));
  PowerSeries p1 = series_moyal(s, s), p2 = series_moyal(s2, s2);
  for (int n = 0; n <= 2; ++n) CHECK(p1.coeff(n) == p2.coeff(n));
}

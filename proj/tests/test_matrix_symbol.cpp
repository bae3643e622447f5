#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "sapt/matrix_symbol.hpp"

using namespace sapt;

namespace {

using MS = MatrixSymbol;

MS random_symbol(std::mt19937_64& rng, int depth = 1) {
  auto atom = [&]() -> MS {
    switch (rng() % 8) {
      case 0: return MS::beta();
      case 1: return MS::alpha(1 + (int)(rng() % 3));
      case 2: return MS::sigma_big(1 + (int)(rng() % 3));
      case 3: return MS::pi_ref();
      case 4: return MS::identity().scaled(ScalarExpr::xi(1 + (int)(rng() % 3)));
      case 5: return MS::identity().scaled(ScalarExpr::imag_unit());
      case 6: return MS::xi_dot_alpha();
      default: return MS::identity().scaled(ScalarExpr::field(FieldKind::V));
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

TEST_CASE("Clifford relations") {
  MS one = MS::identity();
  for (int j = 1; j <= 3; ++j) {
    for (int k = 1; k <= 3; ++k) {
      MS anti = MS::alpha(j) * MS::alpha(k) + MS::alpha(k) * MS::alpha(j);
      if (j == k)
        CHECK(anti == one + one);
      else
        CHECK(anti.is_zero());
    }
    CHECK((MS::alpha(j) * MS::beta() + MS::beta() * MS::alpha(j)).is_zero());
  }
  CHECK(MS::beta() * MS::beta() == one);
}

TEST_CASE("reference projection") {
  MS p = MS::pi_ref();
  CHECK(p * p == p);
  CHECK(MS::beta() * p == p);
  CHECK(p.at(0, 0) == ScalarExpr::one());
  CHECK(p.at(2, 2).is_zero());
}

TEST_CASE("xi.alpha squares to xi^2") {
  MS s = MS::xi_dot_alpha();
  CHECK(s * s == MS::xi_squared());
}

TEST_CASE("dagger examples") {
  for (int j = 1; j <= 3; ++j) CHECK(MS::alpha(j).dagger() == MS::alpha(j));
  MS ib = MS::beta().scaled(ScalarExpr::imag_unit());
  CHECK(ib.dagger() == -ib);
  // u1 = -(1/2m)(xi.alpha) beta is anti-hermitian
  MS u1 = (MS::xi_dot_alpha() * MS::beta()).scaled(ScalarExpr::mass(-1).scaled(Rational(-1, 2)));
  CHECK(u1.dagger() == -u1);
}

TEST_CASE("dagger is an anti-homomorphism") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    MS a = random_symbol(rng), b = random_symbol(rng);
    CHECK((a * b).dagger() == b.dagger() * a.dagger());
  }
}

TEST_CASE("products of basis constants stay in the 16-element algebra") {
  // basis: 1, beta, alpha_j, beta alpha_j, Sigma_j, beta Sigma_j, G, beta G
  // with G = alpha_1 alpha_2 alpha_3.
  std::vector<MS> basis;
  basis.push_back(MS::identity());
  basis.push_back(MS::beta());
  for (int j = 1; j <= 3; ++j) basis.push_back(MS::alpha(j));
  for (int j = 1; j <= 3; ++j) basis.push_back(MS::beta() * MS::alpha(j));
  for (int j = 1; j <= 3; ++j) basis.push_back(MS::sigma_big(j));
  for (int j = 1; j <= 3; ++j) basis.push_back(MS::beta() * MS::sigma_big(j));
  MS G = MS::alpha(1) * MS::alpha(2) * MS::alpha(3);
  basis.push_back(G);
  basis.push_back(MS::beta() * G);
  REQUIRE(basis.size() == 16);

  // trace inner product <A,B> = tr(A^dag B)/4 detects the coefficient
  auto trace_coeff = [](const MS& a, const MS& b) {
    ScalarExpr s;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) s += a.at(c, r).conj() * b.at(c, r);
    return s.scaled(Rational(1, 4));
  };

  std::vector<MS> gens;
  gens.push_back(MS::identity());
  gens.push_back(MS::beta());
  for (int j = 1; j <= 3; ++j) gens.push_back(MS::alpha(j));
  for (int j = 1; j <= 3; ++j) gens.push_back(MS::sigma_big(j));

  for (const auto& a : gens)
    for (const auto& b : gens) {
      MS prod = a * b;
      MS recon;
      for (const auto& e : basis) recon += e.scaled(trace_coeff(e, prod));
      CHECK(recon == prod);
      // coefficients are Gaussian integers: denominators 1 after the 1/4
      for (const auto& e : basis) {
        ScalarExpr c = trace_coeff(e, prod);
        for (const auto& t : c.terms()) CHECK(t.coeff.den() == 1);
      }
    }
}

TEST_CASE("block decomposition") {
  MS p = MS::pi_ref();
  CHECK(MS::beta().block_diag(p) == MS::beta());
  CHECK(MS::xi_dot_alpha().block_offdiag(p) == MS::xi_dot_alpha());
  CHECK(MS::xi_dot_alpha().block_diag(p).is_zero());
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    MS a = random_symbol(rng);
    MS d = a.block_diag(p);
    CHECK(d + a.block_offdiag(p) == a);
    CHECK(d.block_diag(p) == d);  // idempotent as a linear map
  }
}

TEST_CASE("series grading") {
  PowerSeries a(Scaling::nr, 1), b(Scaling::nr, 1);
  MS x = MS::identity().scaled(ScalarExpr::xi(1));
  a.set_coeff(0, MS::identity());
  a.set_coeff(1, x);
  b.set_coeff(0, MS::identity());
  b.set_coeff(1, -x);
  PowerSeries prod = a.mul_pointwise(b);
  CHECK(prod.coeff(0) == MS::identity());
  CHECK(prod.coeff(1).is_zero());

  // identity series times s returns s
  PowerSeries id(Scaling::nr, 3), s(Scaling::nr, 3);
  id.set_coeff(0, MS::identity());
  std::mt19937_64 rng(8);
  for (int n = 0; n <= 3; ++n) s.set_coeff(n, random_symbol(rng));
  CHECK(id.mul_pointwise(s) == s);

  // order-K output ignores perturbations above K
  PowerSeries t = s.truncated(2);
  PowerSeries u = s;
  u.set_coeff(3, random_symbol(rng));
  CHECK(t.mul_pointwise(t.truncated(2)) == u.truncated(2).mul_pointwise(t.truncated(2)));
}

TEST_CASE("series json round trip") {
  std::mt19937_64 rng(21);
  PowerSeries s(Scaling::sr, 2);
  for (int n = 0; n <= 2; ++n) s.set_coeff(n, random_symbol(rng));
  PowerSeries back = PowerSeries::from_json(s.to_json());
  CHECK(back == s);
}

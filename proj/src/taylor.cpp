#include "sapt/recursion.hpp"

namespace sapt {

namespace {

/// Truncated power series in u = xi^2/(m^2 c^2) with rational coefficients.
using USeries = std::vector<Rational>;

USeries u_one(int J) {
  USeries s(J + 1, Rational(0));
  s[0] = Rational(1);
  return s;
}

USeries u_mul(const USeries& a, const USeries& b) {
  const int J = (int)a.size() - 1;
  USeries r(J + 1, Rational(0));
  for (int i = 0; i <= J; ++i)
    for (int j = 0; i + j <= J; ++j) r[i + j] += a[i] * b[j];
  return r;
}

/// (1 + w)^eta for a series w with w[0] = 0 and rational eta.
USeries u_binom_pow(const USeries& w, const Rational& eta) {
  const int J = (int)w.size() - 1;
  USeries r = u_one(J), wp = u_one(J);
  Rational c(1);
  for (int j = 1; j <= J; ++j) {
    c = c * (eta - Rational(j - 1)) / Rational(j);
    wp = u_mul(wp, w);
    for (int i = 0; i <= J; ++i) r[i] += c * wp[i];
  }
  return r;
}

USeries u_shifted(const USeries& s) {  // s - 1
  USeries w = s;
  w[0] -= Rational(1);
  return w;
}

/// (1+u)^eta.
USeries sqrt_like(int J, const Rational& eta) {
  USeries w(J + 1, Rational(0));
  if (J >= 1) w[1] = Rational(1);
  return u_binom_pow(w, eta);
}

Rational two_pow(int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r = r * Rational(2);
  for (int i = 0; i > e; --i) r = r / Rational(2);
  return r;
}

/// Expansion data of one term's E/(E+m)/N content under xi -> xi/c:
/// atom part = (rational coeff) * m^{mshift} * sum_j S[j] u^j.
struct AtomExpansion {
  Rational coeff;
  int mshift;
  USeries series;
};

/// C(u) = (1 + sqrt(1+u))/2, the expansion of (E+m)(xi/c) / (2m).
USeries half_shifted_sqrt(int J) {
  USeries C = sqrt_like(J, Rational(1, 2));
  for (auto& c : C) c = c * Rational(1, 2);
  C[0] += Rational(1, 2);
  return C;
}

AtomExpansion expand_atoms(int e_pow, int em_pow, int r_pow, int J) {
  AtomExpansion a{Rational(1), 0, u_one(J)};
  if (e_pow != 0) {
    // E(xi/c)^p = m^p (1+u)^{p/2}
    a.mshift += e_pow;
    a.series = u_mul(a.series, sqrt_like(J, Rational(e_pow, 2)));
  }
  if (em_pow != 0) {
    // (E+m)(xi/c)^q = (2m)^q C(u)^q
    a.mshift += em_pow;
    a.coeff = a.coeff * two_pow(em_pow);
    a.series = u_mul(a.series, u_binom_pow(u_shifted(half_shifted_sqrt(J)), Rational(em_pow)));
  }
  if (r_pow != 0) {
    // N(xi/c) = (1/(2m)) T^{-1/2}, T = (1+u)^{1/2} C(u)
    a.mshift -= r_pow;
    a.coeff = a.coeff * two_pow(-r_pow);
    USeries T = u_mul(sqrt_like(J, Rational(1, 2)), half_shifted_sqrt(J));
    a.series = u_mul(a.series, u_binom_pow(u_shifted(T), Rational(-r_pow, 2)));
  }
  return a;
}

}  // namespace

PowerSeries substitute_xi_over_c(const PowerSeries& sr_series, int K) {
  const int J = K / 2 + 1;
  // powers of xi^2 = xi_1^2 + xi_2^2 + xi_3^2 as expressions
  std::vector<ScalarExpr> xisq_pow(J + 1, ScalarExpr::one());
  {
    ScalarExpr xisq;
    for (int ax = 1; ax <= 3; ++ax) xisq += ScalarExpr::xi(ax, 2);
    for (int j = 1; j <= J; ++j) xisq_pow[j] = xisq_pow[j - 1] * xisq;
  }

  std::map<int, MatrixSymbol> acc;
  for (const auto& [n, mat] : sr_series.orders()) {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        for (const auto& t : mat.at(r, c).terms()) {
          const int d = t.xi_pows[0] + t.xi_pows[1] + t.xi_pows[2];
          AtomExpansion ax = expand_atoms(t.e_pow, t.em_pow, t.r_pow, J);
          for (int j = 0; j <= J; ++j) {
            if (ax.series[j].is_zero()) continue;
            const int order = n + d + 2 * j;
            if (order > K) continue;
            ScalarTerm base = t;
            base.e_pow = base.em_pow = base.r_pow = 0;
            base.coeff = t.coeff * ax.coeff * ax.series[j];
            base.m_pow = t.m_pow + ax.mshift - 2 * j;
            ScalarExpr contrib = ScalarExpr({base}) * xisq_pow[j];
            auto [it, inserted] = acc.try_emplace(order, MatrixSymbol::zero());
            MatrixSymbol& target = it->second;
            target.at(r, c) += contrib;
          }
        }
      }
  }
  PowerSeries out(Scaling::nr, K);
  for (auto& [order, mat] : acc) out.set_coeff(order, mat);
  return out;
}

bool TaylorReport::zero_through(int n) const {
  for (int k = 0; k <= n && k <= residual.truncation(); ++k)
    if (!residual.coeff(k).is_zero()) return false;
  return true;
}

nlohmann::json TaylorReport::to_json() const {
  nlohmann::json j;
  j["residual"] = residual.to_json();
  j["zero_through_3"] = zero_through(3);
  return j;
}

TaylorReport taylor_compare_scalings(int K, bool zero_fields) {
  if (K > 4) throw UnsupportedOrder("taylor_compare_scalings: K > 4");
  const int Ksr = std::min(3, K);
  AdiabaticChain sr = build_chain(Scaling::sr, Ksr);
  PowerSeries sr_heff = sr.h_eff;
  const int Knr = std::min(4, K);
  AdiabaticChain nr = build_chain(Scaling::nr, Knr);
  PowerSeries nr_heff = nr.h_eff.truncated(K);
  if (zero_fields) {
    sr_heff = sr_heff.with_zero_fields();
    nr_heff = nr_heff.with_zero_fields();
  }
  PowerSeries substituted = substitute_xi_over_c(sr_heff, K);
  TaylorReport rep{nr_heff - substituted};
  return rep;
}

}  // namespace sapt

#include "sapt/scalar_expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sapt {

std::string field_kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::V: return "V";
    case FieldKind::B12: return "B12";
    case FieldKind::B13: return "B13";
    case FieldKind::B23: return "B23";
  }
  return "?";
}

FieldKind field_kind_from_name(const std::string& s) {
  if (s == "V") return FieldKind::V;
  if (s == "B12") return FieldKind::B12;
  if (s == "B13") return FieldKind::B13;
  if (s == "B23") return FieldKind::B23;
  throw std::invalid_argument("unknown field kind: " + s);
}

namespace {

void sort_fields(std::vector<FieldAtom>& fs) {
  std::sort(fs.begin(), fs.end());
  // fold equal (kind, deriv) atoms into one power
  std::vector<FieldAtom> out;
  for (const auto& a : fs) {
    if (!out.empty() && out.back().kind == a.kind && out.back().deriv == a.deriv)
      out.back().pow += a.pow;
    else
      out.push_back(a);
  }
  fs = std::move(out);
}

bool term_key_less(const ScalarTerm& a, const ScalarTerm& b) { return a.key() < b.key(); }

/// Applies the single-term rewrite rules until none fires. A term may split
/// into several; results are appended to `out`.
void reduce_term(ScalarTerm t, std::vector<ScalarTerm>& out) {
  if (t.coeff.is_zero()) return;

  // i^2 -> -1
  if (t.i_pow < 0 || t.i_pow > 1) {
    int q = t.i_pow >= 0 ? t.i_pow / 2 : (t.i_pow - 1) / 2;
    int r = t.i_pow - 2 * q;
    if (r < 0) { r += 2; q -= 1; }
    // i^{2q} = (-1)^q ; i^{-1} handled through i^{-1} = -i i^{-2} chain above
    if (q % 2 != 0) t.coeff = -t.coeff;
    t.i_pow = r;
  }

  // N^2 -> (1/2) E^-1 (E+m)^-1 ; N^-1 -> N * 2E(E+m) would reintroduce
  // positive powers, so negative r is normalized by multiplying with
  // N^-2 = 2 E (E+m).
  while (t.r_pow >= 2) {
    t.r_pow -= 2;
    t.coeff = t.coeff * Rational(1, 2);
    t.e_pow -= 1;
    t.em_pow -= 1;
  }
  while (t.r_pow <= -1) {
    t.r_pow += 2;
    t.coeff = t.coeff * Rational(2);
    t.e_pow += 1;
    t.em_pow += 1;
  }

  // (E+m)^q with q > 0: binomial expansion into E and m powers.
  if (t.em_pow > 0) {
    int q = t.em_pow;
    for (int j = 0; j <= q; ++j) {
      ScalarTerm s = t;
      s.em_pow = 0;
      s.coeff = t.coeff * Rational::binomial(q, j);
      s.e_pow = t.e_pow + j;
      s.m_pow = t.m_pow + (q - j);
      reduce_term(std::move(s), out);
    }
    return;
  }

  // E (E+m)^-1 = 1 - m (E+m)^-1  (eliminate positive E against negative E+m)
  if (t.e_pow >= 1 && t.em_pow <= -1) {
    ScalarTerm a = t;
    a.e_pow -= 1;
    a.em_pow += 1;
    ScalarTerm b = t;
    b.e_pow -= 1;
    b.m_pow += 1;
    b.coeff = -b.coeff;
    reduce_term(std::move(a), out);
    reduce_term(std::move(b), out);
    return;
  }

  // partial fractions: E^-1 (E+m)^-1 = (1/m)(E^-1 - (E+m)^-1), so no term
  // keeps both denominators
  if (t.e_pow <= -1 && t.em_pow <= -1) {
    ScalarTerm a = t;
    a.m_pow -= 1;
    a.em_pow += 1;
    ScalarTerm b = t;
    b.m_pow -= 1;
    b.e_pow += 1;
    b.coeff = -b.coeff;
    reduce_term(std::move(a), out);
    reduce_term(std::move(b), out);
    return;
  }

  // Bianchi identity div B = 0: d3 B12 = d2 B13 - d1 B23. Derivatives of B12
  // along x3 are eliminated, which the order-4 defect cancellations require.
  for (size_t k = 0; k < t.fields.size(); ++k) {
    const FieldAtom& f = t.fields[k];
    if (f.kind != FieldKind::B12 || f.deriv[2] < 1) continue;
    FieldAtom x = f, y = f;
    x.kind = FieldKind::B13;
    x.deriv[2] -= 1;
    x.deriv[1] += 1;
    x.pow = 1;
    y.kind = FieldKind::B23;
    y.deriv[2] -= 1;
    y.deriv[0] += 1;
    y.pow = 1;
    const int p = f.pow;
    ScalarTerm rest = t;
    rest.fields.erase(rest.fields.begin() + k);
    for (int a = 0; a <= p; ++a) {
      ScalarTerm s = rest;
      s.coeff = rest.coeff * Rational::binomial(p, a);
      if ((p - a) % 2 != 0) s.coeff = -s.coeff;
      for (int r = 0; r < a; ++r) s.fields.push_back(x);
      for (int r = 0; r < p - a; ++r) s.fields.push_back(y);
      reduce_term(std::move(s), out);
    }
    return;
  }

  // E^2 -> m^2 + xi^2 (only fires with em_pow == 0 by the rule above)
  if (t.e_pow >= 2) {
    ScalarTerm a = t;
    a.e_pow -= 2;
    a.m_pow += 2;
    reduce_term(std::move(a), out);
    for (int ax = 0; ax < 3; ++ax) {
      ScalarTerm b = t;
      b.e_pow -= 2;
      b.xi_pows[ax] += 2;
      reduce_term(std::move(b), out);
    }
    return;
  }

  sort_fields(t.fields);
  out.push_back(std::move(t));
}

void merge_terms(std::vector<ScalarTerm>& ts) {
  std::sort(ts.begin(), ts.end(), term_key_less);
  std::vector<ScalarTerm> out;
  for (auto& t : ts) {
    if (!out.empty() && out.back().key() == t.key())
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
  }
  ts.clear();
  for (auto& t : out)
    if (!t.coeff.is_zero()) ts.push_back(std::move(t));
}

/// Folds xi_1^2 + xi_2^2 + xi_3^2 triples over a common cofactor carrying a
/// negative E or (E+m) power back through xi^2 = E^2 - m^2. Uses the minimal
/// coefficient of the three slots so equal values land on one normal form.
/// Returns true if a fold fired.
bool fold_xi_squares(std::vector<ScalarTerm>& ts) {
  for (size_t idx = 0; idx < ts.size(); ++idx) {
    const ScalarTerm& t = ts[idx];
    if (!(t.e_pow <= -1 || t.em_pow <= -1)) continue;
    for (int ax = 0; ax < 3; ++ax) {
      if (t.xi_pows[ax] < 2) continue;
      std::array<int, 3> base = t.xi_pows;
      base[ax] -= 2;
      // locate the three sibling slots base + 2 e_j
      Rational c[3];
      long found[3] = {-1, -1, -1};
      for (int j = 0; j < 3; ++j) {
        ScalarTerm probe = t;
        probe.xi_pows = base;
        probe.xi_pows[j] += 2;
        for (size_t k = 0; k < ts.size(); ++k) {
          if (ts[k].key() == probe.key()) { found[j] = (long)k; c[j] = ts[k].coeff; break; }
        }
      }
      Rational r = c[0];
      if (c[1] < r) r = c[1];
      if (c[2] < r) r = c[2];
      if (r.is_zero()) continue;

      std::vector<ScalarTerm> next;
      for (size_t k = 0; k < ts.size(); ++k) {
        bool is_slot = false;
        for (int j = 0; j < 3; ++j)
          if ((long)k == found[j]) { is_slot = true; break; }
        if (!is_slot) next.push_back(ts[k]);
      }
      for (int j = 0; j < 3; ++j) {
        Rational cj = c[j] - r;
        if (cj.is_zero()) continue;
        ScalarTerm s = t;
        s.xi_pows = base;
        s.xi_pows[j] += 2;
        s.coeff = cj;
        next.push_back(std::move(s));
      }
      // + r * (E^2 - m^2) * base-monomial
      ScalarTerm e2 = t;
      e2.xi_pows = base;
      e2.coeff = r;
      e2.e_pow += 2;
      ScalarTerm m2 = t;
      m2.xi_pows = base;
      m2.coeff = -r;
      m2.m_pow += 2;
      std::vector<ScalarTerm> reduced;
      reduce_term(std::move(e2), reduced);
      reduce_term(std::move(m2), reduced);
      for (auto& s : reduced) next.push_back(std::move(s));
      merge_terms(next);
      ts = std::move(next);
      return true;
    }
  }
  return false;
}

}  // namespace

ScalarExpr::ScalarExpr(std::vector<ScalarTerm> raw) {
  terms_ = std::move(raw);
  normalize();
}

void ScalarExpr::normalize() {
  std::vector<ScalarTerm> reduced;
  for (auto& t : terms_) reduce_term(std::move(t), reduced);
  merge_terms(reduced);
  int guard = 0;
  while (fold_xi_squares(reduced)) {
    if (++guard > 10000) throw std::runtime_error("ScalarExpr: fold did not terminate");
  }
  terms_ = std::move(reduced);
}

ScalarExpr ScalarExpr::rational(const Rational& r) {
  ScalarTerm t;
  t.coeff = r;
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::imag_unit() {
  ScalarTerm t;
  t.coeff = Rational(1);
  t.i_pow = 1;
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::eps(int p) {
  ScalarTerm t;
  t.coeff = Rational(1);
  t.eps_pow = p;
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::mass(int p) {
  ScalarTerm t;
  t.coeff = Rational(1);
  t.m_pow = p;
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::xi(int axis, int p) {
  ScalarTerm t;
  t.coeff = Rational(1);
  t.xi_pows[axis - 1] = p;
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::energy(int p) {
  ScalarTerm t;
  t.coeff = Rational(1);
  t.e_pow = p;
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::energy_plus_m(int p) {
  ScalarTerm t;
  t.coeff = Rational(1);
  t.em_pow = p;
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::inv_sqrt_2EEm() {
  ScalarTerm t;
  t.coeff = Rational(1);
  t.r_pow = 1;
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::field(FieldKind kind, std::array<int, 3> deriv, int pow) {
  ScalarTerm t;
  t.coeff = Rational(1);
  t.fields.push_back({kind, deriv, pow});
  return ScalarExpr({t});
}

ScalarExpr ScalarExpr::operator+(const ScalarExpr& o) const {
  std::vector<ScalarTerm> ts = terms_;
  ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
  return ScalarExpr(std::move(ts));
}

ScalarExpr ScalarExpr::operator-(const ScalarExpr& o) const { return *this + (-o); }

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

ScalarExpr ScalarExpr::scaled(const Rational& r) const {
  if (r.is_zero()) return ScalarExpr();
  ScalarExpr out = *this;
  for (auto& t : out.terms_) t.coeff = t.coeff * r;
  return out;
}

ScalarExpr ScalarExpr::operator*(const ScalarExpr& o) const {
  std::vector<ScalarTerm> ts;
  ts.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      ScalarTerm t;
      t.coeff = a.coeff * b.coeff;
      t.i_pow = a.i_pow + b.i_pow;
      t.eps_pow = a.eps_pow + b.eps_pow;
      t.m_pow = a.m_pow + b.m_pow;
      for (int k = 0; k < 3; ++k) t.xi_pows[k] = a.xi_pows[k] + b.xi_pows[k];
      t.e_pow = a.e_pow + b.e_pow;
      t.em_pow = a.em_pow + b.em_pow;
      t.r_pow = a.r_pow + b.r_pow;
      t.fields = a.fields;
      t.fields.insert(t.fields.end(), b.fields.begin(), b.fields.end());
      ts.push_back(std::move(t));
    }
  }
  return ScalarExpr(std::move(ts));
}

ScalarExpr ScalarExpr::d_xi(int axis) const {
  const int ax = axis - 1;
  std::vector<ScalarTerm> ts;
  for (const auto& t : terms_) {
    // monomial factor
    if (t.xi_pows[ax] > 0) {
      ScalarTerm s = t;
      s.coeff = t.coeff * Rational(t.xi_pows[ax]);
      s.xi_pows[ax] -= 1;
      ts.push_back(std::move(s));
    }
    // E^p: p xi_ax E^{p-2}
    if (t.e_pow != 0) {
      ScalarTerm s = t;
      s.coeff = t.coeff * Rational(t.e_pow);
      s.xi_pows[ax] += 1;
      s.e_pow -= 2;
      ts.push_back(std::move(s));
    }
    // (E+m)^q: q xi_ax E^{-1} (E+m)^{q-1}
    if (t.em_pow != 0) {
      ScalarTerm s = t;
      s.coeff = t.coeff * Rational(t.em_pow);
      s.xi_pows[ax] += 1;
      s.e_pow -= 1;
      s.em_pow -= 1;
      ts.push_back(std::move(s));
    }
    // N^r: r * (-xi_ax) [ E^-1(E+m)^-1 + (m/2) E^-2 (E+m)^-1 ] N^r
    if (t.r_pow != 0) {
      ScalarTerm s1 = t;
      s1.coeff = t.coeff * Rational(-t.r_pow);
      s1.xi_pows[ax] += 1;
      s1.e_pow -= 1;
      s1.em_pow -= 1;
      ts.push_back(std::move(s1));
      ScalarTerm s2 = t;
      s2.coeff = t.coeff * Rational(-t.r_pow, 2);
      s2.xi_pows[ax] += 1;
      s2.m_pow += 1;
      s2.e_pow -= 2;
      s2.em_pow -= 1;
      ts.push_back(std::move(s2));
    }
  }
  return ScalarExpr(std::move(ts));
}

ScalarExpr ScalarExpr::d_x(int axis) const {
  const int ax = axis - 1;
  std::vector<ScalarTerm> ts;
  for (const auto& t : terms_) {
    for (size_t k = 0; k < t.fields.size(); ++k) {
      const FieldAtom& f = t.fields[k];
      ScalarTerm s = t;
      s.coeff = t.coeff * Rational(f.pow);
      // replace one factor of f by its derivative
      if (f.pow == 1)
        s.fields.erase(s.fields.begin() + k);
      else
        s.fields[k].pow -= 1;
      FieldAtom d = f;
      d.pow = 1;
      d.deriv[ax] += 1;
      s.fields.push_back(d);
      ts.push_back(std::move(s));
    }
  }
  return ScalarExpr(std::move(ts));
}

ScalarExpr ScalarExpr::conj() const {
  ScalarExpr r = *this;
  for (auto& t : r.terms_)
    if (t.i_pow == 1) t.coeff = -t.coeff;
  return r;
}

std::optional<int> ScalarExpr::xi_degree() const {
  int deg = 0;
  for (const auto& t : terms_) {
    if (t.e_pow != 0 || t.em_pow != 0 || t.r_pow != 0) return std::nullopt;
    deg = std::max(deg, t.xi_pows[0] + t.xi_pows[1] + t.xi_pows[2]);
  }
  return deg;
}

bool ScalarExpr::has_energy_atoms() const {
  for (const auto& t : terms_)
    if (t.e_pow != 0 || t.em_pow != 0 || t.r_pow != 0) return true;
  return false;
}

bool ScalarExpr::has_field_atoms() const {
  for (const auto& t : terms_)
    if (!t.fields.empty()) return true;
  return false;
}

ScalarExpr ScalarExpr::with_zero_fields(bool zero_B, bool zero_V) const {
  std::vector<ScalarTerm> ts;
  for (const auto& t : terms_) {
    bool killed = false;
    for (const auto& f : t.fields) {
      bool is_v = f.kind == FieldKind::V;
      if ((is_v && zero_V) || (!is_v && zero_B)) { killed = true; break; }
    }
    if (!killed) ts.push_back(t);
  }
  return ScalarExpr(std::move(ts));
}

std::complex<double> ScalarExpr::eval(const NumericBindings& b) const {
  const double x2 = b.xi[0] * b.xi[0] + b.xi[1] * b.xi[1] + b.xi[2] * b.xi[2];
  const double E = std::sqrt(b.m * b.m + x2);
  const double Em = E + b.m;
  const double N = 1.0 / std::sqrt(2.0 * E * Em);
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff.to_double();
    v *= std::pow(b.eps, t.eps_pow);
    v *= std::pow(b.m, t.m_pow);
    for (int k = 0; k < 3; ++k) v *= std::pow(b.xi[k], t.xi_pows[k]);
    v *= std::pow(E, t.e_pow);
    v *= std::pow(Em, t.em_pow);
    v *= std::pow(N, t.r_pow);
    for (const auto& f : t.fields) {
      if (!b.field) throw std::domain_error("ScalarExpr::eval: no field binding");
      v *= std::pow(b.field(f.kind, f.deriv), f.pow);
    }
    sum += t.i_pow ? std::complex<double>(0.0, v) : std::complex<double>(v, 0.0);
  }
  return sum;
}

std::vector<std::complex<double>> ScalarExpr::xi1_poly(const NumericBindings& b) const {
  std::vector<std::complex<double>> coeffs;
  for (const auto& t : terms_) {
    if (t.e_pow != 0 || t.em_pow != 0 || t.r_pow != 0)
      throw std::domain_error("ScalarExpr::xi1_poly: non-polynomial symbol");
    double v = t.coeff.to_double();
    v *= std::pow(b.eps, t.eps_pow);
    v *= std::pow(b.m, t.m_pow);
    v *= std::pow(b.xi[1], t.xi_pows[1]);
    v *= std::pow(b.xi[2], t.xi_pows[2]);
    for (const auto& f : t.fields) {
      if (!b.field) throw std::domain_error("ScalarExpr::xi1_poly: no field binding");
      v *= std::pow(b.field(f.kind, f.deriv), f.pow);
    }
    const int d = t.xi_pows[0];
    if ((int)coeffs.size() <= d) coeffs.resize(d + 1, 0.0);
    coeffs[d] += t.i_pow ? std::complex<double>(0.0, v) : std::complex<double>(v, 0.0);
  }
  return coeffs;
}

nlohmann::json ScalarExpr::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json jt;
    jt["coeff"] = t.coeff.str();
    jt["i"] = t.i_pow;
    jt["eps"] = t.eps_pow;
    jt["m"] = t.m_pow;
    jt["xi"] = t.xi_pows;
    jt["E"] = t.e_pow;
    jt["Em"] = t.em_pow;
    jt["R"] = t.r_pow;
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& f : t.fields)
      fs.push_back({{"kind", field_kind_name(f.kind)}, {"deriv", f.deriv}, {"pow", f.pow}});
    jt["fields"] = fs;
    arr.push_back(jt);
  }
  return arr;
}

ScalarExpr ScalarExpr::from_json(const nlohmann::json& j) {
  std::vector<ScalarTerm> ts;
  for (const auto& jt : j) {
    ScalarTerm t;
    t.coeff = Rational::parse(jt.at("coeff").get<std::string>());
    t.i_pow = jt.at("i").get<int>();
    t.eps_pow = jt.at("eps").get<int>();
    t.m_pow = jt.at("m").get<int>();
    auto xi = jt.at("xi");
    for (int k = 0; k < 3; ++k) t.xi_pows[k] = xi.at(k).get<int>();
    t.e_pow = jt.at("E").get<int>();
    t.em_pow = jt.at("Em").get<int>();
    t.r_pow = jt.at("R").get<int>();
    for (const auto& jf : jt.at("fields")) {
      FieldAtom f;
      f.kind = field_kind_from_name(jf.at("kind").get<std::string>());
      auto d = jf.at("deriv");
      for (int k = 0; k < 3; ++k) f.deriv[k] = d.at(k).get<int>();
      f.pow = jf.at("pow").get<int>();
      t.fields.push_back(f);
    }
    ts.push_back(std::move(t));
  }
  return ScalarExpr(std::move(ts));
}

namespace {

void latex_pow(std::ostringstream& os, const std::string& base, int p) {
  if (p == 0) return;
  os << base;
  if (p != 1) os << "^{" << p << "}";
  os << " ";
}

std::string field_latex(const FieldAtom& f) {
  std::ostringstream os;
  int nd = f.deriv[0] + f.deriv[1] + f.deriv[2];
  if (nd > 0) {
    os << "\\partial";
    if (nd > 1) os << "^{" << nd << "}";
    os << "_{";
    for (int k = 0; k < 3; ++k)
      for (int r = 0; r < f.deriv[k]; ++r) os << (k + 1);
    os << "}";
  }
  switch (f.kind) {
    case FieldKind::V: os << "V"; break;
    case FieldKind::B12: os << "B_{12}"; break;
    case FieldKind::B13: os << "B_{13}"; break;
    case FieldKind::B23: os << "B_{23}"; break;
  }
  if (f.pow != 1) os << "^{" << f.pow << "}";
  return os.str();
}

}  // namespace

std::string ScalarExpr::latex() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    bool neg = c < Rational(0);
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::ostringstream body;
    if (t.i_pow == 1) body << "i ";
    if (t.eps_pow) latex_pow(body, "\\epsilon", t.eps_pow);
    if (t.m_pow) latex_pow(body, "m", t.m_pow);
    for (int k = 0; k < 3; ++k)
      if (t.xi_pows[k]) latex_pow(body, "\\xi_" + std::to_string(k + 1), t.xi_pows[k]);
    if (t.e_pow) latex_pow(body, "E", t.e_pow);
    if (t.em_pow) latex_pow(body, "(E+m)", t.em_pow);
    if (t.r_pow) latex_pow(body, "\\mathcal{N}", t.r_pow);
    for (const auto& f : t.fields) body << field_latex(f) << " ";
    std::string bs = body.str();
    if (!bs.empty() && bs.back() == ' ') bs.pop_back();
    if (c.den() == 1) {
      if (c.num() != 1 || bs.empty()) os << c.num() << (bs.empty() ? "" : " \\, ");
      os << bs;
    } else {
      os << "\\tfrac{" << c.num() << "}{" << c.den() << "}" << (bs.empty() ? "" : " \\, ") << bs;
    }
  }
  return os.str();
}

}  // namespace sapt

#include "sapt/recursion.hpp"

namespace sapt {

namespace {

ScalarExpr frac(long long n, long long d) { return ScalarExpr::rational(Rational(n, d)); }

MatrixSymbol nr_pi1() {
  return MatrixSymbol::xi_dot_alpha().scaled(frac(1, 2) * ScalarExpr::mass(-1));
}

MatrixSymbol nr_pi2() {
  return (MatrixSymbol::xi_squared() * MatrixSymbol::beta())
      .scaled(frac(-1, 4) * ScalarExpr::mass(-2));
}

/// pi_3 with the grad-V coefficient `vnum/vden * eps/m^2`.
MatrixSymbol nr_pi3(long long vnum, long long vden) {
  MatrixSymbol bs = (MatrixSymbol::b_dot_sigma() * MatrixSymbol::beta())
                        .scaled(frac(1, 4) * ScalarExpr::eps() * ScalarExpr::mass(-2));
  MatrixSymbol kin = (MatrixSymbol::xi_squared() * MatrixSymbol::xi_dot_alpha())
                         .scaled(frac(-1, 4) * ScalarExpr::mass(-3));
  MatrixSymbol gv = (MatrixSymbol::grad_v_dot_alpha() * MatrixSymbol::beta())
                        .scaled(frac(vnum, vden) * ScalarExpr::imag_unit() * ScalarExpr::eps() *
                                ScalarExpr::mass(-2));
  return bs + kin + gv;
}

MatrixSymbol nr_u1() {
  return (MatrixSymbol::xi_dot_alpha() * MatrixSymbol::beta())
      .scaled(frac(-1, 2) * ScalarExpr::mass(-1));
}

MatrixSymbol nr_u2() { return MatrixSymbol::xi_squared().scaled(frac(-1, 8) * ScalarExpr::mass(-2)); }

MatrixSymbol nr_u3(long long bnum, long long bden, long long knum, long long kden,
                   long long vnum, long long vden) {
  MatrixSymbol bs =
      MatrixSymbol::b_dot_sigma().scaled(frac(bnum, bden) * ScalarExpr::eps() * ScalarExpr::mass(-2));
  MatrixSymbol kin = (MatrixSymbol::xi_squared() * MatrixSymbol::xi_dot_alpha() * MatrixSymbol::beta())
                         .scaled(frac(knum, kden) * ScalarExpr::mass(-3));
  MatrixSymbol gv = MatrixSymbol::grad_v_dot_alpha().scaled(
      frac(vnum, vden) * ScalarExpr::imag_unit() * ScalarExpr::eps() * ScalarExpr::mass(-2));
  return bs + kin + gv;
}

PowerSeries nr_u_series(MatrixSymbol u3) {
  PowerSeries s(Scaling::nr, 3);
  s.set_coeff(0, MatrixSymbol::identity());
  s.set_coeff(1, nr_u1());
  s.set_coeff(2, nr_u2());
  s.set_coeff(3, u3);
  return s;
}

std::map<std::string, PowerSeries> build_store() {
  std::map<std::string, PowerSeries> store;

  // superadiabatic projection through third order, as printed
  {
    PowerSeries s(Scaling::nr, 3);
    s.set_coeff(0, MatrixSymbol::pi_ref());
    s.set_coeff(1, nr_pi1());
    s.set_coeff(2, nr_pi2());
    s.set_coeff(3, nr_pi3(1, 2));
    store.emplace("nr_pi3", s);
  }
  // same series with the grad-V coefficient the defect equations force
  {
    PowerSeries s(Scaling::nr, 3);
    s.set_coeff(0, MatrixSymbol::pi_ref());
    s.set_coeff(1, nr_pi1());
    s.set_coeff(2, nr_pi2());
    s.set_coeff(3, nr_pi3(1, 4));
    store.emplace("nr_pi3_defect", s);
  }

  // the two printed third-order unitary variants
  store.emplace("nr_u3_prop", nr_u_series(nr_u3(1, 4, -3, 16, -1, 2)));
  store.emplace("nr_u3_appendix", nr_u_series(nr_u3(1, 8, 3, 16, 1, 4)));

  // diagonalized hamiltonian through third order
  {
    PowerSeries s(Scaling::nr, 3);
    s.set_coeff(0, MatrixSymbol::beta().scaled(ScalarExpr::mass()));
    s.set_coeff(2, (MatrixSymbol::xi_squared() * MatrixSymbol::beta())
                           .scaled(frac(1, 2) * ScalarExpr::mass(-1)) +
                       MatrixSymbol::scalar(ScalarExpr::field(FieldKind::V)));
    s.set_coeff(3, (MatrixSymbol::b_dot_sigma() * MatrixSymbol::beta())
                       .scaled(frac(-1, 2) * ScalarExpr::eps() * ScalarExpr::mass(-1)));
    store.emplace("nr_h3", s);
  }

  // non-relativistic effective hamiltonian through fourth order
  {
    const MatrixSymbol piref = MatrixSymbol::pi_ref();
    PowerSeries s(Scaling::nr, 4);
    s.set_coeff(0, piref.scaled(ScalarExpr::mass()));
    s.set_coeff(2, (MatrixSymbol::xi_squared().scaled(frac(1, 2) * ScalarExpr::mass(-1)) +
                    MatrixSymbol::scalar(ScalarExpr::field(FieldKind::V))) *
                       piref);
    s.set_coeff(3, (MatrixSymbol::b_dot_sigma() * piref)
                       .scaled(frac(-1, 2) * ScalarExpr::eps() * ScalarExpr::mass(-1)));
    MatrixSymbol quartic = (MatrixSymbol::xi_squared() * MatrixSymbol::xi_squared())
                               .scaled(frac(-1, 8) * ScalarExpr::mass(-3));
    MatrixSymbol so = MatrixSymbol::grad_v_wedge_xi_dot_sigma().scaled(
        frac(1, 4) * ScalarExpr::eps() * ScalarExpr::mass(-2));
    MatrixSymbol darwin =
        MatrixSymbol::laplace_v().scaled(frac(1, 8) * ScalarExpr::eps(2) * ScalarExpr::mass(-2));
    s.set_coeff(4, (quartic + so + darwin) * piref);
    store.emplace("nr_heff4", s);
  }

  // semi-relativistic effective hamiltonian through third order
  {
    const MatrixSymbol piref = MatrixSymbol::pi_ref();
    PowerSeries s(Scaling::sr, 3);
    s.set_coeff(0, piref.scaled(ScalarExpr::energy()));
    s.set_coeff(2, piref.scaled(ScalarExpr::field(FieldKind::V)));
    MatrixSymbol spin = MatrixSymbol::b_dot_sigma().scaled(ScalarExpr::energy_plus_m()) -
                        MatrixSymbol::grad_v_wedge_xi_dot_sigma();
    s.set_coeff(3, (spin * piref)
                       .scaled(frac(-1, 2) * ScalarExpr::eps() * ScalarExpr::energy(-1) *
                               ScalarExpr::energy_plus_m(-1)));
    store.emplace("sr_heff3", s);
  }

  return store;
}

}  // namespace

const std::map<std::string, PowerSeries>& fixture_store() {
  static const std::map<std::string, PowerSeries> store = build_store();
  return store;
}

std::string fixture_version() { return "fixtures-v1"; }

nlohmann::json FixtureDiff::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["pass"] = pass;
  j["fixture_version"] = fixture_version();
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : mismatches)
    ms.push_back({{"order", m.order},
                  {"row", m.row},
                  {"col", m.col},
                  {"expected", m.expected},
                  {"actual", m.actual}});
  j["mismatches"] = ms;
  return j;
}

FixtureDiff compare_fixture(const std::string& name, const PowerSeries& computed) {
  auto it = fixture_store().find(name);
  if (it == fixture_store().end()) throw UnknownFixture("unknown fixture: " + name);
  const PowerSeries& ref = it->second;
  FixtureDiff diff;
  diff.name = name;
  const int K = std::min(ref.truncation(), computed.truncation());
  for (int n = 0; n <= K; ++n) {
    MatrixSymbol a = ref.coeff(n), b = computed.coeff(n);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (a.at(r, c) != b.at(r, c))
          diff.mismatches.push_back({n, r, c, a.at(r, c).latex(), b.at(r, c).latex()});
  }
  diff.pass = diff.mismatches.empty();
  return diff;
}

nlohmann::json U3Adjudication::to_json() const {
  nlohmann::json j;
  j["defects_pass"] = defects_pass;
  j["matches_prop"] = matches_prop;
  j["matches_appendix"] = matches_appendix;
  j["named_match"] = named_match;
  j["note"] = note;
  return j;
}

U3Adjudication adjudicate_u3() {
  ScalingConfig cfg = make_config(Scaling::nr, 3);
  PowerSeries pi = build_projection(cfg, 3);
  PowerSeries u = build_unitary(cfg, 3, pi);

  U3Adjudication adj;
  adj.defects_pass = true;
  for (const auto& rep : verify_defects(cfg, pi, u, 3)) adj.defects_pass &= rep.pass;
  adj.matches_prop = compare_fixture("nr_u3_prop", u).pass;
  adj.matches_appendix = compare_fixture("nr_u3_appendix", u).pass;
  if (adj.matches_prop && !adj.matches_appendix)
    adj.named_match = "nr_u3_prop";
  else if (adj.matches_appendix && !adj.matches_prop)
    adj.named_match = "nr_u3_appendix";
  else if (adj.matches_prop && adj.matches_appendix)
    adj.named_match = "both";
  else
    adj.named_match = "none";
  if (adj.named_match == "none") {
    auto da = compare_fixture("nr_u3_appendix", u);
    auto dp = compare_fixture("nr_u3_prop", u);
    adj.note = "defect-consistent u3 differs from both printed variants (" +
               std::to_string(da.mismatches.size()) + " entries vs appendix, " +
               std::to_string(dp.mismatches.size()) + " vs prop)";
  }
  return adj;
}

}  // namespace sapt

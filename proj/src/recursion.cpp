#include "sapt/recursion.hpp"

#include <algorithm>

namespace sapt {

namespace {

const Rational kHalf(1, 2);

MatrixSymbol h_nr0() { return MatrixSymbol::beta().scaled(ScalarExpr::mass()); }
MatrixSymbol h_potential() { return MatrixSymbol::scalar(ScalarExpr::field(FieldKind::V)); }

}  // namespace

ScalingConfig make_config(Scaling tag, int truncation) {
  if (tag == Scaling::nr) {
    PowerSeries H(Scaling::nr, truncation);
    H.set_coeff(0, h_nr0());
    if (truncation >= 1) H.set_coeff(1, MatrixSymbol::xi_dot_alpha());
    if (truncation >= 2) H.set_coeff(2, h_potential());
    ScalarExpr gap = ScalarExpr::mass(-1).scaled(Rational(-1, 2));
    return {Scaling::nr, 4, H, MatrixSymbol::pi_ref(), MatrixSymbol::identity(), gap};
  }
  PowerSeries H(Scaling::sr, truncation);
  MatrixSymbol H0 = h_nr0() + MatrixSymbol::xi_dot_alpha();
  H.set_coeff(0, H0);
  if (truncation >= 2) H.set_coeff(2, h_potential());
  // pi0 = (1 + H0/E)/2, u0 = N ((E+m) - (xi.alpha) beta)
  MatrixSymbol pi0 =
      (MatrixSymbol::identity() + H0.scaled(ScalarExpr::energy(-1))).scaled(kHalf);
  ScalarExpr n_atom = ScalarExpr::inv_sqrt_2EEm();
  MatrixSymbol u0 = MatrixSymbol::scalar(n_atom * ScalarExpr::energy_plus_m()) -
                    (MatrixSymbol::xi_dot_alpha() * MatrixSymbol::beta()).scaled(n_atom);
  ScalarExpr gap = ScalarExpr::energy(-1).scaled(Rational(-1, 2));
  return {Scaling::sr, 3, H, pi0, u0, gap};
}

PowerSeries build_projection(const ScalingConfig& cfg, int K) {
  if (K > cfg.max_order)
    throw UnsupportedOrder("build_projection: order " + std::to_string(K) + " exceeds " +
                           scaling_name(cfg.tag) + " support");
  PowerSeries pi(cfg.tag, K);
  pi.set_coeff(0, cfg.pi0);
  const MatrixSymbol p = cfg.pi0;
  const MatrixSymbol q = MatrixSymbol::identity() - p;
  PowerSeries H = cfg.H.truncated(K);
  for (int k = 0; k < K; ++k) {
    // projection defect: order-(k+1) coefficient of pi # pi - pi
    MatrixSymbol G = series_moyal(pi, pi).coeff(k + 1) - pi.coeff(k + 1);
    MatrixSymbol pid = (q * G * q) - (p * G * p);
    // commutation defect of the diagonally corrected series
    PowerSeries ext = pi;
    ext.set_coeff(k + 1, pid);
    MatrixSymbol F = series_moyal(H, ext).coeff(k + 1) - series_moyal(ext, H).coeff(k + 1);
    MatrixSymbol piod = ((p * F * q) - (q * F * p)).scaled(cfg.gap_inverse);
    pi.set_coeff(k + 1, pid + piod);
  }
  return pi;
}

PowerSeries build_unitary(const ScalingConfig& cfg, int K, const PowerSeries& pi) {
  if (K > cfg.max_order)
    throw UnsupportedOrder("build_unitary: order " + std::to_string(K) + " exceeds " +
                           scaling_name(cfg.tag) + " support");
  if (pi.truncation() < K)
    throw std::invalid_argument("build_unitary: projection not built far enough");
  PowerSeries u(cfg.tag, K);
  u.set_coeff(0, cfg.u0);
  PowerSeries pk = pi.truncated(K);
  const MatrixSymbol piref = MatrixSymbol::pi_ref();
  for (int k = 0; k < K; ++k) {
    // The defect data live in the reference frame, so the correction
    // w = -A/2 + [pi_ref, B] updates the unitary as w * u0 (for the
    // non-relativistic scaling u0 = 1 and this is the textbook update).
    MatrixSymbol A = series_moyal(u, u.dagger()).coeff(k + 1);
    MatrixSymbol a = A.scaled(Rational(-1, 2));
    PowerSeries probe = u;
    probe.set_coeff(k + 1, a * cfg.u0);
    MatrixSymbol B = series_moyal3(probe, pk, probe.dagger()).coeff(k + 1);
    u.set_coeff(k + 1, (a + commutator(piref, B)) * cfg.u0);
  }
  return u;
}

PowerSeries diagonalize_hamiltonian(const ScalingConfig& cfg, int K, const PowerSeries& u) {
  if (K > cfg.max_order)
    throw UnsupportedOrder("diagonalize_hamiltonian: order " + std::to_string(K) +
                           " exceeds " + scaling_name(cfg.tag) + " support");
  PowerSeries h(cfg.tag, K);
  const MatrixSymbol u0d = cfg.u0.dagger();
  for (int k = 0; k <= K; ++k) {
    MatrixSymbol rhs;
    for (int j = 0; j <= k; ++j)
      for (int l = 0; l + j <= k; ++l) {
        const int n = k - j - l;
        MatrixSymbol uj = u.coeff(j);
        if (uj.is_zero()) continue;
        MatrixSymbol Hl = cfg.H.coeff(l);
        if (!Hl.is_zero()) rhs += scaled_term(cfg.tag, uj, Hl, n);
        if (l <= k - 1) {
          MatrixSymbol hl = h.coeff(l);
          if (!hl.is_zero()) rhs -= scaled_term(cfg.tag, hl, uj, n);
        }
      }
    h.set_coeff(k, rhs * u0d);
  }
  return h;
}

PowerSeries effective_hamiltonian(const ScalingConfig& cfg, int K, const PowerSeries& h) {
  PowerSeries r(cfg.tag, K);
  const MatrixSymbol piref = MatrixSymbol::pi_ref();
  for (int n = 0; n <= K; ++n) r.set_coeff(n, piref * h.coeff(n) * piref);
  return r;
}

AdiabaticChain build_chain(Scaling tag, int K) {
  ScalingConfig cfg = make_config(tag, K);
  PowerSeries pi = build_projection(cfg, K);
  PowerSeries u = build_unitary(cfg, K, pi);
  PowerSeries h = diagonalize_hamiltonian(cfg, K, u);
  PowerSeries heff = effective_hamiltonian(cfg, K, h);
  return {pi, u, h, heff};
}

nlohmann::json DefectReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["pass"] = pass;
  j["max_nonvanishing_order"] = max_nonvanishing;
  nlohmann::json res;
  for (const auto& [n, m] : residuals)
    if (!m.is_zero()) res[std::to_string(n)] = m.to_json();
  j["residuals"] = res;
  return j;
}

namespace {

DefectReport make_report(const std::string& kind, const PowerSeries& residual, int K) {
  DefectReport r;
  r.kind = kind;
  r.max_nonvanishing = -1;
  for (int n = 0; n <= K; ++n) {
    MatrixSymbol m = residual.coeff(n);
    r.residuals[n] = m;
    if (!m.is_zero()) r.max_nonvanishing = n;
  }
  r.pass = r.max_nonvanishing < 0;
  return r;
}

}  // namespace

std::vector<DefectReport> verify_defects(const ScalingConfig& cfg, const PowerSeries& pi,
                                         const PowerSeries& u, int K) {
  PowerSeries pk = pi.truncated(K);
  PowerSeries uk = u.truncated(K);
  PowerSeries H = cfg.H.truncated(K);

  PowerSeries proj = series_moyal(pk, pk) - pk;
  PowerSeries comm = series_moyal(H, pk) - series_moyal(pk, H);
  PowerSeries unit = series_moyal(uk, uk.dagger());
  unit.set_coeff(0, unit.coeff(0) - MatrixSymbol::identity());
  PowerSeries intw = series_moyal3(uk, pk, uk.dagger());
  intw.set_coeff(0, intw.coeff(0) - MatrixSymbol::pi_ref());

  return {make_report("projection", proj, K), make_report("commutation", comm, K),
          make_report("unitarity", unit, K), make_report("intertwining", intw, K)};
}

}  // namespace sapt

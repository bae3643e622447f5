#include "sapt/grid.hpp"

#include <cmath>
#include <complex>
#include <future>
#include <numeric>
#include <sstream>

namespace sapt {

namespace {

using Complex = std::complex<double>;
constexpr Complex kImag{0.0, 1.0};

double wavenumber(int n, int N, double L) {
  int shifted = n < N / 2 ? n : n - N;  // [-N/2, N/2)
  return 2.0 * M_PI * shifted / L;
}

Eigen::MatrixXcd dft_matrix(int N) {
  Eigen::MatrixXcd F(N, N);
  const double s = 1.0 / std::sqrt((double)N);
  for (int n = 0; n < N; ++n)
    for (int a = 0; a < N; ++a)
      F(n, a) = s * std::exp(-kImag * (2.0 * M_PI * n * a / N));
  return F;
}

/// kinetic momentum operator P1 = -i hbar d/dx - lambda A1(x) on the grid
Eigen::MatrixXcd kinetic_momentum(const Geometry& geo, Scaling s, double c) {
  const int N = geo.N;
  const double hbar = geo.hbar_eff(s, c), lambda = geo.coupling(s, c);
  Eigen::MatrixXcd F = dft_matrix(N);
  Eigen::VectorXcd mult(N);
  for (int n = 0; n < N; ++n) mult(n) = hbar * wavenumber(n, N, geo.L);
  Eigen::MatrixXcd P = F.adjoint() * mult.asDiagonal() * F;
  for (int a = 0; a < N; ++a)
    P(a, a) -= lambda * geo.fields.A1.value(a * geo.dx(), geo.L, 0);
  return P;
}

struct SpinorBlocks {
  // out(4a+r, 4b+s) += block(a,b) * weight(r,s)
  static void add(GridOperator& out, const Eigen::MatrixXcd& block,
                  const Eigen::Matrix4cd& weight) {
    const int N = (int)block.rows();
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s) {
        if (weight(r, s) == Complex(0.0, 0.0)) continue;
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b) out(4 * a + r, 4 * b + s) += weight(r, s) * block(a, b);
      }
  }
};

NumericBindings bindings_at(const Geometry& geo, double x, double xi1, double tau2, double tau3) {
  NumericBindings b;
  b.m = geo.m;
  b.eps = geo.eps;
  b.xi = {xi1, tau2, tau3};
  const double L = geo.L;
  const FieldSet* fields = &geo.fields;
  b.field = [fields, x, L](FieldKind kind, const std::array<int, 3>& deriv) {
    return fields->field_value(kind, deriv, x, L);
  };
  return b;
}

Eigen::Matrix4cd to_eigen(const MatrixSymbol::Complex4x4& m) {
  Eigen::Matrix4cd r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = m[i][j];
  return r;
}

/// Fourier-multiplier fast path: no field atoms, no transverse potentials,
/// no A1; the symbol is diagonal in the plane-wave basis.
GridOperator quantize_multiplier(const MatrixSymbol& sym, const Geometry& geo, Scaling s,
                                 double c) {
  const int N = geo.N;
  const double hbar = geo.hbar_eff(s, c);
  Eigen::MatrixXcd F = dft_matrix(N);
  std::vector<Eigen::Matrix4cd> vals(N);
  for (int n = 0; n < N; ++n) {
    NumericBindings b = bindings_at(geo, 0.0, hbar * wavenumber(n, N, geo.L), geo.k2, geo.k3);
    vals[n] = to_eigen(sym.eval(b));
  }
  GridOperator out = GridOperator::Zero(4 * N, 4 * N);
  for (int r = 0; r < 4; ++r)
    for (int sc = 0; sc < 4; ++sc) {
      bool all_zero = true;
      Eigen::VectorXcd diag(N);
      for (int n = 0; n < N; ++n) {
        diag(n) = vals[n](r, sc);
        if (diag(n) != Complex(0.0, 0.0)) all_zero = false;
      }
      if (all_zero) continue;
      Eigen::MatrixXcd block = F.adjoint() * diag.asDiagonal() * F;
      Eigen::Matrix4cd weight = Eigen::Matrix4cd::Zero();
      weight(r, sc) = 1.0;
      SpinorBlocks::add(out, block, weight);
    }
  return out;
}

/// Smooth momentum cutoff: symbols are not periodic across the zone boundary,
/// and the midpoint kernel would otherwise pick up O(1/N) interpolation
/// ringing everywhere. The taper is exactly 1 on |kappa| <= 0.75 kappa_max, so
/// band-limited states never see it.
double planck_taper(double r) {
  if (r <= 0.75) return 1.0;
  if (r >= 0.95) return 0.0;
  const double z = 0.2 / (r - 0.75) + 0.2 / (r - 0.95);
  return 1.0 / (1.0 + std::exp(-z));
}

/// Midpoint-kernel path for momentum-only symbols with tau-substituted
/// transverse momenta and the A1 line-integral phase.
GridOperator quantize_kernel(const MatrixSymbol& sym, const Geometry& geo, Scaling s, double c) {
  const int N = geo.N;
  const double hbar = geo.hbar_eff(s, c), lambda = geo.coupling(s, c);
  const double dx = geo.dx();
  const double kappa_max = M_PI * N / geo.L;

  // symbol samples S(mu, n) on the half grid x_mu = mu dx/2
  std::vector<std::vector<Eigen::Matrix4cd>> S(2 * N, std::vector<Eigen::Matrix4cd>(N));
  for (int mu = 0; mu < 2 * N; ++mu) {
    const double x = 0.5 * mu * dx;
    const double tau2 = geo.k2 - lambda * geo.fields.A2.value(x, geo.L, 0);
    const double tau3 = geo.k3 - lambda * geo.fields.A3.value(x, geo.L, 0);
    for (int n = 0; n < N; ++n) {
      const double kappa = wavenumber(n, N, geo.L);
      NumericBindings b = bindings_at(geo, x, hbar * kappa, tau2, tau3);
      const double w = planck_taper(std::abs(kappa) / kappa_max);
      S[mu][n] = w * to_eigen(sym.eval(b));
    }
  }
  // M(mu, d) = (1/N) sum_n S(mu,n) exp(i kappa_n d dx)
  std::vector<std::vector<Eigen::Matrix4cd>> M(2 * N, std::vector<Eigen::Matrix4cd>(N));
  std::vector<std::vector<Complex>> w(N, std::vector<Complex>(N));
  for (int n = 0; n < N; ++n)
    for (int d = 0; d < N; ++d)
      w[n][d] = std::exp(kImag * (wavenumber(n, N, geo.L) * d * dx)) / (double)N;
  for (int mu = 0; mu < 2 * N; ++mu)
    for (int d = 0; d < N; ++d) {
      Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
      for (int n = 0; n < N; ++n) acc += S[mu][n] * w[n][d];
      M[mu][d] = acc;
    }

  // A1 line-integral phase
  std::vector<Complex> phase(N);
  const bool has_a1 = geo.fields.A1.amp != 0.0;
  for (int a = 0; a < N; ++a) {
    double anti = has_a1 ? geo.fields.A1.antiderivative(a * dx, geo.L) : 0.0;
    phase[a] = std::exp(-kImag * (lambda / hbar) * anti);
  }

  GridOperator out = GridOperator::Zero(4 * N, 4 * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const int mu = a + b;  // midpoint index on the half grid
      const int d = ((a - b) % N + N) % N;
      const Complex ph = phase[a] * std::conj(phase[b]);
      const Eigen::Matrix4cd& blk = M[mu][d];
      for (int r = 0; r < 4; ++r)
        for (int sc = 0; sc < 4; ++sc) out(4 * a + r, 4 * b + sc) = ph * blk(r, sc);
    }
  return out;
}

/// Binomially symmetrized operator path for polynomial symbols:
/// Op(c_d(x) xi^d) = 2^-d sum_j binom(d,j) P^j c_d(x) P^{d-j}.
GridOperator quantize_polynomial(const MatrixSymbol& sym, const Geometry& geo, Scaling s,
                                 double c) {
  const int N = geo.N;
  const double lambda = geo.coupling(s, c);
  const double dx = geo.dx();

  // degree bound
  auto deg_opt = sym.xi_degree();
  if (!deg_opt) throw NonPolynomialSymbol("quantize: symbol is not polynomial in xi");
  const int dmax = *deg_opt;

  Eigen::MatrixXcd P = kinetic_momentum(geo, s, c);
  std::vector<Eigen::MatrixXcd> Ppow(dmax + 1);
  Ppow[0] = Eigen::MatrixXcd::Identity(N, N);
  for (int d = 1; d <= dmax; ++d) Ppow[d] = Ppow[d - 1] * P;

  // per-entry polynomial coefficients in xi_1 at every grid point
  GridOperator out = GridOperator::Zero(4 * N, 4 * N);
  for (int r = 0; r < 4; ++r)
    for (int sc = 0; sc < 4; ++sc) {
      const ScalarExpr& entry = sym.at(r, sc);
      if (entry.is_zero()) continue;
      // coeffs[d](a)
      std::vector<Eigen::VectorXcd> coeffs;
      for (int a = 0; a < N; ++a) {
        const double x = a * dx;
        const double tau2 = geo.k2 - lambda * geo.fields.A2.value(x, geo.L, 0);
        const double tau3 = geo.k3 - lambda * geo.fields.A3.value(x, geo.L, 0);
        NumericBindings b = bindings_at(geo, x, 0.0, tau2, tau3);
        auto poly = entry.xi1_poly(b);
        if (coeffs.size() < poly.size())
          coeffs.resize(poly.size(), Eigen::VectorXcd::Zero(N));
        for (size_t d = 0; d < poly.size(); ++d) coeffs[d](a) = poly[d];
      }
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(N, N);
      for (size_t d = 0; d < coeffs.size(); ++d) {
        if (coeffs[d].isZero(0.0)) continue;
        const double norm = std::pow(0.5, (double)d);
        for (size_t j = 0; j <= d; ++j) {
          const double w = norm * Rational::binomial((int)d, (int)j).to_double();
          block += w * (Ppow[j] * coeffs[d].asDiagonal() * Ppow[d - j]);
        }
      }
      Eigen::Matrix4cd weight = Eigen::Matrix4cd::Zero();
      weight(r, sc) = 1.0;
      SpinorBlocks::add(out, block, weight);
    }
  return out;
}

struct Eigh {
  Eigen::VectorXd w;
  Eigen::MatrixXcd V;
  explicit Eigh(const GridOperator& H) {
    Eigen::SelfAdjointEigenSolver<GridOperator> es(H);
    w = es.eigenvalues();
    V = es.eigenvectors();
  }
  GridState exp_apply(double t, const GridState& psi) const {
    Eigen::VectorXcd coef = V.adjoint() * psi;
    for (int i = 0; i < w.size(); ++i) coef(i) *= std::exp(-kImag * (t * w(i)));
    return V * coef;
  }
  /// spectral projection onto eigenvalues in [lo, hi]
  GridState band_project(double lo, double hi, const GridState& psi) const {
    Eigen::VectorXcd coef = V.adjoint() * psi;
    for (int i = 0; i < w.size(); ++i)
      if (w(i) < lo || w(i) > hi) coef(i) = 0.0;
    return V * coef;
  }
};

template <typename Fn>
std::vector<double> run_over_c(const std::vector<double>& c_list, Fn&& fn) {
  std::vector<std::future<double>> futs;
  futs.reserve(c_list.size());
  for (double c : c_list)
    futs.push_back(std::async(std::launch::async, [&fn, c] { return fn(c); }));
  std::vector<double> out;
  out.reserve(c_list.size());
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

ExperimentReport make_report(const std::string& kind, const Geometry& geo,
                             const std::vector<double>& c_list, const std::vector<double>& errs,
                             double t, int order, Scaling s, std::uint64_t seed) {
  ExperimentReport rep;
  rep.kind = kind;
  rep.geometry_hash = geo.hash();
  rep.seed = seed;
  std::vector<double> xs, ys;
  for (size_t i = 0; i < c_list.size(); ++i) {
    rep.rows.push_back({c_list[i], t, order, scaling_name(s), errs[i]});
    if (errs[i] > 0.0) {
      xs.push_back(c_list[i]);
      ys.push_back(errs[i]);
    }
  }
  if (xs.size() >= 2) {
    rep.fit = fit_loglog(xs, ys);
    rep.fit.slope = -rep.fit.slope;  // report decay order as positive
  }
  return rep;
}

}  // namespace

double Harmonic::value(double x, double L, int deriv) const {
  if (amp == 0.0) return 0.0;
  const double w = 2.0 * M_PI * k / L;
  const double arg = w * x + phase + (cosine ? 0.0 : -M_PI / 2.0);  // sin = cos shifted
  // d^n/dx^n cos(wx+p) = w^n cos(wx + p + n pi/2)
  return amp * std::pow(w, deriv) * std::cos(arg + deriv * M_PI / 2.0);
}

double Harmonic::antiderivative(double x, double L) const {
  if (amp == 0.0) return 0.0;
  const double w = 2.0 * M_PI * k / L;
  const double arg = w * x + phase + (cosine ? 0.0 : -M_PI / 2.0);
  return amp / w * std::sin(arg);
}

double FieldSet::field_value(FieldKind kind, const std::array<int, 3>& deriv, double x,
                             double L) const {
  // fields depend on x1 only: any transverse derivative vanishes
  if (deriv[1] != 0 || deriv[2] != 0) return 0.0;
  const int d = deriv[0];
  switch (kind) {
    case FieldKind::V: return V.value(x, L, d);
    case FieldKind::B12: return A2.value(x, L, d + 1);   // B3 = A2'
    case FieldKind::B13: return A3.value(x, L, d + 1);   // -B2 = A3'
    case FieldKind::B23: return 0.0;                     // B1 = 0
  }
  return 0.0;
}

FieldSet preset_fields(const std::string& name) {
  FieldSet f;
  if (name == "free") return f;
  if (name == "electric") {
    f.V = {0.5, 1, 0.0, false};  // sin(2 pi x / L)
    return f;
  }
  if (name == "magnetic") {
    f.A2 = {0.5, 1, 0.0, true};  // cos(2 pi x / L)
    return f;
  }
  if (name == "mixed") {
    f.V = {0.5, 1, 0.0, false};
    f.A2 = {0.5, 1, 0.0, true};
    return f;
  }
  throw std::invalid_argument("unknown field preset: " + name);
}

std::uint64_t Geometry::hash() const {
  std::ostringstream os;
  os << N << "|" << L << "|" << eps << "|" << m << "|" << k2 << "|" << k3 << "|" << preset << "|"
     << fields.V.amp << "," << fields.V.k << "," << fields.V.phase << "," << fields.V.cosine << "|"
     << fields.A1.amp << "," << fields.A1.k << "|" << fields.A2.amp << "," << fields.A2.k << "|"
     << fields.A3.amp << "," << fields.A3.k;
  // FNV-1a
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : os.str()) {
    h ^= (unsigned char)ch;
    h *= 1099511628211ull;
  }
  return h;
}

GridOperator quantize(const MatrixSymbol& sym, const Geometry& geo, Scaling s, double c) {
  if (geo.N <= 0 || (geo.N & (geo.N - 1)) != 0)
    throw std::invalid_argument("Geometry: N must be a power of two");
  const bool has_e = sym.has_energy_atoms();
  const bool has_fields = sym.has_field_atoms();
  if (has_e && has_fields)
    throw NonPolynomialSymbol("quantize: mixed x-dependent symbol with E-type atoms");
  if (!has_e && sym.xi_degree()) return quantize_polynomial(sym, geo, s, c);
  // momentum-only symbol with E atoms
  if (geo.fields.transverse_potentials_vanish() && geo.fields.A1.amp == 0.0)
    return quantize_multiplier(sym, geo, s, c);
  return quantize_kernel(sym, geo, s, c);
}

GridOperator quantize_midpoint_kernel(const MatrixSymbol& sym, const Geometry& geo, Scaling s,
                                      double c) {
  if (sym.has_energy_atoms() && sym.has_field_atoms())
    throw NonPolynomialSymbol("quantize: mixed x-dependent symbol with E-type atoms");
  return quantize_kernel(sym, geo, s, c);
}

GridOperator quantize_series(const PowerSeries& series, const Geometry& geo, double c,
                             int order) {
  GridOperator out = GridOperator::Zero(4 * geo.N, 4 * geo.N);
  for (const auto& [n, mat] : series.orders()) {
    if (n > order) continue;
    out += std::pow(c, -n) * quantize(mat, geo, series.tag(), c);
  }
  return out;
}

GridOperator dirac_hamiltonian(const Geometry& geo, Scaling s, double c) {
  ScalingConfig cfg = make_config(s, 2);
  return quantize_series(cfg.H, geo, c, 2);
}

GridState propagate(const GridOperator& H, double t, const GridState& psi) {
  if (t == 0.0) return psi;
  Eigh eig(H);
  return eig.exp_apply(t, psi);
}

GridOperator band_limit_projector(const Geometry& geo, double frac) {
  const int N = geo.N;
  const double kappa_max = M_PI * N / geo.L;
  Eigen::MatrixXcd F = dft_matrix(N);
  Eigen::VectorXcd mask(N);
  for (int n = 0; n < N; ++n)
    mask(n) = std::abs(wavenumber(n, N, geo.L)) <= frac * kappa_max ? 1.0 : 0.0;
  Eigen::MatrixXcd block = F.adjoint() * mask.asDiagonal() * F;
  GridOperator out = GridOperator::Zero(4 * N, 4 * N);
  SpinorBlocks::add(out, block, Eigen::Matrix4cd::Identity());
  return out;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = (int)x.size();
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::string ExperimentReport::csv() const {
  std::ostringstream os;
  os << "c,t,order,scaling,error\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%d,%s,%.12e\n", r.c, r.t, r.order,
                  r.scaling.c_str(), r.error);
    os << buf;
  }
  return os.str();
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"c", r.c}, {"t", r.t}, {"order", r.order}, {"scaling", r.scaling},
                  {"error", r.error}});
  j["rows"] = rs;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["geometry_hash"] = geometry_hash;
  j["seed"] = seed;
  return j;
}

GridState gaussian_state(const Geometry& geo, Scaling s, double c, const StateSpec& spec) {
  const int N = geo.N;
  const double hbar = geo.hbar_eff(s, c);
  const double x0 = spec.center_frac * geo.L;
  GridState psi = GridState::Zero(4 * N);
  for (int a = 0; a < N; ++a) {
    const double x = a * geo.dx();
    // smooth periodization over images
    double env = 0.0;
    for (int img = -2; img <= 2; ++img) {
      const double d = x - x0 + img * geo.L;
      env += std::exp(-d * d / (4.0 * spec.width * spec.width));
    }
    psi(4 * a + spec.spinor) = env * std::exp(kImag * (spec.k0 * x / hbar));
  }
  psi.normalize();
  return psi;
}

ExperimentReport error_scaling_experiment(int order, Scaling s, const std::vector<double>& c_list,
                                          double t, const StateSpec& psi0, const Geometry& geo,
                                          std::uint64_t seed) {
  const int sym_order = std::min(order, s == Scaling::sr ? 3 : 4);
  AdiabaticChain chain = build_chain(s, sym_order);

  auto errs = run_over_c(c_list, [&](double c) {
    GridOperator HD = dirac_hamiltonian(geo, s, c);
    GridOperator Pi = quantize_series(chain.pi, geo, c, order);
    GridOperator U = quantize_series(chain.u, geo, c, order);
    GridOperator Heff = quantize_series(chain.h_eff, geo, c, order);

    Eigh eig_hd(HD);
    GridState psi = gaussian_state(geo, s, c, psi0);
    psi = Pi * psi;
    if (s == Scaling::nr) {
      // energy cutoff 1_Lambda(H_D): keep >= 99% of ||Pi psi0||^2
      Eigen::VectorXcd coef = eig_hd.V.adjoint() * psi;
      std::vector<std::pair<double, double>> positive;  // (eigenvalue, weight)
      double total = 0.0;
      for (int i = 0; i < coef.size(); ++i) {
        const double wgt = std::norm(coef(i));
        total += wgt;
        if (eig_hd.w(i) >= 0.0) positive.push_back({eig_hd.w(i), wgt});
      }
      std::sort(positive.begin(), positive.end());
      double acc = 0.0, emax = 0.0;
      for (const auto& [ev, wgt] : positive) {
        acc += wgt;
        emax = ev;
        if (acc >= 0.99 * total) break;
      }
      psi = eig_hd.band_project(0.0, emax, psi);
    }
    const double nrm = psi.norm();
    if (nrm < 1e-14) return 0.0;
    psi /= nrm;

    GridState full = eig_hd.exp_apply(t, psi);
    Eigh eig_eff(Heff);
    GridState eff = U.adjoint() * eig_eff.exp_apply(t, U * psi);
    return (full - eff).norm();
  });
  return make_report("error_scaling", geo, c_list, errs, t, order, s, seed);
}

ExperimentReport spectral_residual_experiment(int k, Scaling s, const std::vector<double>& c_list,
                                              const Geometry& geo, std::uint64_t seed) {
  if (geo.N > 512)
    throw std::invalid_argument("spectral_residual_experiment: dense eigensolve needs N <= 512");
  const int sym_order = std::min(k, s == Scaling::sr ? 3 : 4);
  AdiabaticChain chain = build_chain(s, sym_order);

  auto errs = run_over_c(c_list, [&](double c) {
    GridOperator HD = dirac_hamiltonian(geo, s, c);
    Eigh eig(HD);
    // lowest electronic eigenpair: smallest positive eigenvalue
    int idx = -1;
    for (int i = 0; i < eig.w.size(); ++i)
      if (eig.w(i) > 0.0) { idx = i; break; }
    if (idx < 0) return 0.0;
    const double e0 = eig.w(idx);
    GridState Psi = eig.V.col(idx);

    GridOperator Pi = quantize_series(chain.pi, geo, c, k);
    GridOperator U = quantize_series(chain.u, geo, c, k);
    GridOperator Heff = quantize_series(chain.h_eff, geo, c, k);
    GridState v = U * (Pi * Psi);
    return (Heff * v - e0 * v).norm();
  });
  return make_report("spectral_residual", geo, c_list, errs, 0.0, k, s, seed);
}

ExperimentReport composition_oracle(const MatrixSymbol& f, const MatrixSymbol& g, int n_order,
                                    Scaling s, const std::vector<double>& c_list,
                                    const Geometry& geo, std::uint64_t seed) {
  std::vector<MatrixSymbol> terms;
  for (int j = 0; j <= n_order; ++j) terms.push_back(scaled_term(s, f, g, j));

  GridOperator P = band_limit_projector(geo);
  auto errs = run_over_c(c_list, [&](double c) {
    GridOperator A = quantize(f, geo, s, c) * quantize(g, geo, s, c);
    GridOperator B = GridOperator::Zero(4 * geo.N, 4 * geo.N);
    for (int j = 0; j <= n_order; ++j) {
      if (terms[j].is_zero()) continue;
      B += std::pow(c, -j) * quantize(terms[j], geo, s, c);
    }
    return (P * (A - B) * P).norm();  // Frobenius, inside the band limit
  });
  return make_report("composition_oracle", geo, c_list, errs, 0.0, n_order, s, seed);
}

double gauge_covariance_check(const Geometry& geo, const Harmonic& chi, const MatrixSymbol& sym,
                              Scaling s, double c) {
  Geometry shifted = geo;
  // A -> A + eps grad chi: only A1 changes for chi = chi(x1); represent the
  // derivative of the harmonic exactly as another harmonic
  Harmonic dchi = chi;
  if (chi.amp != 0.0) {
    dchi.amp = chi.amp * 2.0 * M_PI * chi.k / geo.L;
    dchi.cosine = !chi.cosine;
    if (chi.cosine) dchi.amp = -dchi.amp;  // d cos = -w sin
  }
  // single-harmonic A1 representation: supported when one of them vanishes
  if (geo.fields.A1.amp != 0.0 && dchi.amp != 0.0)
    throw std::invalid_argument("gauge_covariance_check: A1 and chi' both nonzero unsupported");
  if (dchi.amp != 0.0) {
    dchi.amp *= geo.eps;
    shifted.fields.A1 = dchi;
  }

  GridOperator base = quantize(sym, geo, s, c);
  GridOperator moved = quantize(sym, shifted, s, c);

  const double mu = geo.coupling(s, c) * geo.eps / geo.hbar_eff(s, c);
  Eigen::VectorXcd wdiag(4 * geo.N);
  for (int a = 0; a < geo.N; ++a) {
    const Complex ph = std::exp(kImag * (mu * chi.value(a * geo.dx(), geo.L, 0)));
    for (int r = 0; r < 4; ++r) wdiag(4 * a + r) = ph;
  }
  GridOperator conj = wdiag.asDiagonal() * base * wdiag.conjugate().asDiagonal();
  GridOperator P = band_limit_projector(geo);
  const double denom = (P * base * P).norm();
  const double dev = (P * (moved - conj) * P).norm();
  return denom > 0.0 ? dev / denom : dev;
}

}  // namespace sapt

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sapt/matrix_symbol.hpp"
#include "sapt/recursion.hpp"

namespace sapt {

struct NonPolynomialSymbol : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One periodic harmonic a * cos(2 pi k x / L + phase) (or sin); closed-form
/// derivatives to any order, so symbols can be sampled at half-grid points.
struct Harmonic {
  double amp = 0.0;
  int k = 1;
  double phase = 0.0;
  bool cosine = true;
  double value(double x, double L, int deriv = 0) const;
  /// antiderivative with zero mean (amp = 0 handled)
  double antiderivative(double x, double L) const;
};

/// Fields on the reduced geometry: everything depends on x1 only, transverse
/// B comes from A2, A3 via B3 = A2', B2 = -A3'; B1 = 0.
struct FieldSet {
  Harmonic V, A1, A2, A3;
  double field_value(FieldKind kind, const std::array<int, 3>& deriv, double x, double L) const;
  bool transverse_potentials_vanish() const { return A2.amp == 0.0 && A3.amp == 0.0; }
};

/// free | electric | magnetic | mixed
FieldSet preset_fields(const std::string& name);

struct Geometry {
  int N = 256;
  double L = 32.0;
  double eps = 1.0;
  double m = 1.0;
  double k2 = 0.0, k3 = 0.0;  // transverse momenta of the plane-wave ansatz
  FieldSet fields;
  std::string preset = "free";

  double dx() const { return L / N; }
  double hbar_eff(Scaling s, double c) const { return s == Scaling::sr ? eps / c : eps; }
  double coupling(Scaling s, double c) const { return s == Scaling::sr ? 1.0 / (c * c) : 1.0 / c; }
  std::uint64_t hash() const;
};

using GridOperator = Eigen::MatrixXcd;  // 4N x 4N, index = 4*a + spinor
using GridState = Eigen::VectorXcd;

/// Magnetic Weyl quantization of a matrix symbol on the reduced geometry.
/// Polynomial symbols go through binomially symmetrized powers of the kinetic
/// momentum; momentum-only symbols (E allowed) through the midpoint kernel
/// (or the Fourier multiplier fast path when no potentials interfere).
/// Symbols carrying both E-type atoms and field atoms are rejected.
GridOperator quantize(const MatrixSymbol& sym, const Geometry& geo, Scaling s, double c);

/// The explicit midpoint-kernel construction, usable for any symbol without
/// E/field mixing; kept public as the independent cross-check of the
/// symmetrized-product construction. Carries a smooth momentum taper, so the
/// two agree on band-limited states only.
GridOperator quantize_midpoint_kernel(const MatrixSymbol& sym, const Geometry& geo, Scaling s,
                                      double c);

/// sum_{j<=order} c^-j Op(series_j)
GridOperator quantize_series(const PowerSeries& series, const Geometry& geo, double c, int order);

GridOperator dirac_hamiltonian(const Geometry& geo, Scaling s, double c);

/// Projector onto the modes |kappa| <= frac * kappa_Nyquist (tensored with the
/// spinor identity). Operator identities of the continuum calculus hold on the
/// grid only away from the zone boundary, so the oracles measure inside it.
GridOperator band_limit_projector(const Geometry& geo, double frac = 0.5);

/// e^{-itH} psi via dense eigendecomposition.
GridState propagate(const GridOperator& H, double t, const GridState& psi);

struct SlopeFit {
  double slope = 0.0, intercept = 0.0, r_squared = 1.0;
};
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ExperimentRow {
  double c, t;
  int order;
  std::string scaling;
  double error;
};

struct ExperimentReport {
  std::string kind;
  std::vector<ExperimentRow> rows;
  SlopeFit fit;
  std::uint64_t geometry_hash = 0;
  std::uint64_t seed = 0;
  std::string csv() const;
  nlohmann::json to_json() const;
};

struct StateSpec {
  double width = 2.0;
  double center_frac = 0.5;  // center = center_frac * L
  double k0 = 0.0;           // momentum boost in symbol units
  int spinor = 0;
};

GridState gaussian_state(const Geometry& geo, Scaling s, double c, const StateSpec& spec);

/// || (e^{-itH_D} - U* e^{-itH_eff} U) Pi psi0 || per c, with the nr scaling
/// additionally band-limited by the spectral cutoff 1_Lambda(H_D).
ExperimentReport error_scaling_experiment(int order, Scaling s, const std::vector<double>& c_list,
                                          double t, const StateSpec& psi0, const Geometry& geo,
                                          std::uint64_t seed = 0);

/// Residual || (H_eff^(k) - E0) U^(k) Pi^(k) Psi || for the lowest electronic
/// eigenpair of H_D.
ExperimentReport spectral_residual_experiment(int k, Scaling s, const std::vector<double>& c_list,
                                              const Geometry& geo, std::uint64_t seed = 0);

/// || Op(f) Op(g) - Op(sum_{j<=N} c^-j (f#g)_j) ||_F per c.
ExperimentReport composition_oracle(const MatrixSymbol& f, const MatrixSymbol& g, int n_order,
                                    Scaling s, const std::vector<double>& c_list,
                                    const Geometry& geo, std::uint64_t seed = 0);

/// Relative deviation || Op^{A+eps grad chi}(sym) - W Op^A(sym) W* ||_F / ||Op^A||_F
/// with the building-block phase W = exp(i (lambda eps / hbar) chi).
double gauge_covariance_check(const Geometry& geo, const Harmonic& chi, const MatrixSymbol& sym,
                              Scaling s, double c);

}  // namespace sapt

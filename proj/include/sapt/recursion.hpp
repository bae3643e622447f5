#pragma once

#include <map>
#include <string>
#include <vector>

#include "sapt/moyal.hpp"

namespace sapt {

struct UnknownFixture : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything the order-by-order construction needs about one scaling: the
/// graded hamiltonian symbol, the leading projection/unitary pair, and the
/// inverse of (H0 - relevant band) on the complement block.
struct ScalingConfig {
  Scaling tag;
  int max_order;        // nr: 4, sr: 3
  PowerSeries H;        // truncation = working truncation
  MatrixSymbol pi0;
  MatrixSymbol u0;
  ScalarExpr gap_inverse;  // scalar factor, applied on the complement block
};

ScalingConfig make_config(Scaling tag, int truncation);

/// Superadiabatic projection symbol through order K.
PowerSeries build_projection(const ScalingConfig& cfg, int K);

/// Intertwining almost-unitary through order K; needs the projection to the
/// same order.
PowerSeries build_unitary(const ScalingConfig& cfg, int K, const PowerSeries& pi);

/// Diagonalized hamiltonian h with u # H = h # u through order K.
PowerSeries diagonalize_hamiltonian(const ScalingConfig& cfg, int K, const PowerSeries& u);

/// pi_ref h_n pi_ref per order.
PowerSeries effective_hamiltonian(const ScalingConfig& cfg, int K, const PowerSeries& h);

/// Convenience: the full chain at order K.
struct AdiabaticChain {
  PowerSeries pi, u, h, h_eff;
};
AdiabaticChain build_chain(Scaling tag, int K);

struct DefectReport {
  std::string kind;  // projection | commutation | unitarity | intertwining
  std::map<int, MatrixSymbol> residuals;
  int max_nonvanishing = -1;  // -1: clean
  bool pass = false;
  nlohmann::json to_json() const;
};

/// Recomputes the four defect series from scratch and reports the residuals
/// through order K.
std::vector<DefectReport> verify_defects(const ScalingConfig& cfg, const PowerSeries& pi,
                                         const PowerSeries& u, int K);

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

struct FixtureMismatch {
  int order, row, col;
  std::string expected, actual;
};

struct FixtureDiff {
  std::string name;
  bool pass = false;
  std::vector<FixtureMismatch> mismatches;
  nlohmann::json to_json() const;
};

/// Named reference series transcribed from the printed results.
const std::map<std::string, PowerSeries>& fixture_store();
std::string fixture_version();

FixtureDiff compare_fixture(const std::string& name, const PowerSeries& computed);

/// Which of the two printed third-order unitary variants the constructed
/// series matches, if either.
struct U3Adjudication {
  bool defects_pass = false;
  bool matches_prop = false;
  bool matches_appendix = false;
  std::string named_match;  // fixture name, or "none"
  std::string note;
  nlohmann::json to_json() const;
};
U3Adjudication adjudicate_u3();

// ---------------------------------------------------------------------------
// Taylor consistency between the scalings
// ---------------------------------------------------------------------------

/// Substitutes xi -> xi/c into a semi-relativistic series, expanding
/// E(xi/c) = m + xi^2/(2m c^2) - |xi|^4/(8 m^3 c^4) + ... within the ring,
/// and regrades the result as a 1/c series truncated at K.
PowerSeries substitute_xi_over_c(const PowerSeries& sr_series, int K);

struct TaylorReport {
  PowerSeries residual;       // nr - substituted sr
  bool zero_through(int n) const;
  nlohmann::json to_json() const;
};

/// Compares the substituted sr effective hamiltonian against the nr one at
/// truncation K (<= 4). With zero_fields the comparison reduces to the free
/// kinetic expansion.
TaylorReport taylor_compare_scalings(int K, bool zero_fields = false);

}  // namespace sapt

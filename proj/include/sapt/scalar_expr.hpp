#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sapt/rational.hpp"

namespace sapt {

/// Field atoms are the x-dependent generators of the coefficient ring: the
/// scalar potential V and the three independent components of the
/// antisymmetric field matrix B_{jk} (j<k). Vector components relate to the
/// matrix entries by B1 = B23, B2 = -B13, B3 = B12.
enum class FieldKind : int { V = 0, B12 = 1, B13 = 2, B23 = 3 };

std::string field_kind_name(FieldKind k);
FieldKind field_kind_from_name(const std::string& s);

struct FieldAtom {
  FieldKind kind;
  std::array<int, 3> deriv;  // x-derivative multi-index
  int pow;                   // > 0

  friend bool operator==(const FieldAtom& a, const FieldAtom& b) {
    return a.kind == b.kind && a.deriv == b.deriv && a.pow == b.pow;
  }
  friend bool operator<(const FieldAtom& a, const FieldAtom& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.deriv != b.deriv) return a.deriv < b.deriv;
    return a.pow < b.pow;
  }
};

/// One canonical monomial: rational coefficient, optional factor of i, and
/// powers of eps, m, xi_j, E = sqrt(m^2+xi^2), (E+m), N = (2E(E+m))^{-1/2},
/// times a sorted multiset of field atoms.
struct ScalarTerm {
  Rational coeff{0};
  int i_pow = 0;                      // 0 or 1 after canonicalization
  int eps_pow = 0;                    // >= 0
  int m_pow = 0;                      // any sign
  std::array<int, 3> xi_pows{0, 0, 0};
  int e_pow = 0;                      // <= 1 or negative after canonicalization
  int em_pow = 0;                     // <= 0 after canonicalization
  int r_pow = 0;                      // 0 or 1 after canonicalization
  std::vector<FieldAtom> fields;      // sorted, powers folded

  /// Everything except the coefficient, as an orderable key.
  auto key() const {
    return std::tuple(xi_pows, e_pow, em_pow, r_pow, fields, eps_pow, m_pow, i_pow);
  }

  friend bool operator==(const ScalarTerm& a, const ScalarTerm& b) {
    return a.coeff == b.coeff && a.key() == b.key();
  }
};

/// Numeric bindings for evaluating an expression at a phase-space point.
/// `field` must return the value of d^deriv(kind) at the current x.
struct NumericBindings {
  double m = 1.0;
  double eps = 1.0;
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  std::function<double(FieldKind, const std::array<int, 3>&)> field;
};

/// Canonical sum of ScalarTerm. All constructors and operations normalize:
///   i^2 -> -1, N^2 -> (1/2) E^-1 (E+m)^-1, E^2 -> m^2 + xi^2,
///   positive powers of (E+m) expanded binomially,
///   E^p (E+m)^-q eliminated via E = (E+m) - m,
///   mixed denominators split by partial fractions
///     E^-1 (E+m)^-1 = (1/m)(E^-1 - (E+m)^-1),
///   x3-derivatives of B12 eliminated through the Bianchi identity
///     d3 B12 = d2 B13 - d1 B23,
///   and full xi_1^2+xi_2^2+xi_3^2 triples over a common cofactor with a
///   negative E or (E+m) power folded back through E^2 - m^2.
/// Equality of canonical forms is plain structural equality.
class ScalarExpr {
public:
  ScalarExpr() = default;
  explicit ScalarExpr(std::vector<ScalarTerm> raw);

  // -- generators ------------------------------------------------------
  static ScalarExpr zero() { return ScalarExpr(); }
  static ScalarExpr one() { return rational(Rational(1)); }
  static ScalarExpr rational(const Rational& r);
  static ScalarExpr imag_unit();
  static ScalarExpr eps(int p = 1);
  static ScalarExpr mass(int p = 1);
  static ScalarExpr xi(int axis, int p = 1);  // axis in {1,2,3}
  static ScalarExpr energy(int p = 1);        // E^p
  static ScalarExpr energy_plus_m(int p = 1); // (E+m)^p
  static ScalarExpr inv_sqrt_2EEm();          // N
  static ScalarExpr field(FieldKind kind, std::array<int, 3> deriv = {0, 0, 0},
                          int pow = 1);

  // -- ring operations -------------------------------------------------
  ScalarExpr operator+(const ScalarExpr& o) const;
  ScalarExpr operator-(const ScalarExpr& o) const;
  ScalarExpr operator*(const ScalarExpr& o) const;
  ScalarExpr operator-() const;
  ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
  ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }
  ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }
  ScalarExpr scaled(const Rational& r) const;

  bool operator==(const ScalarExpr& o) const { return terms_ == o.terms_; }
  bool operator!=(const ScalarExpr& o) const { return !(*this == o); }
  bool is_zero() const { return terms_.empty(); }

  // -- calculus --------------------------------------------------------
  ScalarExpr d_xi(int axis) const;  // momentum derivative, axis in {1,2,3}
  ScalarExpr d_x(int axis) const;   // position derivative (field atoms only)
  ScalarExpr conj() const;          // i -> -i

  // -- structure queries -----------------------------------------------
  /// Total degree in xi, or nullopt when E/(E+m)/N atoms make it infinite.
  std::optional<int> xi_degree() const;
  bool has_energy_atoms() const;
  bool has_field_atoms() const;
  const std::vector<ScalarTerm>& terms() const { return terms_; }

  /// Returns the expression with all B (and optionally V) atoms set to zero.
  ScalarExpr with_zero_fields(bool zero_B = true, bool zero_V = true) const;

  // -- evaluation ------------------------------------------------------
  std::complex<double> eval(const NumericBindings& b) const;

  /// Coefficients of xi_1^d with xi_2, xi_3 and fields bound numerically.
  /// Throws std::domain_error if E/(E+m)/N atoms are present.
  std::vector<std::complex<double>> xi1_poly(const NumericBindings& b) const;

  // -- serialization ---------------------------------------------------
  nlohmann::json to_json() const;
  static ScalarExpr from_json(const nlohmann::json& j);
  std::string latex() const;
  std::string str() const { return latex(); }

private:
  std::vector<ScalarTerm> terms_;
  void normalize();
};

inline ScalarExpr operator*(const Rational& r, const ScalarExpr& e) { return e.scaled(r); }

}  // namespace sapt

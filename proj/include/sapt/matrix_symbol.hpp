#pragma once

#include <array>
#include <map>
#include <string>

#include "sapt/scalar_expr.hpp"

namespace sapt {

enum class Scaling { nr, sr };

inline std::string scaling_name(Scaling s) { return s == Scaling::nr ? "nr" : "sr"; }
inline Scaling scaling_from_name(const std::string& s) {
  if (s == "nr") return Scaling::nr;
  if (s == "sr") return Scaling::sr;
  throw std::invalid_argument("unknown scaling: " + s);
}

/// 4x4 matrix with ScalarExpr entries; the value type for all phase-space
/// symbols. Entries are canonical, so equality is entrywise equality.
class MatrixSymbol {
public:
  MatrixSymbol() = default;  // zero matrix

  ScalarExpr& at(int r, int c) { return e_[r * 4 + c]; }
  const ScalarExpr& at(int r, int c) const { return e_[r * 4 + c]; }

  static MatrixSymbol zero() { return MatrixSymbol(); }
  static MatrixSymbol identity();
  static MatrixSymbol scalar(const ScalarExpr& s);        // s * id
  static MatrixSymbol beta();
  static MatrixSymbol alpha(int j);                       // j in {1,2,3}
  static MatrixSymbol sigma_big(int j);                   // Sigma_j = diag(sigma_j, sigma_j)
  static MatrixSymbol pi_ref();                           // diag(1,1,0,0)
  static MatrixSymbol pauli_upper(int j);                 // sigma_j on the electronic block
  static MatrixSymbol xi_dot_alpha();
  static MatrixSymbol b_dot_sigma();                      // B.Sigma with B1=B23, B2=-B13, B3=B12
  static MatrixSymbol grad_v_dot_alpha();                 // sum_j (d_j V) alpha_j
  static MatrixSymbol grad_v_wedge_xi_dot_sigma();        // (grad V ^ xi) . Sigma
  static MatrixSymbol xi_squared();                       // (xi.xi) * id
  static MatrixSymbol laplace_v();                        // (Delta V) * id

  MatrixSymbol operator+(const MatrixSymbol& o) const;
  MatrixSymbol operator-(const MatrixSymbol& o) const;
  MatrixSymbol operator*(const MatrixSymbol& o) const;  // matrix product
  MatrixSymbol operator-() const;
  MatrixSymbol& operator+=(const MatrixSymbol& o) { return *this = *this + o; }
  MatrixSymbol& operator-=(const MatrixSymbol& o) { return *this = *this - o; }
  MatrixSymbol scaled(const ScalarExpr& s) const;
  MatrixSymbol scaled(const Rational& r) const;

  bool operator==(const MatrixSymbol& o) const { return e_ == o.e_; }
  bool operator!=(const MatrixSymbol& o) const { return !(*this == o); }
  bool is_zero() const;

  MatrixSymbol dagger() const;  // conjugate transpose
  MatrixSymbol d_xi(int axis) const;
  MatrixSymbol d_x(int axis) const;

  /// Block-diagonal part w.r.t. a projection p: p a p + (1-p) a (1-p).
  MatrixSymbol block_diag(const MatrixSymbol& p = pi_ref()) const;
  MatrixSymbol block_offdiag(const MatrixSymbol& p = pi_ref()) const;

  MatrixSymbol with_zero_fields(bool zero_B = true, bool zero_V = true) const;

  std::optional<int> xi_degree() const;
  bool has_energy_atoms() const;
  bool has_field_atoms() const;

  using Complex4x4 = std::array<std::array<std::complex<double>, 4>, 4>;
  Complex4x4 eval(const NumericBindings& b) const;

  nlohmann::json to_json() const;
  static MatrixSymbol from_json(const nlohmann::json& j);
  std::string latex() const;

private:
  std::array<ScalarExpr, 16> e_;
};

MatrixSymbol commutator(const MatrixSymbol& a, const MatrixSymbol& b);
MatrixSymbol anticommutator(const MatrixSymbol& a, const MatrixSymbol& b);

/// Truncated formal series in 1/c with MatrixSymbol coefficients. Orders
/// above the truncation are absent; an absent order is the zero matrix.
class PowerSeries {
public:
  PowerSeries(Scaling tag, int truncation) : tag_(tag), k_(truncation) {}

  Scaling tag() const { return tag_; }
  int truncation() const { return k_; }

  MatrixSymbol coeff(int n) const {
    auto it = orders_.find(n);
    return it == orders_.end() ? MatrixSymbol::zero() : it->second;
  }
  void set_coeff(int n, const MatrixSymbol& m);
  const std::map<int, MatrixSymbol>& orders() const { return orders_; }

  PowerSeries operator+(const PowerSeries& o) const;
  PowerSeries operator-(const PowerSeries& o) const;
  PowerSeries& operator+=(const PowerSeries& o) { return *this = *this + o; }

  /// Pointwise (non-Moyal) graded product: order-n coefficient is
  /// sum_{j+l=n} a_j b_l.
  PowerSeries mul_pointwise(const PowerSeries& o) const;

  PowerSeries dagger() const;
  PowerSeries truncated(int new_k) const;
  PowerSeries with_zero_fields(bool zero_B = true, bool zero_V = true) const;

  bool operator==(const PowerSeries& o) const;
  bool is_zero() const;

  nlohmann::json to_json() const;
  static PowerSeries from_json(const nlohmann::json& j);
  std::string latex() const;

private:
  Scaling tag_;
  int k_;
  std::map<int, MatrixSymbol> orders_;
};

}  // namespace sapt

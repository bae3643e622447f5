#include "sapt/matrix_symbol.hpp"

#include <sstream>
#include <stdexcept>

namespace sapt {

namespace {
const ScalarExpr kOne = ScalarExpr::one();
const ScalarExpr kI = ScalarExpr::imag_unit();
}  // namespace

MatrixSymbol MatrixSymbol::identity() {
  MatrixSymbol m;
  for (int k = 0; k < 4; ++k) m.at(k, k) = kOne;
  return m;
}

MatrixSymbol MatrixSymbol::scalar(const ScalarExpr& s) {
  MatrixSymbol m;
  for (int k = 0; k < 4; ++k) m.at(k, k) = s;
  return m;
}

MatrixSymbol MatrixSymbol::beta() {
  MatrixSymbol m;
  m.at(0, 0) = kOne;
  m.at(1, 1) = kOne;
  m.at(2, 2) = -kOne;
  m.at(3, 3) = -kOne;
  return m;
}

namespace {
// Pauli sigma_j as 2x2 ScalarExpr blocks, written into (r0, c0) offsets.
void put_sigma(MatrixSymbol& m, int j, int r0, int c0, const ScalarExpr& scale) {
  switch (j) {
    case 1:
      m.at(r0 + 0, c0 + 1) += scale;
      m.at(r0 + 1, c0 + 0) += scale;
      break;
    case 2:
      m.at(r0 + 0, c0 + 1) += -(kI * scale);
      m.at(r0 + 1, c0 + 0) += kI * scale;
      break;
    case 3:
      m.at(r0 + 0, c0 + 0) += scale;
      m.at(r0 + 1, c0 + 1) += -scale;
      break;
    default:
      throw std::invalid_argument("sigma index");
  }
}
}  // namespace

MatrixSymbol MatrixSymbol::alpha(int j) {
  MatrixSymbol m;
  put_sigma(m, j, 0, 2, kOne);
  put_sigma(m, j, 2, 0, kOne);
  return m;
}

MatrixSymbol MatrixSymbol::sigma_big(int j) {
  MatrixSymbol m;
  put_sigma(m, j, 0, 0, kOne);
  put_sigma(m, j, 2, 2, kOne);
  return m;
}

MatrixSymbol MatrixSymbol::pi_ref() {
  MatrixSymbol m;
  m.at(0, 0) = kOne;
  m.at(1, 1) = kOne;
  return m;
}

MatrixSymbol MatrixSymbol::pauli_upper(int j) {
  MatrixSymbol m;
  put_sigma(m, j, 0, 0, kOne);
  return m;
}

MatrixSymbol MatrixSymbol::xi_dot_alpha() {
  MatrixSymbol m;
  for (int j = 1; j <= 3; ++j) m += alpha(j).scaled(ScalarExpr::xi(j));
  return m;
}

MatrixSymbol MatrixSymbol::b_dot_sigma() {
  // B1 = B23, B2 = -B13, B3 = B12
  MatrixSymbol m;
  m += sigma_big(1).scaled(ScalarExpr::field(FieldKind::B23));
  m -= sigma_big(2).scaled(ScalarExpr::field(FieldKind::B13));
  m += sigma_big(3).scaled(ScalarExpr::field(FieldKind::B12));
  return m;
}

MatrixSymbol MatrixSymbol::grad_v_dot_alpha() {
  MatrixSymbol m;
  for (int j = 1; j <= 3; ++j) {
    std::array<int, 3> d{0, 0, 0};
    d[j - 1] = 1;
    m += alpha(j).scaled(ScalarExpr::field(FieldKind::V, d));
  }
  return m;
}

MatrixSymbol MatrixSymbol::grad_v_wedge_xi_dot_sigma() {
  auto dv = [](int j) {
    std::array<int, 3> d{0, 0, 0};
    d[j - 1] = 1;
    return ScalarExpr::field(FieldKind::V, d);
  };
  MatrixSymbol m;
  m += sigma_big(1).scaled(dv(2) * ScalarExpr::xi(3) - dv(3) * ScalarExpr::xi(2));
  m += sigma_big(2).scaled(dv(3) * ScalarExpr::xi(1) - dv(1) * ScalarExpr::xi(3));
  m += sigma_big(3).scaled(dv(1) * ScalarExpr::xi(2) - dv(2) * ScalarExpr::xi(1));
  return m;
}

MatrixSymbol MatrixSymbol::xi_squared() {
  ScalarExpr s;
  for (int j = 1; j <= 3; ++j) s += ScalarExpr::xi(j, 2);
  return scalar(s);
}

MatrixSymbol MatrixSymbol::laplace_v() {
  ScalarExpr s;
  for (int j = 0; j < 3; ++j) {
    std::array<int, 3> d{0, 0, 0};
    d[j] = 2;
    s += ScalarExpr::field(FieldKind::V, d);
  }
  return scalar(s);
}

MatrixSymbol MatrixSymbol::operator+(const MatrixSymbol& o) const {
  MatrixSymbol m;
  for (int k = 0; k < 16; ++k) m.e_[k] = e_[k] + o.e_[k];
  return m;
}

MatrixSymbol MatrixSymbol::operator-(const MatrixSymbol& o) const {
  MatrixSymbol m;
  for (int k = 0; k < 16; ++k) m.e_[k] = e_[k] - o.e_[k];
  return m;
}

MatrixSymbol MatrixSymbol::operator-() const {
  MatrixSymbol m;
  for (int k = 0; k < 16; ++k) m.e_[k] = -e_[k];
  return m;
}

MatrixSymbol MatrixSymbol::operator*(const MatrixSymbol& o) const {
  MatrixSymbol m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      ScalarExpr s;
      for (int k = 0; k < 4; ++k) {
        if (at(r, k).is_zero() || o.at(k, c).is_zero()) continue;
        s += at(r, k) * o.at(k, c);
      }
      m.at(r, c) = std::move(s);
    }
  return m;
}

MatrixSymbol MatrixSymbol::scaled(const ScalarExpr& s) const {
  MatrixSymbol m;
  if (s.is_zero()) return m;
  for (int k = 0; k < 16; ++k)
    if (!e_[k].is_zero()) m.e_[k] = e_[k] * s;
  return m;
}

MatrixSymbol MatrixSymbol::scaled(const Rational& r) const {
  MatrixSymbol m;
  for (int k = 0; k < 16; ++k) m.e_[k] = e_[k].scaled(r);
  return m;
}

bool MatrixSymbol::is_zero() const {
  for (const auto& s : e_)
    if (!s.is_zero()) return false;
  return true;
}

MatrixSymbol MatrixSymbol::dagger() const {
  MatrixSymbol m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m.at(r, c) = at(c, r).conj();
  return m;
}

MatrixSymbol MatrixSymbol::d_xi(int axis) const {
  MatrixSymbol m;
  for (int k = 0; k < 16; ++k) m.e_[k] = e_[k].d_xi(axis);
  return m;
}

MatrixSymbol MatrixSymbol::d_x(int axis) const {
  MatrixSymbol m;
  for (int k = 0; k < 16; ++k) m.e_[k] = e_[k].d_x(axis);
  return m;
}

MatrixSymbol MatrixSymbol::block_diag(const MatrixSymbol& p) const {
  MatrixSymbol q = identity() - p;
  return p * (*this) * p + q * (*this) * q;
}

MatrixSymbol MatrixSymbol::block_offdiag(const MatrixSymbol& p) const {
  return *this - block_diag(p);
}

MatrixSymbol MatrixSymbol::with_zero_fields(bool zero_B, bool zero_V) const {
  MatrixSymbol m;
  for (int k = 0; k < 16; ++k) m.e_[k] = e_[k].with_zero_fields(zero_B, zero_V);
  return m;
}

std::optional<int> MatrixSymbol::xi_degree() const {
  int deg = 0;
  for (const auto& s : e_) {
    auto d = s.xi_degree();
    if (!d) return std::nullopt;
    deg = std::max(deg, *d);
  }
  return deg;
}

bool MatrixSymbol::has_energy_atoms() const {
  for (const auto& s : e_)
    if (s.has_energy_atoms()) return true;
  return false;
}

bool MatrixSymbol::has_field_atoms() const {
  for (const auto& s : e_)
    if (s.has_field_atoms()) return true;
  return false;
}

MatrixSymbol::Complex4x4 MatrixSymbol::eval(const NumericBindings& b) const {
  Complex4x4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[r][c] = at(r, c).eval(b);
  return m;
}

nlohmann::json MatrixSymbol::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back(at(r, c).to_json());
    rows.push_back(row);
  }
  return rows;
}

MatrixSymbol MatrixSymbol::from_json(const nlohmann::json& j) {
  MatrixSymbol m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m.at(r, c) = ScalarExpr::from_json(j.at(r).at(c));
  return m;
}

std::string MatrixSymbol::latex() const {
  std::ostringstream os;
  os << "\\begin{pmatrix}\n";
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      os << at(r, c).latex();
      if (c < 3) os << " & ";
    }
    if (r < 3) os << " \\\\";
    os << "\n";
  }
  os << "\\end{pmatrix}";
  return os.str();
}

MatrixSymbol commutator(const MatrixSymbol& a, const MatrixSymbol& b) { return a * b - b * a; }
MatrixSymbol anticommutator(const MatrixSymbol& a, const MatrixSymbol& b) { return a * b + b * a; }

void PowerSeries::set_coeff(int n, const MatrixSymbol& m) {
  if (n < 0 || n > k_) throw std::out_of_range("PowerSeries order outside truncation");
  if (m.is_zero())
    orders_.erase(n);
  else
    orders_[n] = m;
}

PowerSeries PowerSeries::operator+(const PowerSeries& o) const {
  if (tag_ != o.tag_ || k_ != o.k_)
    throw std::invalid_argument("PowerSeries: scaling/truncation mismatch");
  PowerSeries r(tag_, k_);
  for (int n = 0; n <= k_; ++n) r.set_coeff(n, coeff(n) + o.coeff(n));
  return r;
}

PowerSeries PowerSeries::operator-(const PowerSeries& o) const {
  if (tag_ != o.tag_ || k_ != o.k_)
    throw std::invalid_argument("PowerSeries: scaling/truncation mismatch");
  PowerSeries r(tag_, k_);
  for (int n = 0; n <= k_; ++n) r.set_coeff(n, coeff(n) - o.coeff(n));
  return r;
}

PowerSeries PowerSeries::mul_pointwise(const PowerSeries& o) const {
  if (tag_ != o.tag_ || k_ != o.k_)
    throw std::invalid_argument("PowerSeries: scaling/truncation mismatch");
  PowerSeries r(tag_, k_);
  for (int n = 0; n <= k_; ++n) {
    MatrixSymbol sum;
    for (int j = 0; j <= n; ++j) {
      MatrixSymbol a = coeff(j), b = o.coeff(n - j);
      if (a.is_zero() || b.is_zero()) continue;
      sum += a * b;
    }
    r.set_coeff(n, sum);
  }
  return r;
}

PowerSeries PowerSeries::dagger() const {
  PowerSeries r(tag_, k_);
  for (const auto& [n, m] : orders_) r.set_coeff(n, m.dagger());
  return r;
}

PowerSeries PowerSeries::truncated(int new_k) const {
  PowerSeries r(tag_, new_k);
  for (const auto& [n, m] : orders_)
    if (n <= new_k) r.set_coeff(n, m);
  return r;
}

PowerSeries PowerSeries::with_zero_fields(bool zero_B, bool zero_V) const {
  PowerSeries r(tag_, k_);
  for (const auto& [n, m] : orders_) r.set_coeff(n, m.with_zero_fields(zero_B, zero_V));
  return r;
}

bool PowerSeries::operator==(const PowerSeries& o) const {
  if (tag_ != o.tag_ || k_ != o.k_) return false;
  for (int n = 0; n <= k_; ++n)
    if (!(coeff(n) == o.coeff(n))) return false;
  return true;
}

bool PowerSeries::is_zero() const {
  for (const auto& [n, m] : orders_)
    if (!m.is_zero()) return false;
  return true;
}

nlohmann::json PowerSeries::to_json() const {
  nlohmann::json j;
  j["scaling"] = scaling_name(tag_);
  j["truncation"] = k_;
  nlohmann::json ord;
  for (const auto& [n, m] : orders_) ord[std::to_string(n)] = m.to_json();
  j["orders"] = ord;
  return j;
}

PowerSeries PowerSeries::from_json(const nlohmann::json& j) {
  PowerSeries r(scaling_from_name(j.at("scaling").get<std::string>()),
                j.at("truncation").get<int>());
  for (const auto& [key, val] : j.at("orders").items())
    r.set_coeff(std::stoi(key), MatrixSymbol::from_json(val));
  return r;
}

std::string PowerSeries::latex() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, m] : orders_) {
    if (!first) os << "\n+\n";
    first = false;
    if (n == 0)
      os << m.latex();
    else
      os << "\\frac{1}{c^{" << n << "}}\n" << m.latex();
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace sapt

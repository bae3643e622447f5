#include "sapt/moyal.hpp"

#include <vector>

namespace sapt {

ScalarExpr b_matrix_entry(int l, int j) {
  if (l == j) return ScalarExpr::zero();
  bool flip = l > j;
  if (flip) std::swap(l, j);
  ScalarExpr e;
  if (l == 1 && j == 2)
    e = ScalarExpr::field(FieldKind::B12);
  else if (l == 1 && j == 3)
    e = ScalarExpr::field(FieldKind::B13);
  else
    e = ScalarExpr::field(FieldKind::B23);
  return flip ? -e : e;
}

namespace {

ScalarExpr d_x_b_entry(int axis, int l, int j) {
  return b_matrix_entry(l, j).d_x(axis);
}

/// (1/n!)(-i/2)^n as a ScalarExpr.
ScalarExpr weyl_prefactor(int n) {
  Rational mag = Rational(1) / (Rational::factorial(n) * Rational(1LL << n));
  switch (n % 4) {  // (-i)^n
    case 0: return ScalarExpr::rational(mag);
    case 1: return ScalarExpr::imag_unit().scaled(-mag);
    case 2: return ScalarExpr::rational(-mag);
    default: return ScalarExpr::imag_unit().scaled(mag);
  }
}

MatrixSymbol weyl_term_n0(const MatrixSymbol& f, const MatrixSymbol& g, int n) {
  struct Branch {
    MatrixSymbol F, G;
    Rational sign;
  };
  std::vector<Branch> branches{{f, g, Rational(1)}};
  for (int step = 0; step < n; ++step) {
    std::vector<Branch> next;
    for (const auto& br : branches) {
      for (int ax = 1; ax <= 3; ++ax) {
        {
          MatrixSymbol Fd = br.F.d_xi(ax);
          if (!Fd.is_zero()) {
            MatrixSymbol Gd = br.G.d_x(ax);
            if (!Gd.is_zero()) next.push_back({std::move(Fd), std::move(Gd), br.sign});
          }
        }
        {
          MatrixSymbol Fd = br.F.d_x(ax);
          if (!Fd.is_zero()) {
            MatrixSymbol Gd = br.G.d_xi(ax);
            if (!Gd.is_zero()) next.push_back({std::move(Fd), std::move(Gd), -br.sign});
          }
        }
      }
    }
    branches = std::move(next);
    if (branches.empty()) return MatrixSymbol::zero();
  }
  MatrixSymbol sum;
  for (const auto& br : branches) sum += (br.F * br.G).scaled(br.sign);
  return sum.scaled(weyl_prefactor(n));
}

MatrixSymbol magnetic_term_11(const MatrixSymbol& f, const MatrixSymbol& g) {
  MatrixSymbol sum;
  for (int l = 1; l <= 3; ++l)
    for (int j = 1; j <= 3; ++j) {
      if (l == j) continue;
      MatrixSymbol fd = f.d_xi(l);
      if (fd.is_zero()) continue;
      MatrixSymbol gd = g.d_xi(j);
      if (gd.is_zero()) continue;
      sum += (fd * gd).scaled(b_matrix_entry(l, j));
    }
  return sum.scaled(ScalarExpr::imag_unit().scaled(Rational(1, 2)));
}

MatrixSymbol magnetic_term_21(const MatrixSymbol& f, const MatrixSymbol& g) {
  MatrixSymbol sum;
  for (int j = 1; j <= 3; ++j)
    for (int k = 1; k <= 3; ++k)
      for (int l = 1; l <= 3; ++l) {
        if (l == k) continue;
        ScalarExpr dB = d_x_b_entry(j, l, k);
        // (1/3) d_xj B_lk ( dxi_l dxi_j f . dxi_k g - dxi_l f . dxi_j dxi_k g )
        MatrixSymbol t1 = (f.d_xi(l).d_xi(j) * g.d_xi(k)) - (f.d_xi(l) * g.d_xi(j).d_xi(k));
        sum += t1.scaled(dB.scaled(Rational(1, 3)));
        // - B_lk ( dxi_l dxi_j f . dxi_k dx_j g - dxi_l dx_j f . dxi_k dxi_j g )
        MatrixSymbol t2 =
            (f.d_xi(l).d_xi(j) * g.d_xi(k).d_x(j)) - (f.d_xi(l).d_x(j) * g.d_xi(k).d_xi(j));
        sum -= t2.scaled(b_matrix_entry(l, k));
      }
  return sum.scaled(Rational(1, 4));
}

MatrixSymbol magnetic_term_22(const MatrixSymbol& f, const MatrixSymbol& g) {
  MatrixSymbol sum;
  for (int l1 = 1; l1 <= 3; ++l1)
    for (int j1 = 1; j1 <= 3; ++j1) {
      if (l1 == j1) continue;
      for (int l2 = 1; l2 <= 3; ++l2)
        for (int j2 = 1; j2 <= 3; ++j2) {
          if (l2 == j2) continue;
          MatrixSymbol fd = f.d_xi(l1).d_xi(l2);
          if (fd.is_zero()) continue;
          MatrixSymbol gd = g.d_xi(j1).d_xi(j2);
          if (gd.is_zero()) continue;
          sum += (fd * gd).scaled(b_matrix_entry(l1, j1) * b_matrix_entry(l2, j2));
        }
    }
  return sum.scaled(Rational(-1, 8));
}

int total_xi_derivatives(int n, int k) { return n + k; }

}  // namespace

MatrixSymbol moyal_term(const MatrixSymbol& f, const MatrixSymbol& g, int n, int k) {
  if (n < 0 || k < 0) throw UnsupportedOrder("moyal_term: negative order");
  if (k == 0) return weyl_term_n0(f, g, n);
  if (n == 1 && k == 1) return magnetic_term_11(f, g);
  if (n == 2 && k == 1) return magnetic_term_21(f, g);
  if (n == 2 && k == 2) return magnetic_term_22(f, g);
  throw UnsupportedOrder("moyal_term: (n,k)=(" + std::to_string(n) + "," + std::to_string(k) +
                         ") not available");
}

MatrixSymbol nr_term(const MatrixSymbol& f, const MatrixSymbol& g, int j) {
  if (j < 0) throw UnsupportedOrder("nr_term: negative order");
  auto df = f.xi_degree();
  auto dg = g.xi_degree();
  const bool fx = f.has_field_atoms();
  const bool gx = g.has_field_atoms();

  int n_max;
  if (j == 0) {
    // The (n,0) bidifferential distributes n factors, each placing one xi
    // derivative on one argument and one x derivative on the other. A branch
    // class with a xi-derivatives on f and b on g survives only when the
    // paired x-derivatives can land on field atoms:
    //   a <= (g x-dependent ? deg_xi f : 0),  b <= (f x-dependent ? deg_xi g : 0).
    const int kInf = -1;
    const int A = gx ? (df ? *df : kInf) : 0;
    const int B = fx ? (dg ? *dg : kInf) : 0;
    if (A == kInf || B == kInf)
      throw NonTerminating("nr_term: expansion of the order-0 product does not terminate");
    n_max = A + B;
  } else {
    if (!(df && dg))
      throw UnsupportedOrder("nr_term: magnetic order " + std::to_string(j) +
                             " with unbounded xi degree needs terms beyond the table");
    n_max = *df + *dg - j;
  }

  MatrixSymbol sum;
  for (int n = j; n <= n_max; ++n) {
    if (df && dg && total_xi_derivatives(n, j) > *df + *dg) break;
    MatrixSymbol t = moyal_term(f, g, n, j);
    if (t.is_zero()) continue;
    sum += t.scaled(ScalarExpr::eps(n));
  }
  return sum;
}

MatrixSymbol sr_term(const MatrixSymbol& f, const MatrixSymbol& g, int n) {
  if (n < 0) throw UnsupportedOrder("sr_term: negative order");
  auto df = f.xi_degree();
  auto dg = g.xi_degree();
  MatrixSymbol sum;
  for (int k = 0; 3 * k <= n; ++k) {
    const int ne = n - 2 * k;
    if (ne < k) continue;  // two-parameter table has k <= n_eps
    if (df && dg && total_xi_derivatives(ne, k) > *df + *dg) continue;
    MatrixSymbol t = moyal_term(f, g, ne, k);
    if (t.is_zero()) continue;
    sum += t.scaled(ScalarExpr::eps(ne));
  }
  return sum;
}

MatrixSymbol scaled_term(Scaling tag, const MatrixSymbol& f, const MatrixSymbol& g, int j) {
  return tag == Scaling::nr ? nr_term(f, g, j) : sr_term(f, g, j);
}

PowerSeries series_moyal(const PowerSeries& a, const PowerSeries& b) {
  if (a.tag() != b.tag() || a.truncation() != b.truncation())
    throw std::invalid_argument("series_moyal: scaling/truncation mismatch");
  PowerSeries r(a.tag(), a.truncation());
  for (int n = 0; n <= a.truncation(); ++n) {
    MatrixSymbol sum;
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l + k <= n; ++l) {
        const int j = n - k - l;
        MatrixSymbol ak = a.coeff(k), bl = b.coeff(l);
        if (ak.is_zero() || bl.is_zero()) continue;
        sum += scaled_term(a.tag(), ak, bl, j);
      }
    r.set_coeff(n, sum);
  }
  return r;
}

PowerSeries series_moyal3(const PowerSeries& a, const PowerSeries& b, const PowerSeries& c) {
  return series_moyal(series_moyal(a, b), c);
}

}  // namespace sapt

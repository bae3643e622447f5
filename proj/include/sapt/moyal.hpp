#pragma once

#include <stdexcept>

#include "sapt/matrix_symbol.hpp"

namespace sapt {

struct UnsupportedOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonTerminating : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The (n,k) term of the two-parameter magnetic Weyl product expansion:
/// n counts powers of the semiclassical parameter, k powers of the field
/// coupling. k = 0 terms for any n are generated by exponentiating the
/// first-order bidifferential with coefficient (1/n!)(-i/2)^n; the magnetic
/// terms (1,1), (2,1), (2,2) are explicit formulas. Everything else throws
/// UnsupportedOrder.
MatrixSymbol moyal_term(const MatrixSymbol& f, const MatrixSymbol& g, int n, int k);

/// Order-j coefficient of the non-relativistic product: sum_{n>=j} eps^n (f#g)_{(n,j)}.
MatrixSymbol nr_term(const MatrixSymbol& f, const MatrixSymbol& g, int j);

/// Order-n coefficient of the semi-relativistic product:
/// sum_{3k<=n} eps^{n-2k} (f#g)_{(n-2k,k)}.
MatrixSymbol sr_term(const MatrixSymbol& f, const MatrixSymbol& g, int n);

MatrixSymbol scaled_term(Scaling tag, const MatrixSymbol& f, const MatrixSymbol& g, int j);

/// Graded Moyal product of two series with the same scaling and truncation.
PowerSeries series_moyal(const PowerSeries& a, const PowerSeries& b);

/// (a # b) # c evaluated left to right at the common truncation.
PowerSeries series_moyal3(const PowerSeries& a, const PowerSeries& b, const PowerSeries& c);

/// Antisymmetric field-matrix entry B_{lj} as a ScalarExpr (1-based indices).
ScalarExpr b_matrix_entry(int l, int j);

}  // namespace sapt

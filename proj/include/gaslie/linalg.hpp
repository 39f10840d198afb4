#pragma once

// Exact linear algebra over Q.

#include <optional>
#include <vector>

#include "gaslie/expr.hpp"

namespace gaslie {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major

struct RowEchelon {
  RationalMatrix rows;        // reduced, nonzero rows only
  std::vector<int> pivots;    // pivot column of each row
};

RowEchelon row_reduce(RationalMatrix m);
int rank(const RationalMatrix& m);

/// Coefficients c with sum_i c_i rows[i] == target, if target lies in the span.
/// `rows` must be linearly independent.
std::optional<RationalVector> solve_in_span(const RationalMatrix& rows, const RationalVector& target);

/// Basis of { x : m x = 0 }.
RationalMatrix nullspace(const RationalMatrix& m);

std::optional<RationalMatrix> inverse(const RationalMatrix& m);
Rational determinant(RationalMatrix m);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Inertia of a symmetric rational matrix, by congruence diagonalization.
Signature signature(RationalMatrix m);

}  // namespace gaslie

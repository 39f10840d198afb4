#pragma once

// Internal normal form: a Laurent polynomial over Q in "kernels".
//
// A kernel is a canonical Expr that is either atomic (Symbol, LogAbs, Sin,
// Cos, Sqrt, Atan2, Function) or a primitive multi-term polynomial (a Sum
// node) that only ever appears with negative exponent, i.e. as a
// denominator factor.

#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "expr_node.hpp"

namespace gaslie::detail {

using Factor = std::pair<Expr, int>;

struct Monomial {
  std::vector<Factor> factors;  // sorted by kernel, exponents nonzero
  int degree() const;
};

/// Graded lexicographic order.
int compare_monomials(const Monomial& a, const Monomial& b);
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return compare_monomials(a, b) < 0;
  }
};

using Terms = std::map<Monomial, Rational, MonomialLess>;

struct Poly {
  Terms terms;

  static Poly constant(const Rational& c);
  static Poly kernel(const Expr& k, int exponent = 1);
  bool is_zero() const { return terms.empty(); }
  bool is_constant(Rational* value = nullptr) const;
};

Poly to_poly(const Expr& e);
Expr from_poly(const Poly& p);

Poly normalize(Terms t);
Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, const Rational& c);
Poly invert(const Poly& p);
Poly power(const Poly& p, int n);
Poly derivative(const Poly& p, std::string_view var);

Poly ln_poly(const Poly& p);
Poly sin_poly(const Poly& p);
Poly cos_poly(const Poly& p);
Poly sqrt_poly(const Poly& p);
Poly atan2_poly(const Poly& y, const Poly& x);
Poly function_poly(const std::string& name, int order, const Poly& arg);

}  // namespace gaslie::detail

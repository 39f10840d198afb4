#pragma once

// Immutable symbolic expressions over exact rationals.
//
// An Expr is a shared, immutable tree. Operators build raw trees; call
// canonicalize() to obtain the normal form, in which sums and products are
// flattened and sorted, rational coefficients are folded, denominators are
// kept as products of primitive polynomial factors, and the relation
// sin^2 + cos^2 = 1 is applied as a rewriting rule (sin^2 -> 1 - cos^2).
//
// ln is always ln|.|; sqrt is the principal root on the positive branch.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gaslie {

using Rational = mpq_class;

enum class ExprKind : std::uint8_t {
  Constant,
  Symbol,
  Sum,
  Product,
  Power,
  LogAbs,
  Sin,
  Cos,
  Sqrt,
  Atan2,
  Function,
};

class Expr {
 public:
  Expr();
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr variable(std::string name);
  static Expr parameter(std::string name);
  /// k-th derivative of the opaque unary function `name`, applied to `arg`.
  static Expr function(std::string name, int order, Expr arg);

  ExprKind kind() const;
  const Rational& constant() const;
  const std::string& name() const;
  bool is_parameter() const;
  int exponent() const;
  int order() const;
  std::span<const Expr> args() const;

  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_zero() const;
  bool is_one() const;
  bool is_canonical() const;
  std::size_t hash() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  /// Structural equality (not mathematical equality; see equivalent()).
  friend bool operator==(const Expr& a, const Expr& b);

  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node* node() const { return node_.get(); }

 private:
  std::shared_ptr<const Node> node_;
};

/// Total order on expression trees; used for canonical sorting.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr pow(const Expr& base, int exponent);
Expr ln_abs(const Expr& arg);
Expr sin(const Expr& arg);
Expr cos(const Expr& arg);
Expr sqrt(const Expr& arg);
Expr atan2(const Expr& y, const Expr& x);
Expr sum(std::span<const Expr> terms);
Expr product(std::span<const Expr> factors);

// --- algebra -----------------------------------------------------------------

Expr canonicalize(const Expr& e);
Expr differentiate(const Expr& e, std::string_view var);
/// Replaces symbols by expressions (simultaneously) and canonicalizes.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);
/// Replaces symbols without canonicalizing; keeps sqrt/atan2 structure intact.
Expr replace(const Expr& e, const std::map<std::string, Expr>& bindings);
/// Mathematical equality of a and b decided by the canonical form of a - b.
bool equivalent(const Expr& a, const Expr& b);

std::set<std::string> free_symbols(const Expr& e);
std::set<std::string> free_variables(const Expr& e);
std::set<std::string> free_parameters(const Expr& e);
/// Names of opaque functions used, with their derivative orders.
std::set<std::pair<std::string, int>> free_functions(const Expr& e);

/// Exact value of an expression whose canonical form is a rational constant.
bool as_rational(const Expr& e, Rational* out);

// --- numeric evaluation ------------------------------------------------------

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string culprit)
      : std::runtime_error(what), culprit_(std::move(culprit)) {}
  const std::string& culprit() const { return culprit_; }

 private:
  std::string culprit_;
};

struct Assignment {
  std::map<std::string, double> values;
  std::map<std::pair<std::string, int>, std::function<double(double)>> functions;

  Assignment& set(const std::string& name, double v) {
    values[name] = v;
    return *this;
  }
  /// Binds f(x) = x^2 (and its derivatives), the sample state function.
  Assignment& bind_sample_state_function(const std::string& name = "f");
};

double eval(const Expr& e, const Assignment& a);

// --- zero testing ------------------------------------------------------------

enum class ZeroVerdict { SymbolicZero, NumericZero, NonZero };
const char* to_string(ZeroVerdict v);

struct DomainBox {
  std::map<std::string, std::pair<double, double>> intervals;
  DomainBox& set(const std::string& name, double lo, double hi) {
    intervals[name] = {lo, hi};
    return *this;
  }
};

struct ZeroTestOptions {
  int samples = 100;
  double tolerance = 1e-9;
  std::uint64_t seed = 20240917;
};

struct ZeroTest {
  ZeroVerdict verdict = ZeroVerdict::NonZero;
  double max_abs = 0.0;
  std::map<std::string, double> witness;
  double witness_value = 0.0;
  std::string error;  // set when every sample failed to evaluate
  explicit operator bool() const { return verdict != ZeroVerdict::NonZero; }
};

/// Symbolic-first zero test with a seeded numeric fallback on `box`.
/// Symbols not covered by `box` must be bound in `fixed`.
ZeroTest is_zero(const Expr& e, const DomainBox& box, const Assignment& fixed = {},
                 const ZeroTestOptions& opts = {});

// --- text forms --------------------------------------------------------------

/// Deterministic S-expression: (+ a b), (* 2 x), (^ t -1), (ln t), (fn f 1 rho).
/// Parameters are written with a leading '$'.
std::string to_sexpr(const Expr& e);
Expr parse_sexpr(std::string_view text);

/// Human-readable infix form.
std::string to_infix(const Expr& e);

struct SymbolTable {
  std::set<std::string> variables;
  std::set<std::string> parameters;
  std::set<std::string> functions;
};

class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Infix parser. `ln|e|` and `ln(e)` both denote ln|e|; `f''(x)` is the second
/// derivative of a declared opaque function.
Expr parse(std::string_view text, const SymbolTable& symbols);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace gaslie

template <>
struct std::hash<gaslie::Expr> {
  std::size_t operator()(const gaslie::Expr& e) const { return e.hash(); }
};

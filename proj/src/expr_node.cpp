#include "expr_node.hpp"

#include <ostream>

namespace gaslie {
namespace detail {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& v) {
  std::size_t h = std::hash<long>{}(mpz_get_si(v.get_num_mpz_t()));
  h = mix(h, std::hash<long>{}(mpz_get_si(v.get_den_mpz_t())));
  return mix(h, mpz_size(v.get_num_mpz_t()));
}

void finish(Expr::Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911ULL;
  h = mix(h, std::hash<std::string>{}(n.name));
  h = mix(h, static_cast<std::size_t>(n.integer) + (n.param ? 7u : 0u));
  if (n.kind == ExprKind::Constant) h = mix(h, hash_rational(n.value));
  for (const auto& a : n.args) h = mix(h, a.hash());
  n.hash = h;
}

}  // namespace

Expr make_node(ExprKind kind, std::vector<Expr> args, int integer, std::string name,
               bool canonical) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->integer = integer;
  n->name = std::move(name);
  n->canonical = canonical;
  finish(*n);
  return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
}

Expr make_constant(const Rational& v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = ExprKind::Constant;
  n->value = v;
  n->value.canonicalize();
  n->canonical = true;
  finish(*n);
  return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
}

Expr make_symbol(std::string name, bool param) {
  if (name.empty()) throw std::invalid_argument("empty symbol name");
  auto n = std::make_shared<Expr::Node>();
  n->kind = ExprKind::Symbol;
  n->name = std::move(name);
  n->param = param;
  n->canonical = true;
  finish(*n);
  return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
}

}  // namespace detail

namespace {
const Expr& zero_constant() {
  static const Expr z = detail::make_constant(Rational(0));
  return z;
}
}  // namespace

Expr::Expr() : Expr(zero_constant()) {}
Expr::Expr(int value) : Expr(detail::make_constant(Rational(value))) {}
Expr::Expr(long value) : Expr(detail::make_constant(Rational(value))) {}
Expr::Expr(const Rational& value) : Expr(detail::make_constant(value)) {}

Expr Expr::variable(std::string name) { return detail::make_symbol(std::move(name), false); }
Expr Expr::parameter(std::string name) { return detail::make_symbol(std::move(name), true); }
Expr Expr::function(std::string name, int order, Expr arg) {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  return detail::make_node(ExprKind::Function, {std::move(arg)}, order, std::move(name));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::constant() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
bool Expr::is_parameter() const { return node_->param; }
int Expr::exponent() const { return node_->integer; }
int Expr::order() const { return node_->integer; }
std::span<const Expr> Expr::args() const { return node_->args; }
bool Expr::is_zero() const { return kind() == ExprKind::Constant && sgn(node_->value) == 0; }
bool Expr::is_one() const { return kind() == ExprKind::Constant && node_->value == 1; }
bool Expr::is_canonical() const { return node_->canonical; }
std::size_t Expr::hash() const { return node_->hash; }

int compare(const Expr& a, const Expr& b) {
  const Expr::Node* x = a.node();
  const Expr::Node* y = b.node();
  if (x == y) return 0;
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  switch (x->kind) {
    case ExprKind::Constant:
      return cmp(x->value, y->value) < 0 ? -1 : (cmp(x->value, y->value) > 0 ? 1 : 0);
    case ExprKind::Symbol:
      if (int c = x->name.compare(y->name); c != 0) return c < 0 ? -1 : 1;
      if (x->param != y->param) return x->param ? 1 : -1;
      return 0;
    default:
      break;
  }
  if (x->kind == ExprKind::Function) {
    if (int c = x->name.compare(y->name); c != 0) return c < 0 ? -1 : 1;
  }
  if (x->integer != y->integer) return x->integer < y->integer ? -1 : 1;
  const std::size_t n = std::min(x->args.size(), y->args.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(x->args[i], y->args[i]); c != 0) return c;
  }
  if (x->args.size() != y->args.size()) return x->args.size() < y->args.size() ? -1 : 1;
  return 0;
}

bool operator==(const Expr& a, const Expr& b) {
  return a.node() == b.node() || (a.hash() == b.hash() && compare(a, b) == 0);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr(a.constant() + b.constant());
  return detail::make_node(ExprKind::Sum, {a, b});
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(Rational(-a.constant()));
  return detail::make_node(ExprKind::Product, {Expr(-1), a});
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_constant() && b.is_constant()) return Expr(a.constant() * b.constant());
  return detail::make_node(ExprKind::Product, {a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero constant");
  if (b.is_constant()) return a * Expr(Rational(1 / b.constant()));
  return a * pow(b, -1);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 1) return base;
  if (exponent == 0) return Expr(1);
  if (base.is_constant()) {
    if (sgn(base.constant()) == 0) {
      if (exponent < 0) throw std::domain_error("zero raised to a negative power");
      return Expr(0);
    }
    Rational r(1);
    Rational b = exponent > 0 ? base.constant() : Rational(1 / base.constant());
    for (int i = 0; i < std::abs(exponent); ++i) r *= b;
    return Expr(r);
  }
  return detail::make_node(ExprKind::Power, {base}, exponent);
}

Expr ln_abs(const Expr& arg) { return detail::make_node(ExprKind::LogAbs, {arg}); }
Expr sin(const Expr& arg) { return detail::make_node(ExprKind::Sin, {arg}); }
Expr cos(const Expr& arg) { return detail::make_node(ExprKind::Cos, {arg}); }
Expr sqrt(const Expr& arg) { return detail::make_node(ExprKind::Sqrt, {arg}); }
Expr atan2(const Expr& y, const Expr& x) { return detail::make_node(ExprKind::Atan2, {y, x}); }

Expr sum(std::span<const Expr> terms) {
  if (terms.empty()) return Expr(0);
  if (terms.size() == 1) return terms[0];
  return detail::make_node(ExprKind::Sum, {terms.begin(), terms.end()});
}

Expr product(std::span<const Expr> factors) {
  if (factors.empty()) return Expr(1);
  if (factors.size() == 1) return factors[0];
  return detail::make_node(ExprKind::Product, {factors.begin(), factors.end()});
}

namespace {
void collect_symbols(const Expr& e, std::set<std::string>& out, int which) {
  if (e.kind() == ExprKind::Symbol) {
    if (which == 0 || (which == 1 && !e.is_parameter()) || (which == 2 && e.is_parameter()))
      out.insert(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_symbols(a, out, which);
}
void collect_functions(const Expr& e, std::set<std::pair<std::string, int>>& out) {
  if (e.kind() == ExprKind::Function) out.emplace(e.name(), e.order());
  for (const auto& a : e.args()) collect_functions(a, out);
}
}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out, 0);
  return out;
}
std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out, 1);
  return out;
}
std::set<std::string> free_parameters(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out, 2);
  return out;
}
std::set<std::pair<std::string, int>> free_functions(const Expr& e) {
  std::set<std::pair<std::string, int>> out;
  collect_functions(e, out);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_infix(e); }

}  // namespace gaslie

#pragma once

#include "gaslie/expr.hpp"

namespace gaslie {

struct Expr::Node {
  ExprKind kind = ExprKind::Constant;
  bool param = false;
  // Set only on trees produced by the normal-form writer (and on leaves).
  bool canonical = false;
  int integer = 0;  // Power exponent or Function derivative order
  Rational value;
  std::string name;
  std::vector<Expr> args;
  std::size_t hash = 0;
};

namespace detail {

Expr make_node(ExprKind kind, std::vector<Expr> args, int integer = 0, std::string name = {},
               bool canonical = false);
Expr make_constant(const Rational& v);
Expr make_symbol(std::string name, bool param);

}  // namespace detail
}  // namespace gaslie

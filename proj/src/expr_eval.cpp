#include <cmath>
#include <limits>
#include <random>

#include "expr_node.hpp"
#include "normal_form.hpp"

namespace gaslie {

Expr canonicalize(const Expr& e) {
  if (e.is_canonical()) return e;
  return detail::from_poly(detail::to_poly(e));
}

Expr differentiate(const Expr& e, std::string_view var) {
  return detail::from_poly(detail::derivative(detail::to_poly(e), var));
}

namespace {

Expr substitute_raw(const Expr& e, const std::map<std::string, Expr>& bindings) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e;
    case ExprKind::Symbol: {
      auto it = bindings.find(e.name());
      return it == bindings.end() ? e : it->second;
    }
    default:
      break;
  }
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool same = true;
  for (const auto& a : e.args()) {
    args.push_back(substitute_raw(a, bindings));
    same = same && args.back() == a;
  }
  if (same) return e;
  return detail::make_node(e.kind(), std::move(args), e.node()->integer, e.name());
}

}  // namespace

Expr replace(const Expr& e, const std::map<std::string, Expr>& bindings) {
  return substitute_raw(e, bindings);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  return canonicalize(substitute_raw(e, bindings));
}

bool equivalent(const Expr& a, const Expr& b) {
  if (a == b) return true;
  return detail::sub(detail::to_poly(a), detail::to_poly(b)).is_zero();
}

bool as_rational(const Expr& e, Rational* out) {
  Rational v;
  if (!detail::to_poly(e).is_constant(&v)) return false;
  if (out) *out = v;
  return true;
}

// --- evaluation --------------------------------------------------------------

Assignment& Assignment::bind_sample_state_function(const std::string& name) {
  functions[{name, 0}] = [](double r) { return r * r; };
  functions[{name, 1}] = [](double r) { return 2.0 * r; };
  functions[{name, 2}] = [](double) { return 2.0; };
  for (int k = 3; k <= 8; ++k) functions[{name, k}] = [](double) { return 0.0; };
  return *this;
}

double eval(const Expr& e, const Assignment& a) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e.constant().get_d();
    case ExprKind::Symbol: {
      auto it = a.values.find(e.name());
      if (it == a.values.end()) throw EvalError("unbound symbol " + e.name(), e.name());
      return it->second;
    }
    case ExprKind::Sum: {
      double s = 0.0;
      for (const auto& t : e.args()) s += eval(t, a);
      return s;
    }
    case ExprKind::Product: {
      double p = 1.0;
      for (const auto& t : e.args()) p *= eval(t, a);
      return p;
    }
    case ExprKind::Power: {
      double b = eval(e.args()[0], a);
      if (b == 0.0 && e.exponent() < 0) throw EvalError("division by zero: " + to_infix(e.args()[0]) + " = 0", to_infix(e.args()[0]));
      return std::pow(b, e.exponent());
    }
    case ExprKind::LogAbs: {
      double v = eval(e.args()[0], a);
      if (v == 0.0) throw EvalError("ln|0|: " + to_infix(e.args()[0]) + " = 0", to_infix(e.args()[0]));
      return std::log(std::abs(v));
    }
    case ExprKind::Sin:
      return std::sin(eval(e.args()[0], a));
    case ExprKind::Cos:
      return std::cos(eval(e.args()[0], a));
    case ExprKind::Sqrt: {
      double v = eval(e.args()[0], a);
      if (v < 0.0) throw EvalError("sqrt of a negative value: " + to_infix(e.args()[0]), to_infix(e.args()[0]));
      return std::sqrt(v);
    }
    case ExprKind::Atan2:
      return std::atan2(eval(e.args()[0], a), eval(e.args()[1], a));
    case ExprKind::Function: {
      auto it = a.functions.find({e.name(), e.order()});
      if (it == a.functions.end()) {
        throw EvalError("unbound function " + e.name() + std::string(e.order(), '\''), e.name());
      }
      return it->second(eval(e.args()[0], a));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// --- zero testing ------------------------------------------------------------

const char* to_string(ZeroVerdict v) {
  switch (v) {
    case ZeroVerdict::SymbolicZero:
      return "symbolic-zero";
    case ZeroVerdict::NumericZero:
      return "numeric-zero";
    case ZeroVerdict::NonZero:
      return "nonzero";
  }
  return "?";
}

ZeroTest is_zero(const Expr& e, const DomainBox& box, const Assignment& fixed,
                 const ZeroTestOptions& opts) {
  ZeroTest out;
  Expr c = canonicalize(e);
  if (c.is_zero()) {
    out.verdict = ZeroVerdict::SymbolicZero;
    return out;
  }
  std::mt19937_64 rng(opts.seed);
  Assignment a = fixed;
  int evaluated = 0;
  for (int i = 0; i < opts.samples; ++i) {
    for (const auto& [name, range] : box.intervals) {
      std::uniform_real_distribution<double> dist(range.first, range.second);
      a.values[name] = dist(rng);
    }
    double v;
    try {
      v = eval(c, a);
    } catch (const EvalError& err) {
      out.error = err.what();
      continue;
    }
    ++evaluated;
    if (!std::isfinite(v) || std::abs(v) > out.max_abs) {
      out.max_abs = std::isfinite(v) ? std::abs(v) : std::numeric_limits<double>::infinity();
      out.witness = a.values;
      out.witness_value = v;
    }
  }
  if (evaluated == 0) {
    out.verdict = ZeroVerdict::NonZero;
    return out;
  }
  out.error.clear();
  out.verdict = out.max_abs <= opts.tolerance ? ZeroVerdict::NumericZero : ZeroVerdict::NonZero;
  return out;
}

}  // namespace gaslie

#include <cctype>
#include <sstream>

#include "expr_node.hpp"

namespace gaslie {
namespace {

std::string rational_text(const Rational& v) { return v.get_str(); }

bool parse_rational_token(std::string_view tok, Rational* out) {
  if (tok.empty()) return false;
  std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (i == tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
  for (std::size_t k = i; k < tok.size(); ++k) {
    char c = tok[k];
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/') return false;
  }
  try {
    Rational v(std::string(tok[0] == '+' ? tok.substr(1) : tok));
    v.canonicalize();
    if (v.get_den() == 0) return false;
    *out = v;
  } catch (const std::invalid_argument&) {
    return false;
  }
  return true;
}

// --- S-expressions -------------------------------------------------------------

void write_sexpr(const Expr& e, std::string& out) {
  auto list = [&](const char* head) {
    out += '(';
    out += head;
    for (const auto& a : e.args()) {
      out += ' ';
      write_sexpr(a, out);
    }
    out += ')';
  };
  switch (e.kind()) {
    case ExprKind::Constant:
      out += rational_text(e.constant());
      return;
    case ExprKind::Symbol:
      if (e.is_parameter()) out += '$';
      out += e.name();
      return;
    case ExprKind::Sum:
      return list("+");
    case ExprKind::Product:
      return list("*");
    case ExprKind::Power:
      out += "(^ ";
      write_sexpr(e.args()[0], out);
      out += ' ';
      out += std::to_string(e.exponent());
      out += ')';
      return;
    case ExprKind::LogAbs:
      return list("ln");
    case ExprKind::Sin:
      return list("sin");
    case ExprKind::Cos:
      return list("cos");
    case ExprKind::Sqrt:
      return list("sqrt");
    case ExprKind::Atan2:
      return list("atan2");
    case ExprKind::Function:
      out += "(fn " + e.name() + ' ' + std::to_string(e.order()) + ' ';
      write_sexpr(e.args()[0], out);
      out += ')';
      return;
  }
}

class SexprReader {
 public:
  explicit SexprReader(std::string_view text) : s_(text) {}

  Expr read_all() {
    Expr e = read();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("s-expression: " + msg + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string_view atom() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')')
      ++pos_;
    if (start == pos_) fail("expected atom");
    return s_.substr(start, pos_ - start);
  }

  int integer() {
    std::string_view tok = atom();
    Rational v;
    if (!parse_rational_token(tok, &v) || v.get_den() != 1 || !v.get_num().fits_sint_p())
      fail("expected integer");
    return static_cast<int>(v.get_num().get_si());
  }

  Expr read() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (s_[pos_] == ')') fail("unexpected ')'");
    if (s_[pos_] != '(') {
      std::string_view tok = atom();
      Rational v;
      if (parse_rational_token(tok, &v)) return Expr(v);
      if (tok[0] == '$') {
        if (tok.size() == 1) fail("empty parameter name");
        return Expr::parameter(std::string(tok.substr(1)));
      }
      return Expr::variable(std::string(tok));
    }
    ++pos_;
    std::string head(atom());
    std::vector<Expr> args;
    Expr result;
    if (head == "^") {
      Expr base = read();
      int exp = integer();
      result = detail::make_node(ExprKind::Power, {base}, exp);
    } else if (head == "fn") {
      std::string name(atom());
      int order = integer();
      result = Expr::function(name, order, read());
    } else {
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] != ')') {
        args.push_back(read());
        skip_ws();
      }
      auto arity = [&](std::size_t n) {
        if (args.size() != n) fail("wrong arity for " + head);
      };
      if (head == "+") {
        if (args.size() < 2) fail("sum needs two terms");
        result = detail::make_node(ExprKind::Sum, std::move(args));
      } else if (head == "*") {
        if (args.size() < 2) fail("product needs two factors");
        result = detail::make_node(ExprKind::Product, std::move(args));
      } else if (head == "ln") {
        arity(1);
        result = ln_abs(args[0]);
      } else if (head == "sin") {
        arity(1);
        result = sin(args[0]);
      } else if (head == "cos") {
        arity(1);
        result = cos(args[0]);
      } else if (head == "sqrt") {
        arity(1);
        result = sqrt(args[0]);
      } else if (head == "atan2") {
        arity(2);
        result = atan2(args[0], args[1]);
      } else {
        fail("unknown head " + head);
      }
    }
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
    ++pos_;
    return result;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// --- infix printing ------------------------------------------------------------

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string infix(const Expr& e, int* prec);

std::string wrap(const Expr& e, int min_prec) {
  int p;
  std::string s = infix(e, &p);
  return p < min_prec ? "(" + s + ")" : s;
}

bool negative_constant(const Expr& e) { return e.is_constant() && sgn(e.constant()) < 0; }

// Splits a term into sign and magnitude for printing "a - b".
bool split_negative(const Expr& t, Expr* magnitude) {
  if (negative_constant(t)) {
    *magnitude = Expr(Rational(-t.constant()));
    return true;
  }
  if (t.kind() == ExprKind::Product && negative_constant(t.args()[0])) {
    std::vector<Expr> f(t.args().begin(), t.args().end());
    Rational c = -f[0].constant();
    if (c == 1) {
      f.erase(f.begin());
    } else {
      f[0] = Expr(c);
    }
    *magnitude = f.size() == 1 ? f[0] : detail::make_node(ExprKind::Product, std::move(f));
    return true;
  }
  return false;
}

std::string product_text(const Expr& e) {
  std::vector<std::string> num, den;
  for (const auto& f : e.args()) {
    if (f.kind() == ExprKind::Power && f.exponent() < 0) {
      Expr inv = f.exponent() == -1 ? f.args()[0] : pow(f.args()[0], -f.exponent());
      den.push_back(wrap(inv, kPower));
    } else if (f.is_constant() && f.constant().get_den() != 1) {
      if (f.constant().get_num() != 1) num.push_back(f.constant().get_num().get_str());
      den.push_back(f.constant().get_den().get_str());
    } else {
      num.push_back(wrap(f, kProduct + 1));
    }
  }
  std::string s;
  if (num.empty()) s = "1";
  for (std::size_t i = 0; i < num.size(); ++i) s += (i ? "*" : "") + num[i];
  for (const auto& d : den) s += "/" + d;
  return s;
}

std::string infix(const Expr& e, int* prec) {
  *prec = kAtom;
  switch (e.kind()) {
    case ExprKind::Constant: {
      const Rational& v = e.constant();
      if (sgn(v) < 0) *prec = kUnary;
      if (v.get_den() != 1) *prec = std::min(*prec, static_cast<int>(kProduct));
      return rational_text(v);
    }
    case ExprKind::Symbol:
      return e.name();
    case ExprKind::Sum: {
      *prec = kSum;
      std::string s;
      bool first = true;
      for (const auto& t : e.args()) {
        Expr mag;
        if (split_negative(t, &mag)) {
          s += first ? "-" : " - ";
          s += wrap(mag, kProduct);
        } else {
          if (!first) s += " + ";
          s += wrap(t, kSum + 1);
        }
        first = false;
      }
      return s;
    }
    case ExprKind::Product: {
      Expr mag;
      if (split_negative(e, &mag)) {
        *prec = kUnary;
        return "-" + wrap(mag, kProduct);
      }
      *prec = kProduct;
      return product_text(e);
    }
    case ExprKind::Power: {
      if (e.exponent() < 0) {
        *prec = kProduct;
        Expr inv = e.exponent() == -1 ? e.args()[0] : pow(e.args()[0], -e.exponent());
        return "1/" + wrap(inv, kPower);
      }
      *prec = kPower;
      return wrap(e.args()[0], kAtom) + "^" + std::to_string(e.exponent());
    }
    case ExprKind::LogAbs:
      return "ln|" + wrap(e.args()[0], kSum) + "|";
    case ExprKind::Sin:
      return "sin(" + wrap(e.args()[0], kSum) + ")";
    case ExprKind::Cos:
      return "cos(" + wrap(e.args()[0], kSum) + ")";
    case ExprKind::Sqrt:
      return "sqrt(" + wrap(e.args()[0], kSum) + ")";
    case ExprKind::Atan2:
      return "atan2(" + wrap(e.args()[0], kSum) + ", " + wrap(e.args()[1], kSum) + ")";
    case ExprKind::Function:
      return e.name() + std::string(e.order(), '\'') + "(" + wrap(e.args()[0], kSum) + ")";
  }
  return "?";
}

// --- infix parsing -------------------------------------------------------------

class InfixParser {
 public:
  InfixParser(std::string_view text, const SymbolTable& symbols) : s_(text), sym_(symbols) {}

  Expr parse_all() {
    Expr e = expression();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << msg << " at column " << pos_ + 1 << " in \"" << s_ << "\"";
    throw ParseError(os.str());
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        Expr d = unary();
        if (d.is_zero()) fail("division by zero");
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  int signed_integer() {
    bool neg = false;
    bool paren = accept('(');
    if (accept('-')) neg = true;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer");
    int v = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (paren) expect(')');
    return neg ? -v : v;
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) {
      int e = signed_integer();
      if (base.is_zero() && e < 0) fail("zero raised to a negative power");
      return pow(base, e);
    }
    return base;
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    mpz_class den = 1;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      digits += std::string(s_.substr(fs, pos_ - fs));
      for (std::size_t i = fs; i < pos_; ++i) den *= 10;
    }
    if (digits.empty()) fail("malformed number");
    Rational v(mpz_class(digits), den);
    v.canonicalize();
    return Expr(v);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Expr call_argument() {
    expect('(');
    Expr a = expression();
    expect(')');
    return a;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') {
      fail(std::string("unexpected '") + c + "'");
    }
    std::size_t id_start = pos_;
    std::string id = identifier();
    int primes = 0;
    while (pos_ < s_.size() && s_[pos_] == '\'') {
      ++pos_;
      ++primes;
    }
    if (sym_.functions.count(id)) {
      return Expr::function(id, primes, call_argument());
    }
    if (primes) {
      pos_ = id_start;
      fail("primes on undeclared function '" + id + "'");
    }
    if (id == "ln") {
      if (accept('|')) {
        Expr a = expression();
        expect('|');
        return ln_abs(a);
      }
      return ln_abs(call_argument());
    }
    if (id == "sin") return sin(call_argument());
    if (id == "cos") return cos(call_argument());
    if (id == "sqrt") return sqrt(call_argument());
    if (id == "atan2") {
      expect('(');
      Expr y = expression();
      expect(',');
      Expr x = expression();
      expect(')');
      return atan2(y, x);
    }
    if (sym_.variables.count(id)) return Expr::variable(id);
    if (sym_.parameters.count(id)) return Expr::parameter(id);
    pos_ = id_start;
    fail("unknown identifier '" + id + "'");
  }

  std::string_view s_;
  const SymbolTable& sym_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_sexpr(const Expr& e) {
  std::string out;
  write_sexpr(e, out);
  return out;
}

Expr parse_sexpr(std::string_view text) { return SexprReader(text).read_all(); }

std::string to_infix(const Expr& e) {
  int p;
  return infix(e, &p);
}

Expr parse(std::string_view text, const SymbolTable& symbols) {
  return InfixParser(text, symbols).parse_all();
}

}  // namespace gaslie

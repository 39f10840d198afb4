#include <gtest/gtest.h>

#include <cmath>

#include "gaslie/expr.hpp"
#include "gaslie/numerics.hpp"

using namespace gaslie;

namespace {

Expr v(const char* n) { return Expr::variable(n); }
Expr p(const char* n) { return Expr::parameter(n); }

SymbolTable table() {
  SymbolTable s;
  s.variables = {"t", "x", "y", "rho"};
  s.parameters = {"rho0", "k0", "m0"};
  s.functions = {"f"};
  return s;
}

// Random trees over x, y, t that stay finite on [0.5, 2]^3.
Expr random_expr(Rng& rng, int depth) {
  static const char* vars[] = {"x", "y", "t"};
  auto pick = [&](int n) { return static_cast<int>(rng.next() % static_cast<std::uint64_t>(n)); };
  if (depth == 0 || pick(4) == 0) {
    if (pick(3) == 0) return Expr(Rational(pick(7) - 3, pick(3) + 1));
    return v(vars[pick(3)]);
  }
  switch (pick(8)) {
    case 0:
    case 1: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 3: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 4: return pow(random_expr(rng, depth - 1), pick(3) + 1);
    case 5: return sin(random_expr(rng, depth - 1));
    case 6: return cos(random_expr(rng, depth - 1));
    default: {
      Expr base = v(vars[pick(3)]) + Expr(pick(3) + 1);
      switch (pick(3)) {
        case 0: return random_expr(rng, depth - 1) / base;
        case 1: return ln_abs(base);
        default: return sqrt(base);
      }
    }
  }
}

Assignment random_point(Rng& rng) {
  Assignment a;
  for (const char* n : {"x", "y", "t"}) a.set(n, rng.uniform(0.5, 2.0));
  return a;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST(Expr, RationalsInLowestTerms) {
  Expr e(Rational(6, 4));
  Rational r;
  ASSERT_TRUE(as_rational(canonicalize(e), &r));
  EXPECT_EQ(r, Rational(3, 2));
}

TEST(Expr, SelfDifferenceIsZero) {
  Expr x = v("x");
  EXPECT_TRUE(canonicalize(x - x).is_zero());
  EXPECT_EQ(is_zero(x - x, DomainBox{}.set("x", 0.5, 2)).verdict, ZeroVerdict::SymbolicZero);
}

TEST(Expr, RingIdentityCancels) {
  Expr t = v("t"), k0 = p("k0"), m0 = p("m0"), rho0 = p("rho0");
  Expr e = (k0 * k0 + m0 * m0) * t / rho0 - k0 * k0 * t / rho0 - m0 * m0 * t / rho0;
  EXPECT_TRUE(canonicalize(e).is_zero());
}

TEST(Expr, PythagoreanRule) {
  Expr th = v("theta");
  EXPECT_TRUE(equivalent(pow(sin(th), 2) + pow(cos(th), 2), Expr(1)));
  EXPECT_TRUE(equivalent(pow(sin(th), 4) - pow(cos(th), 4), pow(sin(th), 2) - pow(cos(th), 2)));
}

TEST(Expr, DerivativeOfLogAbs) {
  Expr t = v("t");
  EXPECT_TRUE(equivalent(differentiate(ln_abs(t), "t"), Expr(1) / t));
}

TEST(Expr, OpaqueFunctionDerivatives) {
  Expr rho = v("rho"), t = v("t"), rho0 = p("rho0");
  EXPECT_EQ(canonicalize(differentiate(Expr::function("f", 0, rho), "rho")),
            canonicalize(Expr::function("f", 1, rho)));
  Expr lhs = differentiate(Expr::function("f", 0, rho0 / t), "t");
  Expr rhs = -(rho0 / pow(t, 2)) * Expr::function("f", 1, rho0 / t);
  EXPECT_TRUE(equivalent(lhs, rhs));
}

TEST(Expr, ParametersAreConstantsForVariables) {
  EXPECT_TRUE(canonicalize(differentiate(p("k0") * p("m0"), "t")).is_zero());
  EXPECT_TRUE(equivalent(differentiate(p("k0") * v("x"), "x"), p("k0")));
  // Differentiating by a parameter name is allowed (used for coefficient extraction).
  EXPECT_TRUE(equivalent(differentiate(p("k0") * p("m0"), "k0"), p("m0")));
}

TEST(Expr, EvalExamples) {
  EXPECT_DOUBLE_EQ(eval(Expr(1) / v("t"), Assignment{}.set("t", 2)), 0.5);
  EXPECT_DOUBLE_EQ(eval(v("P") - v("u"), Assignment{}.set("P", 3).set("u", 3)), 0.0);
  EXPECT_DOUBLE_EQ(eval(p("rho0") / v("t"), Assignment{}.set("rho0", 1).set("t", 4)), 0.25);
  EXPECT_NEAR(eval(ln_abs(v("t")), Assignment{}.set("t", -2)), std::log(2.0), 1e-15);
}

TEST(Expr, EvalErrorsNameTheCulprit) {
  try {
    eval(v("x") + v("y"), Assignment{}.set("x", 1));
    FAIL() << "expected EvalError";
  } catch (const EvalError& e) {
    EXPECT_EQ(e.culprit(), "y");
  }
  try {
    eval(Expr(1) / v("t"), Assignment{}.set("t", 0));
    FAIL() << "expected EvalError";
  } catch (const EvalError& e) {
    EXPECT_NE(std::string(e.what()).find("t"), std::string::npos);
  }
}

TEST(Expr, SampleStateFunction) {
  Assignment a;
  a.bind_sample_state_function().set("rho", 3);
  EXPECT_DOUBLE_EQ(eval(Expr::function("f", 0, v("rho")), a), 9.0);
  EXPECT_DOUBLE_EQ(eval(Expr::function("f", 1, v("rho")), a), 6.0);
  EXPECT_DOUBLE_EQ(eval(Expr::function("f", 2, v("rho")), a), 2.0);
}

TEST(Expr, ZeroTestVerdicts) {
  DomainBox box;
  box.set("P", 0.5, 2).set("u", 0.5, 2);
  auto nz = is_zero(v("P") - v("u"), box);
  EXPECT_EQ(nz.verdict, ZeroVerdict::NonZero);
  EXPECT_EQ(nz.witness.size(), 2u);
  EXPECT_GT(std::abs(nz.witness_value), 1e-9);
  // (Y + X4)(P - u) = 1 - 1
  EXPECT_EQ(is_zero(Expr(1) - Expr(1), box).verdict, ZeroVerdict::SymbolicZero);
}

TEST(Expr, ZeroTestIsDeterministic) {
  DomainBox box;
  box.set("x", 0.5, 2);
  auto a = is_zero(v("x") - 1, box, {}, ZeroTestOptions{100, 1e-9, 7});
  auto b = is_zero(v("x") - 1, box, {}, ZeroTestOptions{100, 1e-9, 7});
  EXPECT_EQ(a.witness, b.witness);
}

TEST(Expr, ParseForms) {
  auto s = table();
  EXPECT_TRUE(equivalent(parse("ln|t|", s), ln_abs(v("t"))));
  EXPECT_TRUE(equivalent(parse("ln(t)", s), ln_abs(v("t"))));
  EXPECT_TRUE(equivalent(parse("f''(rho)", s), Expr::function("f", 2, v("rho"))));
  EXPECT_TRUE(equivalent(parse("(k0*y + m0)/rho0", s), (p("k0") * v("y") + p("m0")) / p("rho0")));
  EXPECT_TRUE(parse("k0", s).is_parameter());
  EXPECT_THROW(parse("q + 1", s), ParseError);
  EXPECT_THROW(parse("x +", s), ParseError);
}

TEST(ExprProperty, CanonicalFormIsIdempotentAndValuePreserving) {
  Rng rng(11);
  for (int n = 0; n < 200; ++n) {
    Expr e = random_expr(rng, 4);
    Expr c = canonicalize(e);
    ASSERT_EQ(canonicalize(c), c) << to_infix(e);
    for (int k = 0; k < 5; ++k) {
      Assignment a = random_point(rng);
      ASSERT_LT(rel(eval(e, a), eval(c, a)), 1e-12) << to_infix(e);
    }
  }
}

TEST(ExprProperty, DifferentiationIsLinear) {
  Rng rng(12);
  for (int n = 0; n < 100; ++n) {
    Expr a = random_expr(rng, 3), b = random_expr(rng, 3);
    Expr lhs = differentiate(canonicalize(Expr(2) * a - Expr(Rational(3, 2)) * b), "x");
    Expr rhs = Expr(2) * differentiate(canonicalize(a), "x") - Expr(Rational(3, 2)) * differentiate(canonicalize(b), "x");
    ASSERT_TRUE(equivalent(lhs, rhs)) << to_infix(a) << " | " << to_infix(b);
  }
}

TEST(ExprProperty, ProductRule) {
  Rng rng(13);
  for (int n = 0; n < 50; ++n) {
    Expr a = canonicalize(random_expr(rng, 3)), b = canonicalize(random_expr(rng, 3));
    Expr lhs = differentiate(canonicalize(a * b), "y");
    Expr rhs = differentiate(a, "y") * b + a * differentiate(b, "y");
    for (int k = 0; k < 50; ++k) {
      Assignment pt = random_point(rng);
      ASSERT_LT(rel(eval(lhs, pt), eval(rhs, pt)), 1e-10) << to_infix(a) << " | " << to_infix(b);
    }
  }
}

TEST(ExprProperty, DerivativeMatchesFiniteDifferences) {
  Rng rng(14);
  const double h = 1e-5;
  for (int n = 0; n < 40; ++n) {
    Expr e = canonicalize(random_expr(rng, 3));
    Expr d = differentiate(e, "t");
    for (int k = 0; k < 20; ++k) {
      Assignment pt = random_point(rng);
      Assignment lo = pt, hi = pt;
      lo.values["t"] -= h;
      hi.values["t"] += h;
      double fd = (eval(e, hi) - eval(e, lo)) / (2 * h);
      double exact = eval(d, pt);
      ASSERT_LT(std::abs(fd - exact) / std::max(1.0, std::abs(exact)), 1e-6) << to_infix(e);
    }
  }
}

TEST(ExprProperty, TextFormsRoundTrip) {
  Rng rng(15);
  SymbolTable s;
  s.variables = {"x", "y", "t"};
  for (int n = 0; n < 100; ++n) {
    Expr c = canonicalize(random_expr(rng, 4));
    ASSERT_EQ(parse_sexpr(to_sexpr(c)), c) << to_sexpr(c);
    Expr back = parse(to_infix(c), s);
    Assignment pt = random_point(rng);
    ASSERT_LT(rel(eval(back, pt), eval(c, pt)), 1e-12) << to_infix(c);
  }
}

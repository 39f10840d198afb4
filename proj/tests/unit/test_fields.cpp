#include <gtest/gtest.h>

#include "gaslie/fields.hpp"

using namespace gaslie;

namespace {

Expr v(const char* n) { return Expr::variable(n); }

ExprVector combo(std::initializer_list<int> gens) {
  ExprVector c(kL12Dim, Expr(0));
  for (int g : gens) c[g] = Expr(1);
  return c;
}

}  // namespace

TEST(Fields, RotationInCartesianChart) {
  VectorField f = realize(7, chart_cartesian());
  EXPECT_EQ(f.components.size(), 4u);
  EXPECT_TRUE(equivalent(f.component("z"), v("y")));
  EXPECT_TRUE(equivalent(f.component("y"), -v("z")));
  EXPECT_TRUE(equivalent(f.component("w"), v("v")));
  EXPECT_TRUE(equivalent(f.component("v"), -v("w")));
}

TEST(Fields, PressureTranslationEverywhere) {
  for (const Chart& c : {chart_cartesian(), chart_cylindrical(), chart_spherical(), chart_shifted(Expr(1))}) {
    VectorField f = realize(0, c);
    ASSERT_EQ(f.components.size(), 1u) << c.key();
    EXPECT_TRUE(f.component("P").is_one()) << c.key();
  }
}

TEST(Fields, RotationIsAngleShiftInCylindricalChart) {
  VectorField f = realize(7, chart_cylindrical());
  ASSERT_EQ(f.components.size(), 1u) << to_string(f);
  EXPECT_TRUE(f.component("theta").is_one());
  EXPECT_TRUE(f.component("vartheta").is_zero());
}

TEST(Fields, ApplyExamples) {
  const Chart& d = chart_cartesian();
  EXPECT_TRUE(apply(realize(0, d), v("P") - v("u"), d).is_one());
  EXPECT_TRUE(equivalent(apply(realize(11, d), ln_abs(v("t")), d), Expr(1)));
  const Chart& s = chart_spherical();
  EXPECT_TRUE(apply(realize(combo({0, 11}), s), v("P") - ln_abs(v("t")), s).is_zero());
  EXPECT_THROW(apply(realize(1, chart_cylindrical()), v("y"), chart_cylindrical()), std::invalid_argument);
}

TEST(Fields, CommutatorExamples) {
  const Chart& d = chart_cartesian();
  VectorField c = vf_commutator(realize(4, d), realize(10, d), d);
  EXPECT_EQ(c, scale(realize(1, d), Expr(-1)));
  EXPECT_TRUE(is_zero(vf_commutator(realize(1, d), realize(2, d), d)));
  EXPECT_EQ(vf_commutator(realize(7, d), realize(8, d), d), scale(realize(9, d), Expr(-1)));
}

TEST(Fields, CommutatorsMatchTable) {
  const Chart& d = chart_cartesian();
  LieAlgebra l = l12_table();
  int pairs = 0;
  for (int i = 0; i < kL12Dim; ++i) {
    for (int j = i + 1; j < kL12Dim; ++j, ++pairs) {
      VectorField lhs = vf_commutator(realize(i, d), realize(j, d), d);
      VectorField rhs = realize(to_expr(l.basis_bracket(i, j)), d);
      EXPECT_EQ(lhs, rhs) << i << "," << j;
    }
  }
  EXPECT_EQ(pairs, 66);
}

TEST(Fields, Decompose) {
  for (int i = 0; i < kL12Dim; ++i) {
    auto c = decompose(realize(i, chart_cartesian()));
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, unit_vector(kL12Dim, i));
  }
}

TEST(Fields, TimeTranslationInShiftedChart) {
  Chart sh = chart_shifted(Expr(1));
  VectorField f = pushforward(realize(10, chart_cartesian()), sh);
  EXPECT_TRUE(f.component("t").is_one());
  EXPECT_FALSE(f.component("qbar").is_zero() && f.component("varthetabar").is_zero()) << to_string(f);
  EXPECT_TRUE(f.component("x").is_zero());
}

TEST(Fields, ChartsAreCoherent) {
  for (const Chart& c : {chart_cylindrical(), chart_spherical(), chart_shifted(Expr(0)), chart_shifted(Expr(1))}) {
    EXPECT_TRUE(chart_coherence(c).empty()) << c.key();
    RoundTrip rt = round_trip(c, 50, 20240917);
    EXPECT_EQ(rt.points, 50);
    EXPECT_LT(rt.max_error_chart, 1e-10) << c.key();
    EXPECT_LT(rt.max_error_cartesian, 1e-10) << c.key();
  }
}

TEST(Fields, ChartLookup) {
  EXPECT_EQ(chart_by_name("C").name, "C");
  EXPECT_EQ(chart_by_name("Dshift", Expr(1)).key(), "Dshift(b=1)");
  EXPECT_THROW(chart_by_name("Q"), std::invalid_argument);
}

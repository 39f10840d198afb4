#include <gtest/gtest.h>

#include <set>

#include "gaslie/catalog.hpp"

using namespace gaslie;

namespace {

const Catalog& cat() { return Catalog::builtin(); }

Expr v(const char* n) { return Expr::variable(n); }

ExprVector gens(std::initializer_list<int> g) {
  ExprVector c(kL12Dim, Expr(0));
  for (int i : g) c[i] = Expr(1);
  return c;
}

void expect_basis(const SubalgebraEntry& e, const std::vector<ExprVector>& want) {
  ASSERT_EQ(e.basis.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    for (int k = 0; k < kL12Dim; ++k) EXPECT_TRUE(equivalent(e.basis[i][k], want[i][k])) << e.id << " row " << i;
  }
}

}  // namespace

TEST(Catalog, TwentyItemsTwentyEightEntries) {
  EXPECT_EQ(cat().entries().size(), 28u);
  std::set<std::string> items;
  for (const auto& e : cat().entries()) items.insert(e.item());
  EXPECT_EQ(items.size(), 20u);
  EXPECT_EQ(cat().resolve("all").size(), 28u);
  EXPECT_EQ(cat().resolve("4.23"), (std::vector<std::string>{"4.23.i", "4.23.ii"}));
  EXPECT_EQ(cat().resolve("4.77"), (std::vector<std::string>{"4.77"}));
  EXPECT_THROW(cat().resolve("4.99"), UnknownEntry);
}

TEST(Catalog, AbelianEntry) {
  auto e = get_entry(cat(), "4.77", {});
  EXPECT_EQ(e.chart.name, "D");
  expect_basis(e, {gens({1}), gens({2}), gens({3}), gens({0, 4})});
  ASSERT_EQ(e.invariants.size(), 4u);
  EXPECT_TRUE(equivalent(e.invariants[0], v("t")));
  EXPECT_TRUE(equivalent(e.invariants[3], v("P") - v("u")));
}

TEST(Catalog, SphericalEntry) {
  auto e = get_entry(cat(), "4.2", {});
  EXPECT_EQ(e.chart.name, "S");
  expect_basis(e, {gens({7}), gens({8}), gens({9}), gens({0, 10})});
  EXPECT_TRUE(equivalent(e.invariants[3], v("P") - v("t")));
}

TEST(Catalog, ParameterSubstitution) {
  auto e = get_entry(cat(), "4.23.i", {{"a", 1}, {"b", 0}});
  EXPECT_TRUE(equivalent(e.invariants[0], v("theta") + v("vartheta") - v("t")));
}

TEST(Catalog, Errors) {
  EXPECT_THROW(get_entry(cat(), "4.100", {}), UnknownEntry);
  EXPECT_THROW(get_entry(cat(), "4.44.i", {{"a", 0}}), ConstraintViolation);
  EXPECT_THROW(get_entry(cat(), "4.23.i", {{"a", 1}}), ConstraintViolation);
  EXPECT_THROW(get_entry(cat(), "4.23.i", {{"a", 1}, {"b", 1}}), ConstraintViolation);
  std::string why;
  EXPECT_FALSE(satisfies(cat().find("4.23.i"), {{"a", 0}, {"b", 1}}, &why));
  EXPECT_NE(why.find("a"), std::string::npos);
}

TEST(Catalog, ParameterGrids) {
  EXPECT_EQ(cat().parameter_grid(cat().find("4.77")).size(), 1u);
  EXPECT_EQ(cat().parameter_grid(cat().find("4.3")).size(), 36u);
  // (a, b) in {(1,0), (3/5,4/5), (0,1)} minus a = 0.
  EXPECT_EQ(cat().parameter_grid(cat().find("4.23.i")).size(), 2u);
  // Corner cases a = 0 and b = 0 are kept.
  auto g = cat().parameter_grid(cat().find("4.42"));
  EXPECT_EQ(g.size(), 6u);
  bool a0 = false, b0 = false;
  for (const auto& p : g) {
    a0 = a0 || p.at("a") == 0;
    b0 = b0 || p.at("b") == 0;
  }
  EXPECT_TRUE(a0 && b0);
}

TEST(Catalog, CapitalUIsFlagged) { EXPECT_FALSE(cat().find("4.74.ii").flags.empty()); }

TEST(Catalog, AbelianEntryVerifies) {
  auto r = verify_invariants(get_entry(cat(), "4.77", {}));
  EXPECT_TRUE(r.closed);
  ASSERT_EQ(r.verdicts.size(), 16u);
  for (const auto& pv : r.verdicts) EXPECT_EQ(pv.test.verdict, ZeroVerdict::SymbolicZero);
  EXPECT_EQ(r.rank, 5);
  EXPECT_TRUE(r.passed());
}

TEST(Catalog, LogInvariantOfScalingEntry) {
  auto r = verify_invariants(get_entry(cat(), "4.1", {}));
  EXPECT_TRUE(r.passed());
}

TEST(Catalog, MutatedInvariantHasWitness) {
  auto e = get_entry(cat(), "4.77", {});
  e.invariants[3] = v("P") + v("u");
  auto r = verify_invariants(e);
  EXPECT_FALSE(r.passed());
  bool found = false;
  for (const auto& pv : r.verdicts) {
    if (pv.test.verdict == ZeroVerdict::NonZero) {
      found = true;
      EXPECT_EQ(pv.invariant, 3);
      EXPECT_EQ(pv.generator, 3);
      EXPECT_FALSE(pv.residual.empty());
    }
  }
  EXPECT_TRUE(found);
}

TEST(Catalog, Ranks) {
  EXPECT_EQ(independence_rank(get_entry(cat(), "4.77", {})), 5);
  EXPECT_EQ(independence_rank(get_entry(cat(), "4.2", {})), 5);
  Expr t = v("t");
  std::vector<Expr> probe{t, pow(t, 2), pow(t, 3), pow(t, 4), v("rho")};
  EXPECT_EQ(independence_rank(probe, chart_cartesian(), {}, 10, 1e-8, 1), 2);
}

TEST(Catalog, OuterScalingKeepsVerdicts) {
  for (const char* id : {"4.77", "4.1", "4.35"}) {
    auto e = get_entry(cat(), id, {});
    for (auto& c : e.basis[3]) c = canonicalize(Expr(3) * c);
    EXPECT_TRUE(verify_invariants(e).annihilated()) << id;
  }
}

TEST(Catalog, ParametricEntrySymbolicAndSampled) {
  auto r = verify_entry(cat(), "4.71.i");
  EXPECT_TRUE(r.passed());
  EXPECT_FALSE(r.symbolic.symbolic.empty());
  EXPECT_EQ(r.symbolic.rank, -1);
  EXPECT_EQ(r.instances.size(), 72u);
  EXPECT_TRUE(r.simplifier_gaps.empty());
}

TEST(Catalog, SeedDerivationIsStable) {
  EXPECT_EQ(derive_seed(1, "a"), derive_seed(1, "a"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
}

TEST(Catalog, FromJsonRejectsBadInput) {
  EXPECT_THROW(Catalog::from_json("{}"), std::exception);
  EXPECT_THROW(Catalog::from_json("not json"), std::exception);
}

#include <gtest/gtest.h>

#include "gaslie/report.hpp"

using namespace gaslie;

TEST(Report, AlgebraSectionPassesAndListsBrackets) {
  Section s = algebra_section(l12_table(), true);
  EXPECT_TRUE(s.passed) << s.first_failure;
  EXPECT_EQ(s.body["triples_checked"], 220);
  EXPECT_EQ(s.body["brackets"].size(), 66u);
  EXPECT_TRUE(s.first_failure.empty());
}

TEST(Report, MutatedTableNamesATriple) {
  LieAlgebra l = l12_table();
  RationalVector b(kL12Dim, 0);
  b[2] = -1;
  l.set_bracket(1, 9, b);
  Section s = algebra_section(l);
  EXPECT_FALSE(s.passed);
  EXPECT_NE(s.first_failure.find("Jacobi"), std::string::npos) << s.first_failure;
}

TEST(Report, AutomorphismSection) {
  Section s = automorphism_section(kDefaultSeed, 10);
  EXPECT_TRUE(s.passed) << s.first_failure;
  EXPECT_EQ(s.body["maps"].size(), 8u);
}

TEST(Report, CatalogSectionIndependentOfJobs) {
  const Catalog& cat = Catalog::builtin();
  auto ids = cat.resolve("4.71");
  ids.push_back("4.3");
  Section one = catalog_section(cat, ids, {}, 1);
  Section four = catalog_section(cat, ids, {}, 4);
  EXPECT_TRUE(one.passed);
  EXPECT_EQ(one.body.dump(), four.body.dump());
}

TEST(Report, CatalogWitnessForMutatedInvariant) {
  auto doc = Json::parse(Catalog::builtin_text());
  for (auto& e : doc["entries"]) {
    if (e["id"] == "4.77") e["invariants"][3] = "P + u";
  }
  Section s = catalog_section(Catalog::from_json(doc.dump()), {"4.77"}, {});
  EXPECT_FALSE(s.passed);
  EXPECT_NE(s.first_failure.find("witness"), std::string::npos) << s.first_failure;
}

TEST(Report, SolutionsSection) {
  Section s = solutions_section({SolutionKind::IsochoricReduced, SolutionKind::NonisochoricGeneral});
  EXPECT_TRUE(s.passed) << s.first_failure;
  EXPECT_EQ(s.body["families"].size(), 2u);
}

TEST(Report, SolutionChecksCatchPerturbation) {
  Solution s = solution(SolutionKind::NonisochoricReduced);
  s.v = parse("-k0/rho0*t + 1", solution_symbols());
  bool failed = false;
  for (const auto& c : solution_checks(s)) failed = failed || !c.passed;
  EXPECT_TRUE(failed);
}

TEST(Report, ClassesSectionSubset) {
  const Catalog& cat = Catalog::builtin();
  Section s = classes_section(cat, builtin_classes(), {"4.1", "4.2", "4.77"});
  EXPECT_TRUE(s.passed) << s.first_failure;
  EXPECT_EQ(s.body["rows"].size(), 3u);
}

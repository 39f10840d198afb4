#include <gtest/gtest.h>

#include <algorithm>

#include "gaslie/classify.hpp"

using namespace gaslie;

namespace {

const Catalog& cat() { return Catalog::builtin(); }

const ClassSample* sample_with(const ClassReport& r, const std::string& name, const Rational& value) {
  for (const auto& c : r.cases) {
    for (const auto& s : c.samples) {
      auto it = s.params.find(name);
      if (it != s.params.end() && it->second == value) return &s;
    }
  }
  return nullptr;
}

}  // namespace

TEST(Classify, RowsCoverCatalog) {
  EXPECT_EQ(builtin_classes().size(), cat().entries().size());
  for (const auto& e : cat().entries()) EXPECT_NO_THROW(find_class(builtin_classes(), e.id)) << e.id;
  EXPECT_THROW(find_class(builtin_classes(), "4.99"), UnknownEntry);
}

TEST(Classify, AbelianRow) {
  auto r = verify_class(cat(), find_class(builtin_classes(), "4.77"));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.label, "4A_1");
  EXPECT_TRUE(r.cases.at(0).samples.at(0).induced.is_abelian());
}

TEST(Classify, AbsoluteValueCoefficients) {
  const auto& row = find_class(builtin_classes(), "4.56.i");
  EXPECT_EQ(row.abs_parameters(), (std::vector<std::string>{"b"}));
  auto r = verify_class(cat(), row);
  EXPECT_TRUE(r.passed());
  ASSERT_EQ(r.cases.size(), 2u);
  for (const auto& c : r.cases) {
    EXPECT_TRUE(c.symbolic_matches);
    EXPECT_FALSE(c.samples.empty());
  }
  const ClassSample* s = sample_with(r, "b", 2);
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->induced.constant(0, 3, 0), Rational(1, 2));
  EXPECT_EQ(s->induced.constant(1, 3, 2), -1);
  EXPECT_EQ(s->induced.constant(2, 3, 1), 1);
  ASSERT_NE(sample_with(r, "b", -2), nullptr);
}

TEST(Classify, ParametricRowsBothSigns) {
  for (const char* id : {"4.64.i", "4.74.i"}) {
    auto r = verify_class(cat(), find_class(builtin_classes(), id));
    EXPECT_TRUE(r.passed()) << id;
    EXPECT_EQ(r.cases.size(), 2u) << id;
  }
}

TEST(Classify, PrintedHeisenbergRowOmitsACommutator) {
  auto r = verify_class(cat(), find_class(builtin_classes(), "4.21"));
  EXPECT_FALSE(r.passed());
  const auto& s = r.cases.at(0).samples.at(0);
  EXPECT_TRUE(s.invertible);
  EXPECT_NE(s.mismatch.find("[e2,e4]"), std::string::npos);
  EXPECT_TRUE(r.has_correction);
  EXPECT_TRUE(r.correction_passed);
}

TEST(Classify, WrongTargetFails) {
  ClassAssignment row = find_class(builtin_classes(), "4.1");
  row.relations.at(0).rhs = "-(" + row.relations.at(0).rhs + ")";
  auto r = verify_class(cat(), row);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.cases.at(0).symbolic_matches);
}

TEST(Classify, SingularChangeOfBasis) {
  ClassAssignment row = find_class(builtin_classes(), "4.77");
  row.basis = {"E1", "E1", "E3", "E4"};
  auto r = verify_class(cat(), row);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.cases.at(0).samples.at(0).invertible);
}

TEST(Classify, Fingerprints) {
  auto fc = fingerprint_consistency(cat(), builtin_classes());
  EXPECT_TRUE(fc.passed());
  auto group = [&](const std::string& label) -> const FingerprintConsistency::Group& {
    auto it = std::find_if(fc.groups.begin(), fc.groups.end(), [&](const auto& g) { return g.label == label; });
    EXPECT_NE(it, fc.groups.end()) << label;
    return *it;
  };
  EXPECT_EQ(group("A_{3,9}+A_1").ids, (std::vector<std::string>{"4.1", "4.2"}));
  EXPECT_EQ(group("4A_1").ids, (std::vector<std::string>{"4.44.ii", "4.77"}));
  const auto& a36 = group("A_{3,6}+A_1").ids;
  for (const char* id : {"4.38", "4.42", "4.45", "4.54", "4.57", "4.65", "4.74.ii", "4.74.iii"})
    EXPECT_NE(std::find(a36.begin(), a36.end(), id), a36.end()) << id;
  EXPECT_NE(entry_fingerprint(cat(), "4.21", {}), entry_fingerprint(cat(), "4.77", {}));
  EXPECT_EQ(entry_fingerprint(cat(), "4.21", {}).center_dim, 2);
}

TEST(Classify, JsonValidation) {
  EXPECT_THROW(classes_from_json(R"({"rows":[{"id":"x","class":"c","basis":["E1"],"relations":[]}]})"),
               std::invalid_argument);
  EXPECT_THROW(
      classes_from_json(R"({"rows":[{"id":"x","class":"c","basis":["E1","E2","E3","E4"],"relations":[[1,1,"e1"]]}]})"),
      std::invalid_argument);
}

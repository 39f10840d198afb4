#include <gtest/gtest.h>

#include "gaslie/submodel.hpp"

using namespace gaslie;

namespace {

const SolutionKind kAll[] = {SolutionKind::IsochoricGeneral, SolutionKind::IsochoricReduced,
                             SolutionKind::NonisochoricGeneral, SolutionKind::NonisochoricReduced};

Expr e(const char* text) { return parse(text, solution_symbols()); }

void expect_zero(const Residuals& r, const std::string& what) {
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_TRUE(canonicalize(r[i]).is_zero()) << what << " #" << i << ": " << r[i];
}

}  // namespace

TEST(Submodel, KindNames) {
  for (auto k : kAll) EXPECT_EQ(solution_kind_from_string(to_string(k)), k);
  EXPECT_EQ(solution_kind_from_string("isochoric"), SolutionKind::IsochoricReduced);
  EXPECT_THROW(solution_kind_from_string("steady"), std::invalid_argument);
}

TEST(Submodel, FamiliesSolveBothSystems) {
  for (auto k : kAll) {
    Solution s = solution(k);
    expect_zero(reduced_residuals(s.candidate()), std::string("reduced ") + to_string(k));
    expect_zero(full_residuals(s), std::string("full ") + to_string(k));
  }
}

TEST(Submodel, ConstantState) {
  SubmodelCandidate c{Expr(0), Expr(0), Expr(0), e("rho0"), e("P0")};
  expect_zero(reduced_residuals(c), "constant state");
  expect_zero(GasSystem::residuals(Expr(0), Expr(0), Expr(0), e("rho0"), e("f(rho0) + P0")), "constant state");
}

TEST(Submodel, CandidateMustNotDependOnSpace) {
  SubmodelCandidate c{Expr(0), e("x"), Expr(0), e("rho0"), Expr(0)};
  EXPECT_THROW(reduced_residuals(c), std::invalid_argument);
}

TEST(Submodel, PerturbedPressureIsNotASolution) {
  Solution s = solution(SolutionKind::IsochoricReduced);
  s.P = e("(k0 + 1/10)*y + m0*z + (k0^2 + m0^2)/(2*rho0)*t^2");
  bool any = false;
  for (const auto& r : full_residuals(s)) any = any || !canonicalize(r).is_zero();
  EXPECT_TRUE(any);
}

TEST(Submodel, StatedPressureAndEntropyAgree) {
  for (auto k : {SolutionKind::IsochoricReduced, SolutionKind::NonisochoricReduced}) {
    Solution s = solution(k);
    EXPECT_TRUE(equivalent(s.P, s.P1 + s.u)) << to_string(k);
    EXPECT_TRUE(equivalent(s.S, s.P - Expr::function("f", 0, s.rho))) << to_string(k);
  }
}

TEST(Submodel, Vorticity) {
  auto iso = vorticity(solution(SolutionKind::IsochoricReduced));
  EXPECT_TRUE(iso[0].is_zero());
  EXPECT_TRUE(equivalent(iso[1], e("m0")));
  EXPECT_TRUE(equivalent(iso[2], e("-k0")));
  auto non = vorticity(solution(SolutionKind::NonisochoricReduced));
  EXPECT_TRUE(non[0].is_zero());
  EXPECT_TRUE(equivalent(non[1], e("m0/t")));
  EXPECT_TRUE(equivalent(non[2], e("-k0/t")));
  Solution still = solution(SolutionKind::IsochoricReduced);
  std::map<std::string, Expr> zero{{"k0", Expr(0)}, {"m0", Expr(0)}};
  still.u = substitute(still.u, zero);
  still.v = substitute(still.v, zero);
  still.w = substitute(still.w, zero);
  for (const auto& c : vorticity(still)) EXPECT_TRUE(c.is_zero());
}

TEST(Submodel, ConstantsReduceByTranslations) {
  EXPECT_EQ(reduce_constants(solution(SolutionKind::IsochoricGeneral)).kind, SolutionKind::IsochoricReduced);
  for (auto [gen, red] : {std::pair{SolutionKind::IsochoricGeneral, SolutionKind::IsochoricReduced},
                          std::pair{SolutionKind::NonisochoricGeneral, SolutionKind::NonisochoricReduced}}) {
    Solution r = reduce_constants(solution(gen));
    Solution want = solution(red);
    EXPECT_TRUE(equivalent(r.u, want.u)) << r.u;
    EXPECT_TRUE(equivalent(r.v, want.v));
    EXPECT_TRUE(equivalent(r.w, want.w));
    EXPECT_TRUE(equivalent(r.rho, want.rho));
    EXPECT_TRUE(equivalent(r.P1, want.P1)) << r.P1;
  }
}

TEST(Submodel, TranslationsPreserveSolutions) {
  Solution s = solution(SolutionKind::NonisochoricReduced);
  expect_zero(full_residuals(galilean_boost(s, {e("v0"), Expr(2), Expr(0)})), "boost");
  expect_zero(full_residuals(space_translation(s, {Expr(1), e("n0"), Expr(0)})), "shift");
  expect_zero(full_residuals(pressure_translation(s, e("P0"))), "pressure");
}

TEST(Submodel, IsochoricFlow) {
  Solution s = solution(SolutionKind::IsochoricReduced);
  FlowMap fm = flow_map(s);
  EXPECT_EQ(fm.labels, (std::vector<std::string>{"x0", "y0", "z0"}));
  EXPECT_TRUE(equivalent(fm.position[1], e("-k0/(2*rho0)*t^2 + y0")));
  EXPECT_TRUE(equivalent(jacobian_det(fm), Expr(1)));
  for (const auto& r : flow_residuals(fm, s)) EXPECT_TRUE(r.is_zero()) << r;
  std::map<std::string, Expr> t0{{"t", Expr(0)}};
  EXPECT_TRUE(equivalent(substitute(fm.position[0], t0), e("x0")));
  EXPECT_TRUE(equivalent(substitute(fm.position[2], t0), e("z0")));
  std::map<std::string, Expr> still{{"k0", Expr(0)}, {"m0", Expr(0)}};
  EXPECT_TRUE(equivalent(substitute(jacobian_det(fm), still), Expr(1)));
}

TEST(Submodel, NonisochoricFlow) {
  Solution s = solution(SolutionKind::NonisochoricReduced);
  FlowMap fm = flow_map(s);
  EXPECT_EQ(fm.labels, (std::vector<std::string>{"u0", "y0", "z0"}));
  EXPECT_TRUE(equivalent(jacobian_det(fm), e("t")));
  for (const auto& r : flow_residuals(fm, s)) EXPECT_TRUE(r.is_zero()) << r;
  EXPECT_TRUE(equivalent(differentiate(fm.position[0], "t"), e("u0 - t/rho0")));
  std::map<std::string, Expr> t0{{"t", Expr(0)}};
  Expr plane = substitute(fm.position[0] + e("k0") * fm.position[1] + e("m0") * fm.position[2], t0);
  EXPECT_TRUE(plane.is_zero()) << plane;
}

TEST(Submodel, LagrangianFields) {
  auto iso = lagrangian_fields(solution(SolutionKind::IsochoricReduced));
  EXPECT_TRUE(equivalent(iso.velocity[0], e("k0*y0 + m0*z0")));
  EXPECT_TRUE(iso.acceleration[0].is_zero());
  EXPECT_TRUE(equivalent(iso.acceleration[1], e("-k0/rho0")));
  EXPECT_TRUE(equivalent(iso.acceleration[2], e("-m0/rho0")));
  EXPECT_TRUE(equivalent(iso.rho, e("rho0")));
  EXPECT_TRUE(equivalent(iso.P, e("k0*y0 + m0*z0")));
  auto non = lagrangian_fields(solution(SolutionKind::NonisochoricReduced));
  EXPECT_TRUE(equivalent(non.acceleration[0], e("-1/rho0")));
  EXPECT_TRUE(equivalent(non.acceleration[1], e("-k0/rho0")));
  EXPECT_TRUE(equivalent(non.S, e("u0")));
}

TEST(Submodel, Geometry) {
  Assignment c;
  c.set("rho0", 1).set("k0", 1).set("m0", 1);
  for (auto k : {SolutionKind::IsochoricReduced, SolutionKind::NonisochoricReduced}) {
    auto checks = geometry_checks(solution(k), c);
    EXPECT_FALSE(checks.empty());
    for (const auto& g : checks) EXPECT_TRUE(g.passed) << g.name << " " << g.max_error;
  }
}

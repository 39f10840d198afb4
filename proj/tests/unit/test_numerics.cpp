#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaslie/numerics.hpp"
#include "gaslie/report.hpp"

using namespace gaslie;

namespace {

Assignment unit() { return Assignment{}.set("rho0", 1).set("k0", 1).set("m0", 1); }

std::array<Expr, 3> velocity(const Solution& s) { return {s.u, s.v, s.w}; }

std::array<double, 3> start_of(const FlowMap& fm, const Assignment& labels, double t) {
  Assignment a = labels;
  a.set("t", t);
  return {eval(fm.position[0], a), eval(fm.position[1], a), eval(fm.position[2], a)};
}

}  // namespace

TEST(Numerics, Rank) {
  EXPECT_EQ(numeric_rank(Matrix{{0, 0, 0}, {0, 0, 0}}), 0);
  Matrix m{{1, 2, 3, 4}, {0, 1, 0, 2}, {3, 0, 1, 1}};
  EXPECT_EQ(numeric_rank(m), 3);
  m.push_back(m[1]);
  EXPECT_EQ(numeric_rank(m), 3);
  m[3] = m[0];
  m.erase(m.begin() + 2);
  EXPECT_EQ(numeric_rank(m), 2);
  auto sv = singular_values(Matrix{{3, 0}, {0, -4}});
  ASSERT_EQ(sv.size(), 2u);
  EXPECT_NEAR(sv[0], 4, 1e-14);
  EXPECT_NEAR(sv[1], 3, 1e-14);
}

TEST(Numerics, ZeroVelocity) {
  auto tr = integrate({Expr(0), Expr(0), Expr(0)}, {1, 2, 3}, 0, 1, 0.1, {});
  for (const auto& s : tr.samples) {
    EXPECT_EQ(s[1], 1);
    EXPECT_EQ(s[2], 2);
    EXPECT_EQ(s[3], 3);
  }
  EXPECT_EQ(tr.samples.size(), 11u);
  EXPECT_DOUBLE_EQ(tr.samples.back()[0], 1.0);
}

TEST(Numerics, LastStepLandsOnEndpoint) {
  auto tr = integrate({Expr(1), Expr(0), Expr(0)}, {0, 0, 0}, 0, 1, 0.3, {});
  EXPECT_DOUBLE_EQ(tr.samples.back()[0], 1.0);
  EXPECT_NEAR(tr.samples.back()[1], 1.0, 1e-15);
  for (std::size_t i = 1; i < tr.samples.size(); ++i) EXPECT_GT(tr.samples[i][0], tr.samples[i - 1][0]);
}

TEST(Numerics, SingularityReportsTime) {
  Expr t = Expr::variable("t");
  try {
    integrate({Expr(1) / t, Expr(0), Expr(0)}, {0, 0, 0}, -1, 1, 0.25, {});
    FAIL() << "expected EvalError";
  } catch (const EvalError& e) {
    EXPECT_NE(std::string(e.what()).find("t ="), std::string::npos) << e.what();
  }
  EXPECT_THROW(integrate({Expr(0), Expr(0), Expr(0)}, {0, 0, 0}, 0, 1, 0, {}), std::invalid_argument);
}

TEST(Numerics, IsochoricAgainstClosedForm) {
  Solution s = solution(SolutionKind::IsochoricReduced);
  FlowMap fm = flow_map(s);
  Assignment lab = unit();
  lab.set("x0", 0).set("y0", 0).set("z0", 1);
  auto tr = integrate(velocity(s), {0, 0, 1}, 0, 3, 1e-3, lab);
  EXPECT_LT(max_component_error(tr, fm, lab), 1e-6);
  EXPECT_LT(compare_to_closed_form(tr, fm, lab), 1e-6);
  Trajectory at_start;
  at_start.samples = {{0, 0, 0, 1}};
  EXPECT_EQ(compare_to_closed_form(at_start, fm, lab), 0.0);
  EXPECT_THROW(integrate(velocity(s), {0, 0, 1}, 1, 1, 1e-3, lab), std::invalid_argument);
}

TEST(Numerics, NonisochoricAgainstClosedForm) {
  Solution s = solution(SolutionKind::NonisochoricReduced);
  FlowMap fm = flow_map(s);
  Assignment lab = unit();
  lab.set("u0", 2).set("y0", 1).set("z0", 1);
  auto tr = integrate(velocity(s), start_of(fm, lab, 0.1), 0.1, 3, 1e-3, lab);
  EXPECT_LT(max_component_error(tr, fm, lab), 1e-6);
}

TEST(Numerics, FourthOrder) {
  Solution s = solution(SolutionKind::NonisochoricReduced);
  FlowMap fm = flow_map(s);
  Assignment lab = unit();
  lab.set("u0", 1).set("y0", 1).set("z0", 1);
  auto c = convergence_order(velocity(s), fm, lab, 0.1, 3, {1e-2, 5e-3, 2.5e-3});
  EXPECT_GE(c.order, 3.7);
  EXPECT_LE(c.order, 4.3);
  EXPECT_NEAR(c.errors[0] / c.errors[1], 16, 2);
}

TEST(Numerics, Csv) {
  Trajectory tr;
  tr.samples = {{0.1, 1.0 / 3.0, 2, 3}};
  std::ostringstream os;
  write_csv(os, tr);
  EXPECT_EQ(os.str(), "t,x,y,z\n0.10000000000000001,0.33333333333333331,2,3\n");
}

TEST(Numerics, SphereAtStart) {
  FlowMap fm = flow_map(solution(SolutionKind::IsochoricReduced));
  auto st = sphere_transport(fm, unit(), 100, 0.0, 3);
  Expr x = Expr::variable("x"), y = Expr::variable("y"), z = Expr::variable("z");
  EXPECT_TRUE(equivalent(st.quadric_expr, x * x + y * y + z * z - 1)) << st.quadric_expr;
  EXPECT_LT(st.max_residual, 1e-14);
}

TEST(Numerics, SphereBecomesEllipsoid) {
  FlowMap fm = flow_map(solution(SolutionKind::IsochoricReduced));
  for (double t : {1.6, 2.0}) {
    auto st = sphere_transport(fm, unit(), 1000, t, 20240917);
    EXPECT_EQ(st.images.size(), 1000u);
    EXPECT_LT(st.max_residual, 1e-10) << t;
    EXPECT_LT(st.max_label_error, 1e-10) << t;
    EXPECT_NEAR(st.volume, 4.0 / 3.0 * std::numbers::pi, 1e-12);
    EXPECT_NEAR(st.volume_from_quadric, 4.0 / 3.0 * std::numbers::pi, 1e-9);
    EXPECT_GT(std::abs(st.quadric.a[0][1]), 0.1);
  }
}

TEST(Numerics, RngIsDeterministic) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(Rng(42).next(), c.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform(-1, 2);
    EXPECT_GE(u, -1);
    EXPECT_LT(u, 2);
  }
}

TEST(Numerics, CommonStartCheck) {
  auto ok = common_start_check({0, 1, 2, 3}, {{-6.5, -3.5, -3.5}, {-3.5, -3.5, -3.5}, {-0.5, -3.5, -3.5}, {2.5, -3.5, -3.5}});
  EXPECT_TRUE(ok.passed);
  EXPECT_LT(ok.affine_residual, 1e-14);
  auto bent = common_start_check({0, 1, 2, 3}, {{0, 0, 0}, {1, 0, 0}, {2.5, 0, 0}, {3, 0, 0}});
  EXPECT_FALSE(bent.passed);
  auto split = common_start_check({0, 1}, {{0, 0, 0}, {1, 1e-6, 0}});
  EXPECT_FALSE(split.passed);
}

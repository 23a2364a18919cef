#include <gtest/gtest.h>

#include <chrono>

#include "qes/locus.hpp"

namespace qes {
namespace {

double min_b(const Branch& br) {
  double m = 1e300;
  for (const auto& s : br.samples) m = std::min(m, s.b);
  return m;
}

bool constant_class(const Branch& br) {
  for (const auto& s : br.samples) {
    if (s.real_zeros != br.n - 2 * br.m) return false;
  }
  return true;
}

TEST(Trace, DegreeOneParabola) {
  const auto f = build_family(1);
  const auto br = trace_branch(f, 0, 0.0, 9.0);
  EXPECT_EQ(br.arcs, 1);
  EXPECT_TRUE(constant_class(br));
  EXPECT_GE(min_b(br), 0.0);
  EXPECT_LT(min_b(br), 5e-3);
  for (const auto& s : br.samples) {
    EXPECT_NEAR(s.a * s.a, s.b, 1e-10 * (1 + s.b));
    const double r = std::sqrt(std::max(0.0, s.b));
    EXPECT_TRUE(std::abs(s.lambda - (s.b * s.b + 2 * r)) < 1e-8 || std::abs(s.lambda - (s.b * s.b - 2 * r)) < 1e-8);
  }
  // Both ends reached at b = 9, a = +-3.
  EXPECT_NEAR(std::abs(br.samples.front().a), 3, 1e-12);
  EXPECT_NEAR(std::abs(br.samples.back().a), 3, 1e-12);
  EXPECT_NEAR(br.samples.back().b, 9, 1e-12);
}

TEST(Trace, DegreeZero) {
  const auto br = trace_branch(build_family(0), 0, -4.0, 4.0);
  ASSERT_FALSE(br.samples.empty());
  for (const auto& s : br.samples) EXPECT_NEAR(s.lambda, s.b * s.b, 1e-12);
  EXPECT_NEAR(min_b(br), -4, 1e-12);
}

TEST(Trace, DegreeTwoBranches) {
  const auto f = build_family(2);
  const auto g0 = trace_branch(f, 0, -6.0, 6.0);
  const auto g1 = trace_branch(f, 1, -6.0, 6.0);
  EXPECT_TRUE(constant_class(g0));
  EXPECT_TRUE(constant_class(g1));
  EXPECT_EQ(g0.arcs, 1);
  EXPECT_EQ(g1.arcs, 1);
  // Gamma_{2,0} turns at (b, a) = (3/4, 1); Gamma_{2,1} spans the window.
  EXPECT_NEAR(min_b(g0), 0.75, 1e-3);
  EXPECT_NEAR(min_b(g1), -6, 1e-12);
  double bmax = -1e300;
  for (const auto& s : g1.samples) bmax = std::max(bmax, s.b);
  EXPECT_NEAR(bmax, 6, 1e-12);
}

TEST(Trace, BadArguments) {
  const auto f = build_family(2);
  EXPECT_THROW(trace_branch(f, 2, -1, 1), UsageError);
  EXPECT_THROW(trace_branch(f, 0, 1, -1), UsageError);
}

TEST(Structure, BranchCountsAndClassesUpToFour) {
  for (int n = 0; n <= 4; ++n) {
    const auto f = build_family(n);
    EXPECT_EQ(branch_count_at(f, 100.0), n / 2 + 1) << n;
    for (int m = 0; m <= n / 2; ++m) {
      const auto br = trace_branch(f, m, -8.0, 12.0);
      EXPECT_GE(br.arcs, 1);
      EXPECT_TRUE(constant_class(br)) << "n=" << n << " m=" << m;
    }
  }
}

TEST(Structure, Ordering) {
  EXPECT_TRUE(branch_ordering_check(build_family(2), 50).pass);
  const auto r1 = branch_ordering_check(build_family(1), 50);
  EXPECT_TRUE(r1.pass);
  EXPECT_EQ(r1.lambdas.size(), 1u);
  const auto r4 = branch_ordering_check(build_family(4), 100);
  EXPECT_TRUE(r4.pass);
  EXPECT_EQ(r4.lambdas.size(), 3u);
  for (int n = 0; n <= 4; ++n) EXPECT_TRUE(branch_ordering_check(build_family(n), 100).pass) << n;
}

TEST(CriticalPoints, SmallFamilies) {
  EXPECT_TRUE(qes_critical_points(build_family(0), -10, 10).empty());
  const auto c1 = qes_critical_points(build_family(1), -10, 10);
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_NEAR(c1[0].b, 0, 1e-12);
  EXPECT_NEAR(c1[0].lambda, 0, 1e-9);

  const auto f2 = build_family(2);
  const auto c2 = qes_critical_points(f2, -10, 10);
  const UniPoly disc = squarefree_part(discriminant_in(f2.qlambda, Var::lambda));
  EXPECT_EQ(SturmSequence(disc).count(-10, 10), 1);
  ASSERT_EQ(c2.size(), 1u);
  EXPECT_NEAR(c2[0].b, 0.75, 1e-12);
  EXPECT_NEAR(c2[0].lambda, -23.0 / 16.0, 1e-9);
}

TEST(TopWeight, ProductForm) {
  BiPoly p3;
  p3.add_term(4, 0, 1);
  p3.add_term(2, 1, -10);
  p3.add_term(0, 2, 9);
  EXPECT_EQ(top_weight_product(3), p3);
  BiPoly p4;
  p4.add_term(5, 0, 1);
  p4.add_term(3, 1, -20);
  p4.add_term(1, 2, 64);
  EXPECT_EQ(top_weight_product(4), p4);
  EXPECT_EQ(top_weight_product(1), build_family(1).qstar);
  for (int n = 1; n <= 8; ++n) EXPECT_TRUE(top_weight_check(build_family(n))) << n;
}

TEST(Discriminant, DegreeClaim) {
  EXPECT_EQ(discriminant_degree_check(build_family(1)).degree, 1);
  EXPECT_EQ(discriminant_degree_check(build_family(2)).degree, 3);
  EXPECT_EQ(discriminant_degree_check(build_family(3)).degree, 6);
  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 1; n <= 8; ++n) EXPECT_TRUE(discriminant_degree_check(build_family(n)).pass) << n;
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0);
}

TEST(Asymptotics, Harmonic) {
  const auto r0 = asymptotic_k_check(build_family(0), 1e4);
  EXPECT_TRUE(r0.exact);
  EXPECT_EQ(r0.max_abs, 0);
  const auto r1 = asymptotic_k_check(build_family(1), 1e4);
  EXPECT_TRUE(r1.exact);
  EXPECT_EQ(r1.max_abs, 0);
  for (int n = 2; n <= 4; ++n) {
    const auto r = asymptotic_k_check(build_family(n), 1e4);
    EXPECT_LT(r.max_abs, 0.1) << n;
  }
  // Bounded and increasing in k at moderate b.
  for (int n = 1; n <= 6; ++n) {
    for (double b : {1e2, 1e3, 1e4}) {
      const auto r = asymptotic_k_check(build_family(n), b);
      for (std::size_t k = 0; k + 1 < r.scaled.size(); ++k) EXPECT_LT(r.scaled[k], r.scaled[k + 1]);
      for (double v : r.scaled) EXPECT_LE(std::abs(v), 2.0 * n + 1);
    }
  }
}

}  // namespace
}  // namespace qes

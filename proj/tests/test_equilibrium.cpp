#include <gtest/gtest.h>

#include <random>

#include "qes/equilibrium.hpp"

namespace qes {
namespace {

TEST(Equilibrium, DegreeOneExamples) {
  const auto f1 = build_family(1);
  const auto on = make_point(f1, cplx(1, 0), cplx(1, 0));
  const auto rep = equilibrium_residuals(on);
  ASSERT_EQ(rep.roots.size(), 1u);
  EXPECT_NEAR(std::abs(rep.roots[0] - cplx(-1, 0)), 0, 1e-15);
  EXPECT_EQ(rep.max_residual, 0);

  const auto off = make_point(f1, cplx(1, 0), cplx(2, 0));
  EXPECT_NEAR(std::abs(equilibrium_residuals(off).residuals[0] - cplx(3, 0)), 0, 1e-15);

  const auto r0 = equilibrium_residuals(make_point(build_family(0), cplx(2, 0), cplx(0, 0)));
  EXPECT_TRUE(r0.roots.empty());
  EXPECT_EQ(r0.max_residual, 0);
}

TEST(Divisibility, Examples) {
  const auto f1 = build_family(1);
  EXPECT_LT(divisibility_defect(make_point(f1, cplx(1, 0), cplx(1, 0))), 1e-15);
  const auto f2 = build_family(2);
  for (const auto& pt : eigenvalues_at(f2, 1.0)) EXPECT_LT(divisibility_defect(pt), 1e-10);
  // p = z + 2, b = 1: p'' + 2p'h' = 2z^2 - 2, remainder 2h'(-2) = 6
  const auto bad = custom_point({1, 2}, cplx(1, 0));
  EXPECT_NEAR(divisibility_defect(bad), 6.0 / 2.0, 1e-15);
}

TEST(Residue, Examples) {
  const auto f1 = build_family(1);
  EXPECT_NEAR(std::abs(residue_at(make_point(f1, cplx(1, 0), cplx(1, 0)), 0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(residue_at(custom_point({1, 2}, cplx(1, 0)), 0) - cplx(-6, 0)), 0, 1e-15);
  EXPECT_TRUE(residues(make_point(build_family(0), cplx(1, 0), cplx(0, 0))).empty());
  EXPECT_THROW(residue_at(custom_point({1, 2}, cplx(1, 0)), 1), UsageError);
}

TEST(Equilibrium, ClusteredRootsRejected) {
  // (z - 1)(z - 1 - 1e-9)
  const double e = 1e-9;
  const auto pt = custom_point({1, -(2 + e), 1 + e}, cplx(0, 0));
  EXPECT_THROW(equilibrium_residuals(pt), NumericError);
}

TEST(Equilibrium, ResidueEqualsScaledResidual) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ub(-4, 4);
  for (int n = 1; n <= 6; ++n) {
    const auto f = build_family(n);
    for (int t = 0; t < 5; ++t) {
      const cplx a(ub(rng), ub(rng));
      const auto pt = make_point(f, cplx(ub(rng), 0), a);
      const auto rep = equilibrium_residuals(pt);
      for (std::size_t k = 0; k < rep.roots.size(); ++k) {
        cplx dp = 0;
        for (std::size_t j = 0; j < rep.roots.size(); ++j) {
          if (j == k) continue;
          dp = (dp == cplx(0) ? cplx(1) : dp) * (rep.roots[k] - rep.roots[j]);
        }
        if (rep.roots.size() == 1) dp = 1;
        const cplx want = rep.residuals[k] * (-2.0 / (dp * dp));
        const cplx got = residue_at(pt, k);
        EXPECT_LT(std::abs(got - want), 1e-10 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST(Equilibrium, ThreeConditionsAgree) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ub(-3, 3);
  std::uniform_int_distribution<int> un(1, 6);
  int on_pass = 0, off_fail = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = un(rng);
    const auto f = build_family(n);
    const auto pts = eigenvalues_at(f, ub(rng));
    const auto& pt = pts[static_cast<std::size_t>(t) % pts.size()];
    const double e = equilibrium_residuals(pt).max_residual;
    const double d = divisibility_defect(pt);
    double r = 0;
    for (const auto& x : residues(pt)) r = std::max(r, std::abs(x));
    if (e < 1e-9 && d < 1e-9 && r < 1e-9) ++on_pass;

    const auto off = make_point(f, pt.b, pt.a + 0.1);
    const double e2 = equilibrium_residuals(off).max_residual;
    const double d2 = divisibility_defect(off);
    double r2 = 0;
    for (const auto& x : residues(off)) r2 = std::max(r2, std::abs(x));
    if (e2 > 1e-3 && d2 > 1e-3 && r2 > 1e-3) ++off_fail;
    else ADD_FAILURE() << "off n=" << n << " e=" << e2 << " d=" << d2 << " r=" << r2;
  }
  EXPECT_EQ(on_pass, 50);
  EXPECT_EQ(off_fail, 50);
}

}  // namespace
}  // namespace qes

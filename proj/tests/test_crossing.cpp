#include <gtest/gtest.h>

#include "qes/crossing.hpp"
#include "qes/quadrature.hpp"

namespace qes {
namespace {

// First Airy zeros (Boost airy_ai_zero), frozen.
const double kAiryZeros[] = {-2.338107410459767, -4.087949444130970, -5.520559828095551};

// phi by direct quadrature of p^2 exp(2z^3/3 - 2bz) along gamma, divided by
// 2^{2/3} i pi.
double phi_quadrature(int n, double b, double a) {
  using C = std::complex<long double>;
  const auto pc = p_coefficients(n, cplx(a, 0), cplx(b, 0));
  auto f = [&](C z) {
    C p = 0;
    for (auto c : pc) p = p * z + C(c.real(), c.imag());
    return p * p * std::exp(2.0L * z * z * z / 3.0L - 2.0L * static_cast<long double>(b) * z);
  };
  const auto q = integrate_gamma<long double>(f, 0.0L, 0.0L, QuadOptions{1e-15, 18, 0.5});
  const C v = q.value / (C(0, M_PI) * std::cbrt(4.0L));
  return static_cast<double>(v.real());
}

TEST(Phi, DegreeZeroIsAiry) {
  const double c = std::cbrt(4.0);
  for (double b : {-6.0, -2.2, -0.3, 0.0, 1.5}) EXPECT_DOUBLE_EQ(phi(0, b), airy(c * b).ai);
  EXPECT_GT(phi(0, 0.0), 0.0);
}

TEST(Phi, MatchesQuadrature) {
  for (int n : {2, 4}) {
    const PhiEvaluator ph(n);
    for (int i = 0; i < 10; ++i) {
      const double b = -0.5 - 0.5 * i;
      const double a = ph.select_a(b);
      const double q = phi_quadrature(n, b, a);
      const double v = ph(b);
      EXPECT_LT(std::abs(v - q), 1e-6 * std::abs(q)) << "n=" << n << " b=" << b;
    }
  }
}

TEST(Phi, OddDegreeRejected) {
  EXPECT_THROW(phi(1, -1.0), UsageError);
  EXPECT_THROW(find_crossings(3, 1), UsageError);
}

TEST(Phi, BranchHasNoRealZeros) {
  const PhiEvaluator ph(2);
  for (double b : {-4.0, -1.0, -0.1}) EXPECT_EQ(real_zero_count(2, b, ph.select_a(b)), 0);
}

TEST(Crossings, DegreeZeroAiryZeros) {
  const auto cs = find_crossings(0, 3);
  ASSERT_EQ(cs.size(), 3u);
  const double c = std::cbrt(4.0);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(cs[k].b, kAiryZeros[k] / c, 1e-8);
    EXPECT_NEAR(cs[k].lambda, cs[k].b * cs[k].b, 1e-12);
    EXPECT_LE(cs[k].bracket, 1e-10);
  }
  EXPECT_NEAR(cs[0].b, -1.4729154, 1e-6);
}

TEST(Crossings, DegreeTwoFirstFive) {
  const auto cs = find_crossings(2, 5);
  ASSERT_EQ(cs.size(), 5u);
  const PhiEvaluator ph(2);
  for (const auto& c : cs) {
    EXPECT_LT(c.b, 0.0);
    EXPECT_LE(c.bracket, 1e-10);
    EXPECT_NEAR(c.lambda, c.b * c.b - 2 * c.a, 1e-10);
    // The quadrature oracle changes sign across each crossing.
    const double lo = phi_quadrature(2, c.b - 1e-6, ph.select_a(c.b - 1e-6));
    const double hi = phi_quadrature(2, c.b + 1e-6, ph.select_a(c.b + 1e-6));
    EXPECT_LT(lo * hi, 0.0) << c.k;
  }
  for (std::size_t i = 1; i < cs.size(); ++i) EXPECT_LT(cs[i].b, cs[i - 1].b);
  EXPECT_NEAR(cs[0].b, -2.016012477, 1e-8);
}

TEST(Crossings, Asymptotics) {
  const auto cs = find_crossings(0, 20);
  for (int k = 10; k <= 20; ++k) {
    const double ratio = cs[k - 1].b / -std::pow(0.75 * M_PI * k, 2.0 / 3.0);
    EXPECT_NEAR(ratio, 1.0, 0.02) << k;
  }
}

TEST(Crossings, InterlaceWithDerivativeZeros) {
  const PhiEvaluator ph(2);
  const auto cs = find_crossings(2, 6);
  auto dphi = [&](double b) { return (ph(b + 1e-5) - ph(b - 1e-5)) / 2e-5; };
  for (std::size_t i = 1; i < cs.size(); ++i) {
    // Exactly one sign change of phi' between consecutive zeros.
    int changes = 0;
    double prev = dphi(cs[i - 1].b - 1e-4);
    const int steps = 60;
    for (int j = 1; j <= steps; ++j) {
      const double b = cs[i - 1].b - 1e-4 + (cs[i].b - cs[i - 1].b + 2e-4) * j / steps;
      const double d = dphi(b);
      if ((d < 0) != (prev < 0)) ++changes;
      prev = d;
    }
    EXPECT_EQ(changes, 1) << i;
  }
}

}  // namespace
}  // namespace qes

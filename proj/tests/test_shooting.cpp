#include <gtest/gtest.h>

#include "qes/shooting.hpp"

namespace qes {
namespace {

ShootingConfig cfg(double J, double b) {
  ShootingConfig c;
  c.J = J;
  c.b = b;
  return c;
}

bool contains(const EigenReport& r, double l, double tol) {
  for (const auto& e : r.values) {
    if (std::abs(e.lambda - l) < tol) return true;
  }
  return false;
}

TEST(Init, LeadingExponent) {
  const double R = 12;
  const auto d = recessive_init(kRayRight, R, cfg(0, 0), cplx(0, 0));
  // |w| ~ exp(-R^3/3) R^{-1}
  EXPECT_NEAR(d.logscale, -R * R * R / 3 - std::log(R), 1e-12);
  EXPECT_NEAR(std::abs(d.w), 1.0, 1e-6);
}

TEST(Init, PTSymmetricRays) {
  const ShootingConfig c = cfg(2, 0.7);
  const cplx lam(3.1, 0);
  const auto r = recessive_init(kRayRight, 12, c, lam);
  const auto l = recessive_init(kRayLeft, 12, c, lam);
  // w_left(zeta) = e^{-i pi (J-1)} conj(w_right(-conj zeta))
  const cplx ph = std::polar(1.0, -M_PI * (c.J - 1));
  EXPECT_NEAR(std::abs(l.w - ph * std::conj(r.w)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(l.wp + ph * std::conj(r.wp)), 0.0, 1e-10);
  EXPECT_NEAR(l.logscale, r.logscale, 1e-12);
}

TEST(Init, RecessiveGrowsInward) {
  const ShootingConfig c = cfg(1, 0.5);
  const auto outer = recessive_init(kRayRight, 13, c, cplx(2, 0));
  const auto inner = recessive_init(kRayRight, 12, c, cplx(2, 0));
  EXPECT_GT(std::log(std::abs(inner.w)) + inner.logscale, std::log(std::abs(outer.w)) + outer.logscale);
}

TEST(Init, TurningPointNearStart) {
  const ShootingConfig c = cfg(1, 0);
  const cplx z = std::polar(3.0, kRayRight);
  const cplx lam = -(z * z * z * z) - cplx(0, 2) * z;  // V(z) = 0
  EXPECT_THROW(recessive_init(kRayRight, 3.0, c, lam), NumericError);
}

TEST(Det, QESZeros) {
  EXPECT_LT(det_ratio(cfg(1, 1), 1.0), 1e-6);
  EXPECT_LT(det_ratio(cfg(2, 1), -1.0), 1e-6);
  EXPECT_LT(det_ratio(cfg(2, 1), 3.0), 1e-6);
  EXPECT_GT(det_ratio(cfg(1, 1), 0.5), 1e-2);
}

TEST(Det, RealAfterPhaseAlignment) {
  for (double J : {1.0, -1.0, 2.5, -3.0}) {
    const auto d = spectral_det(cfg(J, 0.8), cplx(2.7, 0));
    EXPECT_LT(std::abs(d.det.imag()), 1e-8 * std::abs(d.det)) << J;
  }
}

TEST(Det, RadiusInvariance) {
  for (double J : {1.0, -1.0, 2.5}) {
    ShootingConfig c = cfg(J, 0.7);
    c.auto_radius = false;
    c.R = 12;
    const auto d1 = spectral_det(c, cplx(3.3, 0.2));
    c.R = 14;
    const auto d2 = spectral_det(c, cplx(3.3, 0.2));
    const cplx q = d1.det / d2.det * std::exp(d1.logscale - d2.logscale);
    EXPECT_LT(std::abs(q - 1.0), 1e-6) << J;
  }
}

TEST(Det, PrecisionsAgree) {
  ShootingConfig c = cfg(1, 2);
  c.rtol = 1e-12;
  const auto d53 = spectral_det(c, cplx(20.0, 0));
  c.precision_bits = 64;
  const auto d64 = spectral_det(c, cplx(20.0, 0));
  EXPECT_NEAR(d53.log_abs(), d64.log_abs(), 1e-6);
  EXPECT_EQ(d53.det.real() > 0, d64.det.real() > 0);
}

TEST(Det, ConfigValidation) {
  ShootingConfig c = cfg(1, 0);
  c.rtol = 0;
  EXPECT_THROW(spectral_det(c, cplx(1, 0)), UsageError);
  c = cfg(1, 0);
  c.precision_bits = 80;
  EXPECT_THROW(spectral_det(c, cplx(1, 0)), UsageError);
  c = cfg(1, 0);
  c.R = 0.5;
  EXPECT_THROW(spectral_det(c, cplx(1, 0)), UsageError);
}

TEST(Eigen, WindowWithQESValues) {
  const auto r = eigenvalues(2, 1, -5, 10);
  EXPECT_TRUE(contains(r, -1.0, 1e-8));
  EXPECT_TRUE(contains(r, 3.0, 1e-8));
  EXPECT_GE(r.values.size(), 3u);
  EXPECT_EQ(r.unexplained, 0);
  EXPECT_LT(r.max_imag_ratio, 1e-8);
}

TEST(Eigen, NegativeJAllReal) {
  const auto r = eigenvalues(-1, 0, 0, 20);
  EXPECT_GE(r.values.size(), 3u);
  EXPECT_EQ(r.zero_count, static_cast<int>(r.values.size()));
  EXPECT_EQ(r.unexplained, 0);
}

TEST(Eigen, ComplexPairDetected) {
  // J=2, b=-2: Q_2 has the complex pair 4 +- 4i... checked against the
  // argument principle in a box holding only that pair.
  const auto f = build_family(1);
  const auto pts = eigenvalues_at(f, -2.0);
  ASSERT_EQ(pts.size(), 2u);
  ASSERT_GT(std::abs(pts[0].lambda.imag()), 0.1);
  const double lr = pts[0].lambda.real(), li = std::abs(pts[0].lambda.imag());
  EXPECT_EQ(zero_count(cfg(2, -2), lr - 0.3, lr + 0.3, li + 0.3), 2);
}

TEST(Negative, HarmonicLimit) {
  const auto l = lowest_eigenvalue(cfg(1, -25), 0);
  ASSERT_TRUE(l.has_value());
  EXPECT_NEAR(*l / (std::sqrt(2.0) * 5), 1.0, 0.15);
}

TEST(Positive, HarmonicLimit) {
  const auto h = harmonic_check(1, 50, 2);
  EXPECT_LT(h.max_rel, 0.05);
}

TEST(Crossing, DeterminantOfDualVanishes) {
  const auto cs = find_crossings(0, 1);
  const auto v = verify_crossing(0, cs[0]);
  EXPECT_TRUE(v.pass) << v.ratio;
  EXPECT_TRUE(v.C_nonzero);
  CrossingPoint ctl = cs[0];
  ctl.b += 0.3;
  ctl.a = 0;
  ctl.lambda = ctl.b * ctl.b;
  EXPECT_FALSE(verify_crossing(0, ctl).pass);
}

TEST(Consistency, QESRootsAreZeros) {
  for (double b : {-2.0, 1.0}) {
    const auto q = qes_consistency(2, b);
    EXPECT_TRUE(q.pass) << b << " " << q.worst;
    EXPECT_EQ(q.lambdas.size(), 3u);
  }
}

TEST(Reality, NonQESRealAndShared) {
  const auto r = reality_check(1, -2, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.non_qes.size(), 3u);
  EXPECT_LT(r.max_dual_diff, 1e-6);
  EXPECT_THROW(reality_check(5, 0, 3), UsageError);
}

}  // namespace
}  // namespace qes

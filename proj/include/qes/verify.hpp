#pragma once

// Pass/fail checks shared by the command line and the acceptance run. Each
// returns named metrics so callers can print or serialize them.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qes/equilibrium.hpp"
#include "qes/identity.hpp"
#include "qes/locus.hpp"
#include "qes/qes_family.hpp"
#include "qes/shooting.hpp"

namespace qes {

struct CheckReport {
  std::string kind;
  bool pass = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;

  void metric(const std::string& name, double v) { metrics.emplace_back(name, v); }
};

inline constexpr double kOnLocusTolerance = 1e-9;
inline constexpr double kOffLocusThreshold = 1e-3;
inline constexpr double kOffLocusShift = 0.1;

namespace detail {

inline double max_abs(const std::vector<cplx>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

inline void require_n(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi) {
    throw UsageError(std::string(what) + ": n must be in " + std::to_string(lo) + ".." + std::to_string(hi) +
                     ", got " + std::to_string(n));
  }
}

}  // namespace detail

/// Joint concordance of the equilibrium, divisibility and residue
/// conditions: all three hold on the locus and all three fail at a = a* + 0.1.
inline CheckReport check_equilibrium(int n_lo, int n_hi, int samples, std::uint64_t seed) {
  detail::require_n(n_lo, 1, kDefaultFamilyCap, "verify equilibrium");
  detail::require_n(n_hi, n_lo, kDefaultFamilyCap, "verify equilibrium");
  if (samples < 1) throw UsageError("verify equilibrium: samples must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ub(-3, 3);
  std::uniform_int_distribution<int> un(n_lo, n_hi);
  CheckReport r;
  r.kind = "equilibrium";
  int on = 0, off = 0;
  double worst_on = 0, weakest_off = INFINITY;
  for (int t = 0; t < samples; ++t) {
    const int n = un(rng);
    const auto f = build_family(n);
    const auto pts = eigenvalues_at(f, ub(rng));
    const auto& pt = pts[static_cast<std::size_t>(t) % pts.size()];
    const double e = equilibrium_residuals(pt).max_residual;
    const double d = divisibility_defect(pt);
    const double s = detail::max_abs(residues(pt));
    worst_on = std::max({worst_on, e, d, s});
    if (e < kOnLocusTolerance && d < kOnLocusTolerance && s < kOnLocusTolerance) ++on;

    const auto q = make_point(f, pt.b, pt.a + kOffLocusShift);
    const double e2 = equilibrium_residuals(q).max_residual;
    const double d2 = divisibility_defect(q);
    const double s2 = detail::max_abs(residues(q));
    weakest_off = std::min({weakest_off, e2, d2, s2});
    if (e2 > kOffLocusThreshold && d2 > kOffLocusThreshold && s2 > kOffLocusThreshold) ++off;
  }
  r.metric("on_locus_pass", on);
  r.metric("off_locus_fail", off);
  r.metric("samples", samples);
  r.metric("worst_on_residual", worst_on);
  r.metric("weakest_off_residual", weakest_off);
  r.pass = on == samples && off == samples;
  return r;
}

/// Exact proof in the quotient ring for n <= 4; numeric certificates at
/// random locus points for any n, with off-locus controls.
inline CheckReport check_identity(int n, int samples, std::uint64_t seed) {
  detail::require_n(n, 1, kDefaultFamilyCap, "verify identity");
  CheckReport r;
  r.kind = "identity";
  bool ok = true;
  if (n <= kExactCertificateMax) {
    const auto c = exact_certificate(n);
    r.metric("exact_proof", c.proof ? 1 : 0);
    r.notes.push_back("C* = " + c.C.to_string());
    ok = c.proof;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ub(-3, 3);
  const auto f = build_family(n);
  int on = 0, certified = 0, off_fail = 0, off = 0;
  double worst = 0, weakest_off = INFINITY;
  while (on < samples) {
    for (const auto& pt : eigenvalues_at(f, ub(rng))) {
      if (on >= samples) break;
      const auto cert = solve_certificate(pt);
      worst = std::max(worst, cert.residual);
      certified += cert.certified ? 1 : 0;
      ++on;
      const auto c2 = solve_certificate(make_point(f, pt.b, pt.a + kOffLocusShift));
      weakest_off = std::min(weakest_off, c2.residual);
      off_fail += (c2.residual > kOffLocusThreshold && !c2.certified) ? 1 : 0;
      ++off;
    }
  }
  r.metric("samples", on);
  r.metric("certified", certified);
  r.metric("worst_residual", worst);
  r.metric("off_locus_fail", off_fail);
  r.metric("weakest_off_residual", weakest_off);
  r.pass = ok && certified == on && off_fail == off;
  return r;
}

inline CheckReport check_constant(int n, std::uint64_t seed) {
  detail::require_n(n, 1, kDefaultFamilyCap, "verify constant");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ub(-2.5, 2.5);
  std::vector<double> bs;
  for (int i = 0; i < 5; ++i) bs.push_back(ub(rng));
  const auto c = verify_constant(n, bs);
  CheckReport r;
  r.kind = "constant";
  r.metric("exact", c.exact ? 1 : 0);
  r.metric("samples", c.samples);
  r.metric("max_rel_error", c.max_rel_error);
  r.pass = c.pass;
  return r;
}

inline CheckReport check_topweight(int n) {
  detail::require_n(n, 0, kDefaultFamilyCap, "verify topweight");
  const auto f = build_family(n);
  CheckReport r;
  r.kind = "topweight";
  r.notes.push_back("top weight part = " + top_weight_part(f.qstar).to_string());
  r.notes.push_back("product form    = " + top_weight_product(n).to_string());
  r.pass = top_weight_check(f);
  return r;
}

inline CheckReport check_discriminant(int n) {
  detail::require_n(n, 1, kDefaultFamilyCap, "verify discriminant");
  const auto d = discriminant_degree_check(build_family(n));
  CheckReport r;
  r.kind = "discriminant";
  r.metric("degree", d.degree);
  r.metric("expected", d.expected);
  r.pass = d.pass;
  return r;
}

inline CheckReport check_asymptotics(int n, double b, double tol = 0.1) {
  detail::require_n(n, 0, kDefaultFamilyCap, "verify asymptotics");
  const auto a = asymptotic_k_check(build_family(n), b);
  CheckReport r;
  r.kind = "asymptotics";
  r.metric("b", b);
  r.metric("exact", a.exact ? 1 : 0);
  r.metric("max_abs", a.max_abs);
  for (std::size_t k = 0; k < a.scaled.size(); ++k) r.metric("scaled_" + std::to_string(k), a.scaled[k]);
  r.pass = a.exact ? a.max_abs == 0 : a.max_abs < tol;
  return r;
}

inline CheckReport check_reality(int J, double b, int count, const ShootingConfig& c = {}) {
  const auto rep = reality_check(J, b, count, c);
  CheckReport r;
  r.kind = "reality";
  r.metric("J", J);
  r.metric("b", b);
  for (std::size_t i = 0; i < rep.non_qes.size(); ++i) r.metric("lambda_" + std::to_string(i), rep.non_qes[i]);
  r.metric("max_dual_diff", rep.max_dual_diff);
  r.metric("max_imag", rep.max_imag);
  r.metric("complex_pair", rep.complex_pair ? 1 : 0);
  r.pass = rep.pass;
  return r;
}

}  // namespace qes

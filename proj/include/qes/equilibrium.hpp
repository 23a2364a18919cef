#pragma once

// Three equivalent tests that y = p e^h with h' = z^2 - b is elementary:
// divisibility of p'' + 2h'p' by p, vanishing residues of p^{-2} e^{-2h},
// and the electrostatic balance of the zeros of p.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qes/errors.hpp"
#include "qes/qes_family.hpp"
#include "qes/roots.hpp"

namespace qes {

inline constexpr double kClusterTolerance = 1e-6;

struct EquilibriumReport {
  QESPoint point;
  std::vector<cplx> roots;
  std::vector<cplx> residuals;
  double max_residual = 0;
};

namespace detail {

using lcplx = std::complex<long double>;

/// Ascending coefficients of p from a point's descending pcoeffs.
inline std::vector<lcplx> ascending_p(const QESPoint& pt) {
  std::vector<lcplx> c(pt.pcoeffs.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const cplx& v = pt.pcoeffs[pt.pcoeffs.size() - 1 - i];
    c[i] = lcplx(v.real(), v.imag());
  }
  return c;
}

inline std::vector<lcplx> derivative(const std::vector<lcplx>& c) {
  std::vector<lcplx> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long double>(i));
  return d;
}

inline void check_separation(const std::vector<cplx>& roots, double tol) {
  double scale = 1;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      const double d = std::abs(roots[i] - roots[j]);
      if (d < tol * scale) {
        std::ostringstream os;
        os << "clustered roots z" << i << " = " << roots[i] << " and z" << j << " = " << roots[j]
           << " at distance " << d;
        throw NumericError(os.str());
      }
    }
  }
}

}  // namespace detail

/// Zeros of p_n at the point, sorted by (real, imaginary).
inline std::vector<cplx> point_roots(const QESPoint& pt) {
  if (pt.n == 0) return {};
  return complex_roots(detail::ascending_p(pt));
}

inline EquilibriumReport equilibrium_residuals(const QESPoint& pt, double cluster_tol = kClusterTolerance) {
  EquilibriumReport rep;
  rep.point = pt;
  rep.roots = point_roots(pt);
  detail::check_separation(rep.roots, cluster_tol);
  const detail::lcplx b(pt.b.real(), pt.b.imag());
  for (std::size_t k = 0; k < rep.roots.size(); ++k) {
    const detail::lcplx zk(rep.roots[k].real(), rep.roots[k].imag());
    detail::lcplx s = zk * zk - b;
    for (std::size_t j = 0; j < rep.roots.size(); ++j) {
      if (j != k) s += 1.0L / (zk - detail::lcplx(rep.roots[j].real(), rep.roots[j].imag()));
    }
    rep.residuals.emplace_back(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    rep.max_residual = std::max(rep.max_residual, static_cast<double>(std::abs(s)));
  }
  return rep;
}

/// Remainder of p'' + 2(z^2 - b)p' modulo p, max coefficient relative to the
/// largest dividend coefficient.
inline double divisibility_defect(const QESPoint& pt) {
  using detail::lcplx;
  const auto p = detail::ascending_p(pt);
  if (p.size() <= 1) return 0;
  const auto d1 = detail::derivative(p);
  const auto d2 = detail::derivative(d1);
  const lcplx b(pt.b.real(), pt.b.imag());
  std::vector<lcplx> num(p.size() + 1, lcplx(0));
  for (std::size_t i = 0; i < d2.size(); ++i) num[i] += d2[i];
  for (std::size_t i = 0; i < d1.size(); ++i) {
    num[i + 2] += 2.0L * d1[i];
    num[i] -= 2.0L * b * d1[i];
  }
  long double scale = 0;
  for (const auto& c : num) scale = std::max(scale, std::abs(c));
  // p is monic.
  const std::size_t dp = p.size() - 1;
  for (std::size_t k = num.size(); k-- > dp;) {
    const lcplx f = num[k];
    for (std::size_t j = 0; j <= dp; ++j) num[k - dp + j] -= f * p[j];
  }
  long double rem = 0;
  for (std::size_t i = 0; i < dp; ++i) rem = std::max(rem, std::abs(num[i]));
  if (!std::isfinite(static_cast<double>(rem))) throw NumericError("divisibility_defect: overflow");
  if (scale == 0) return 0;
  return static_cast<double>(rem / scale);
}

/// Residue kernel -(p'' + 2h'p')/p'^3 at the k-th zero of p; the residue of
/// p^{-2} e^{-2h} there is this times e^{-2h(z_k)}.
inline cplx residue_at(const QESPoint& pt, std::size_t k, double tol = 1e-12) {
  using detail::lcplx;
  const auto roots = point_roots(pt);
  if (k >= roots.size()) throw UsageError("residue_at: root index out of range");
  const auto p = detail::ascending_p(pt);
  const auto d1 = detail::derivative(p);
  const auto d2 = detail::derivative(d1);
  const lcplx z(roots[k].real(), roots[k].imag());
  const lcplx b(pt.b.real(), pt.b.imag());
  const lcplx p1 = detail::horner(d1, z);
  const lcplx p2 = d2.empty() ? lcplx(0) : detail::horner(d2, z);
  if (std::abs(p1) < tol) throw NumericError("residue_at: p'(z_k) vanishes, root not simple");
  const lcplx r = -(p2 + 2.0L * (z * z - b) * p1) / (p1 * p1 * p1);
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

inline std::vector<cplx> residues(const QESPoint& pt) {
  std::vector<cplx> out;
  for (std::size_t k = 0; k < static_cast<std::size_t>(pt.n); ++k) out.push_back(residue_at(pt, k));
  return out;
}

/// Arbitrary monic p (descending coefficients) with parameter b, for probing
/// the tests away from the family.
inline QESPoint custom_point(std::vector<cplx> descending, cplx b) {
  if (descending.empty() || descending[0] != cplx(1, 0)) throw UsageError("custom_point: p must be monic");
  QESPoint pt;
  pt.n = static_cast<int>(descending.size()) - 1;
  pt.b = b;
  pt.a = pt.n > 0 ? descending[1] : cplx(0, 0);
  pt.lambda = b * b - 2.0 * pt.a;
  pt.pcoeffs = std::move(descending);
  return pt;
}

}  // namespace qes

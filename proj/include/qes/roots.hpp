#pragma once

// Real-root isolation with exact Sturm sequences, and simultaneous
// (Aberth-Ehrlich) iteration for all complex roots of a numeric polynomial.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "qes/errors.hpp"
#include "qes/poly.hpp"

namespace qes {

struct RootInterval {
  Rational lo;
  Rational hi;
  double midpoint() const { return to_double((lo + hi) / 2); }
  Rational width() const { return hi - lo; }
};

/// Sturm chain P, P', -rem(...), ... with each member scaled by a positive
/// constant so signs are preserved while coefficients stay small.
class SturmSequence {
 public:
  explicit SturmSequence(const UniPoly& p) {
    chain_.push_back(p);
    if (p.degree() <= 0) return;
    chain_.push_back(normalize(p.derivative()));
    while (chain_.back().degree() > 0) {
      UniPoly r = chain_[chain_.size() - 2].divmod(chain_.back()).second;
      if (r.is_zero()) break;
      chain_.push_back(normalize(-r));
    }
  }

  int variations(const Rational& x) const {
    int count = 0, last = 0;
    for (const auto& q : chain_) {
      const int s = q.sign_at(x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  /// Number of distinct real roots in (lo, hi].
  int count(const Rational& lo, const Rational& hi) const { return variations(lo) - variations(hi); }

 private:
  static UniPoly normalize(const UniPoly& q) {
    if (q.is_zero()) return q;
    return q * (1 / abs(q.leading()));
  }
  std::vector<UniPoly> chain_;
};

/// Cauchy bound: every complex root has |x| < bound.
inline Rational cauchy_root_bound(const UniPoly& p) {
  if (p.degree() < 1) return Rational(1);
  Rational m(0);
  const Rational lc = abs(p.leading());
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeff(i)) / lc));
  return m + 1;
}

/// Isolates every real root of a squarefree `p` in [lo, hi] and refines the
/// isolating intervals to width <= precision.
inline std::vector<RootInterval> isolate_real_roots(const UniPoly& p, const Rational& lo, const Rational& hi,
                                                    const Rational& precision) {
  if (p.is_zero()) throw UsageError("isolate_real_roots: zero polynomial");
  if (lo > hi) throw UsageError("isolate_real_roots: empty interval");
  if (precision <= 0) throw UsageError("isolate_real_roots: precision must be positive");
  if (p.degree() == 0) return {};
  const UniPoly g = gcd(p, p.derivative());
  if (g.degree() > 0) {
    throw UsageError("isolate_real_roots: polynomial not squarefree, repeated-root witness gcd = " +
                     g.to_string());
  }
  SturmSequence sturm(p);
  std::vector<RootInterval> out;

  // Intervals are half-open (l, r]; a root exactly at lo is handled first.
  if (p.sign_at(lo) == 0) out.push_back({lo, lo});
  struct Pending {
    Rational l, r;
    int n;
  };
  std::vector<Pending> stack{{lo, hi, sturm.count(lo, hi)}};
  std::vector<RootInterval> isolated;
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    if (cur.n == 0) continue;
    if (cur.n == 1) {
      isolated.push_back({cur.l, cur.r});
      continue;
    }
    Rational mid = (cur.l + cur.r) / 2;
    const int left = sturm.count(cur.l, mid);
    stack.push_back({mid, cur.r, cur.n - left});
    stack.push_back({cur.l, mid, left});
  }
  for (auto iv : isolated) {
    // Root in (l, r]; exact hits collapse the interval.
    if (p.sign_at(iv.hi) == 0) {
      out.push_back({iv.hi, iv.hi});
      continue;
    }
    // One simple root x0 in (lo, hi]: sign equals sign(hi) exactly on (x0, hi].
    const int shi = p.sign_at(iv.hi);
    while (iv.hi - iv.lo > precision) {
      Rational mid = (iv.lo + iv.hi) / 2;
      const int sm = p.sign_at(mid);
      if (sm == 0) {
        iv = {mid, mid};
        break;
      }
      if (sm == shi) {
        iv.hi = mid;
      } else {
        iv.lo = mid;
      }
    }
    out.push_back(iv);
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
  return out;
}

namespace detail {

using lcplx = std::complex<long double>;

inline lcplx horner(const std::vector<lcplx>& c, lcplx x) {
  lcplx acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline long double horner_abs(const std::vector<lcplx>& c, long double r) {
  long double acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

}  // namespace detail

struct ComplexRootOptions {
  double tol = 1e-14;
  int max_iterations = 800;
};

/// All roots of a numeric polynomial (ascending coefficients) by Aberth-Ehrlich
/// iteration, sorted by (real, imaginary).
inline std::vector<cplx> complex_roots(const std::vector<std::complex<long double>>& coeffs_in,
                                       ComplexRootOptions opt = {}) {
  using detail::lcplx;
  std::vector<lcplx> c = coeffs_in;
  long double scale = 0;
  for (const auto& x : c) scale = std::max(scale, std::abs(x));
  while (!c.empty() && std::abs(c.back()) <= 1e-300L * (1 + scale)) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) throw UsageError("complex_roots: degree must be at least 1");
  const lcplx lead = c.back();
  for (auto& x : c) x /= lead;
  // Fujiwara bound; the variable is rescaled by it so that monic
  // polynomials with very large lower coefficients stay balanced.
  long double rho = 0;
  for (int i = 0; i < deg; ++i) {
    const long double t = std::pow(std::abs(c[static_cast<std::size_t>(i)]), 1.0L / (deg - i));
    rho = std::max(rho, i == 0 ? t / std::pow(2.0L, 1.0L / deg) : t);
  }
  if (!std::isfinite(rho) || rho > 1e100L) {
    throw UsageError("complex_roots: leading coefficient numerically negligible");
  }
  if (!(rho > 0)) rho = 1;
  for (int i = 0; i <= deg; ++i) c[static_cast<std::size_t>(i)] /= std::pow(rho, static_cast<long double>(deg - i));

  // Zero roots are peeled off exactly.
  int zeros = 0;
  while (zeros < deg && c[static_cast<std::size_t>(zeros)] == lcplx(0)) ++zeros;
  std::vector<lcplx> q(c.begin() + zeros, c.end());
  const int d = deg - zeros;
  std::vector<cplx> roots(static_cast<std::size_t>(zeros), cplx(0, 0));

  if (d == 1) {
    const lcplx r = -q[0];
    roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  } else if (d > 1) {
    std::vector<lcplx> dq(static_cast<std::size_t>(d));
    for (int i = 1; i <= d; ++i) dq[static_cast<std::size_t>(i - 1)] = q[static_cast<std::size_t>(i)] * (long double)i;

    // Initial guesses on a circle of radius (|a0|)^(1/d), the geometric mean of
    // the root moduli, rotated off the axes.
    long double radius = std::pow(std::abs(q[0]), 1.0L / d);
    long double bound = 0;
    for (int i = 0; i < d; ++i) bound = std::max(bound, std::pow(std::abs(q[static_cast<std::size_t>(i)]), 1.0L / (d - i)));
    if (!(radius > 0) || radius < 1e-3L * bound) radius = bound * 0.5L;
    if (!(radius > 0)) radius = 1;
    std::vector<lcplx> z(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const long double th = 2 * std::numbers::pi_v<long double> * k / d + 0.4L;
      z[static_cast<std::size_t>(k)] = std::polar(radius, th);
    }
      int it = 0;
    for (; it < opt.max_iterations; ++it) {
      bool all = true;
      for (int k = 0; k < d; ++k) {
        auto& zk = z[static_cast<std::size_t>(k)];
        const lcplx pv = detail::horner(q, zk);
        const long double bw = detail::horner_abs(q, std::abs(zk));
        if (std::abs(pv) <= opt.tol * bw) {
          continue;
        }
        all = false;
        const lcplx dv = detail::horner(dq, zk);
        const lcplx ratio = pv / dv;
        lcplx s = 0;
        for (int j = 0; j < d; ++j) {
          if (j != k) s += 1.0L / (zk - z[static_cast<std::size_t>(j)]);
        }
        lcplx step = ratio / (1.0L - ratio * s);
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
        zk -= step;
      }
      if (all) break;
    }
    if (it == opt.max_iterations) {
      long double worst = 0;
      for (const auto& zk : z) {
        worst = std::max(worst, std::abs(detail::horner(q, zk)) / detail::horner_abs(q, std::abs(zk)));
      }
      std::ostringstream os;
      os << "complex_roots: no convergence after " << opt.max_iterations
         << " iterations, worst relative residual " << static_cast<double>(worst);
      throw NumericError(os.str());
    }
    // Two Newton polishing steps per root.
    for (auto& zk : z) {
      for (int pass = 0; pass < 2; ++pass) {
        const lcplx dv = detail::horner(dq, zk);
        if (std::abs(dv) == 0) break;
        const lcplx step = detail::horner(q, zk) / dv;
        if (std::abs(step) < 1e-3L * (1 + std::abs(zk))) zk -= step;
      }
      roots.emplace_back(static_cast<double>(zk.real()), static_cast<double>(zk.imag()));
    }
  }
  for (auto& r : roots) r *= static_cast<double>(rho);
  long double rmax = 1;
  for (const auto& r : roots) rmax = std::max<long double>(rmax, std::abs(r));
  const double eps = 1e-10 * static_cast<double>(rmax);
  std::sort(roots.begin(), roots.end(), [eps](const cplx& x, const cplx& y) {
    if (std::abs(x.real() - y.real()) > eps) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots;
}

inline std::vector<cplx> complex_roots(const std::vector<cplx>& coeffs, ComplexRootOptions opt = {}) {
  std::vector<std::complex<long double>> c(coeffs.begin(), coeffs.end());
  return complex_roots(c, opt);
}

inline std::vector<cplx> complex_roots(const UniPoly& p, ComplexRootOptions opt = {}) {
  std::vector<std::complex<long double>> c;
  for (const auto& x : p.coeffs()) c.emplace_back(to_long_double(x), 0);
  return complex_roots(c, opt);
}

}  // namespace qes

#pragma once

// The real QES spectral locus Q*(b, a) = 0, lambda = b^2 - 2a: branch tracing
// by pseudo-arclength continuation with classification by the number of real
// zeros of p_n, critical points of lambda, and large-b structure checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "qes/errors.hpp"
#include "qes/poly.hpp"
#include "qes/qes_family.hpp"
#include "qes/resultant.hpp"
#include "qes/roots.hpp"

namespace qes {

inline constexpr double kRealZeroTolerance = 1e-6;

/// Number of real zeros of p_n at real (b, a); a zero is real when
/// |Im z| < tol (1 + |z|).
inline int real_zero_count(int n, double b, double a, double tol = kRealZeroTolerance) {
  if (n == 0) return 0;
  const auto desc = p_coefficients(n, cplx(a, 0), cplx(b, 0));
  std::vector<cplx> asc(desc.rbegin(), desc.rend());
  int count = 0;
  for (const auto& z : complex_roots(asc)) {
    if (std::abs(z.imag()) < tol * (1 + std::abs(z))) ++count;
  }
  return count;
}

/// Branch index m with n - 2m real zeros.
inline int branch_index(int n, double b, double a) { return (n - real_zero_count(n, b, a)) / 2; }

struct BranchSample {
  double b = 0;
  double lambda = 0;
  double a = 0;
  int real_zeros = 0;
  int arc = 0;     ///< connected piece inside the window
  double s = 0;    ///< arclength in the (b, a) plane along the arc
};

struct Branch {
  int n = 0;
  int m = 0;
  std::vector<BranchSample> samples;
  int arcs = 0;
};

struct TraceOptions {
  double h_init = 0.02;
  double h_max = 0.1;
  double h_min = 1e-7;
  int max_samples = 200000;
};

namespace detail {

/// Q*(b, a) with partial derivatives, evaluated in long double.
class RealBiPoly {
 public:
  explicit RealBiPoly(const BiPoly& p) {
    for (const auto& [key, c] : p.terms()) terms_.push_back({key.first, key.second, to_long_double(c)});
  }

  struct Value {
    long double f, fb, fa, scale;
  };

  Value eval(long double b, long double a) const {
    Value v{0, 0, 0, 0};
    for (const auto& t : terms_) {
      const long double am = std::pow(a, t.m), bk = std::pow(b, t.k);
      const long double term = t.c * am * bk;
      v.f += term;
      v.scale += std::abs(term);
      if (t.m > 0) v.fa += t.c * t.m * std::pow(a, t.m - 1) * bk;
      if (t.k > 0) v.fb += t.c * t.k * am * std::pow(b, t.k - 1);
    }
    return v;
  }

 private:
  struct Term {
    int m, k;
    long double c;
  };
  std::vector<Term> terms_;
};

struct Pt {
  long double b, a;
};

/// Newton on {Q* = 0, t . (x - xp) = 0}; returns false on stall.
inline bool correct(const RealBiPoly& q, Pt& x, const Pt& xp, long double tb, long double ta) {
  for (int it = 0; it < 20; ++it) {
    const auto v = q.eval(x.b, x.a);
    const long double g = tb * (x.b - xp.b) + ta * (x.a - xp.a);
    const long double det = v.fb * ta - v.fa * tb;
    if (det == 0) return false;
    const long double db = (-v.f * ta + g * v.fa) / det;
    const long double da = (-g * v.fb + v.f * tb) / det;
    x.b += db;
    x.a += da;
    if (std::abs(db) + std::abs(da) < 1e-13L * (1 + std::abs(x.b) + std::abs(x.a))) {
      const auto w = q.eval(x.b, x.a);
      return std::abs(w.f) <= 1e-11L * w.scale;
    }
  }
  return false;
}

/// Real roots a of Q*(b, .), polished.
inline std::vector<long double> real_roots_at(const BiPoly& qstar, double b) {
  const auto c = qstar.numeric_coeffs_in(Var::a, cplx(b, 0));
  std::vector<long double> out;
  const RealBiPoly q(qstar);
  for (const auto& r : complex_roots(c)) {
    if (std::abs(r.imag()) > 1e-7 * (1 + std::abs(r))) continue;
    long double a = r.real();
    for (int it = 0; it < 4; ++it) {
      const auto v = q.eval(b, a);
      if (v.fa == 0) break;
      a -= v.f / v.fa;
    }
    out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](long double x, long double y) { return std::abs(x - y) < 1e-7L * (1 + std::abs(x)); }),
            out.end());
  return out;
}

}  // namespace detail

/// Traces every arc of the branch Gamma_{n,m} inside b in [b_lo, b_hi]. Arcs
/// start from the real roots of Q*(b_end, .) in the class m at either end of
/// the window and run until they leave it; turning points in b are passed by
/// the arclength parametrization.
inline Branch trace_branch(const QESFamily& f, int m, double b_lo, double b_hi, TraceOptions opt = {}) {
  const int n = f.n;
  if (m < 0 || m > n / 2) throw UsageError("trace_branch: m must lie in [0, n/2]");
  if (!(b_lo < b_hi)) throw UsageError("trace_branch: empty b range");
  Branch br;
  br.n = n;
  br.m = m;
  const detail::RealBiPoly q(f.qstar);
  const double edge_eps = 1e-9 * (1 + std::max(std::abs(b_lo), std::abs(b_hi)));

  struct Seed {
    long double b, a;
    int dir;  ///< +1 moves into larger b
  };
  std::vector<Seed> seeds;
  for (long double a : detail::real_roots_at(f.qstar, b_hi)) {
    if (branch_index(n, b_hi, static_cast<double>(a)) == m) seeds.push_back({b_hi, a, -1});
  }
  for (long double a : detail::real_roots_at(f.qstar, b_lo)) {
    if (branch_index(n, b_lo, static_cast<double>(a)) == m) seeds.push_back({b_lo, a, +1});
  }

  // A seed is covered when an earlier arc ended on it; a seed at a vertical
  // tangent (turning point on the window edge) is only passed near, so it
  // counts as covered when it lies within a chord's sagitta of the polyline.
  auto visited = [&](const Seed& s) {
    const auto v = q.eval(s.b, s.a);
    const bool vertical = std::abs(v.fa) < 1e-8L * (std::abs(v.fb) + 1e-300L);
    const double tol = (vertical ? 1e-2 : 1e-6) * (1 + std::abs(static_cast<double>(s.a)));
    const double sb = static_cast<double>(s.b), sa = static_cast<double>(s.a);
    for (std::size_t i = 0; i < br.samples.size(); ++i) {
      const auto& x = br.samples[i];
      if (std::hypot(x.b - sb, x.a - sa) < tol) return true;
      if (i + 1 < br.samples.size() && br.samples[i + 1].arc == x.arc) {
        const auto& y = br.samples[i + 1];
        const double db = y.b - x.b, da = y.a - x.a;
        const double len2 = db * db + da * da;
        const double t = len2 > 0 ? std::clamp(((sb - x.b) * db + (sa - x.a) * da) / len2, 0.0, 1.0) : 0.0;
        if (std::hypot(x.b + t * db - sb, x.a + t * da - sa) < tol) return true;
      }
    }
    return false;
  };
  auto push = [&](long double b, long double a, int arc, double s) {
    const double bd = static_cast<double>(b), ad = static_cast<double>(a);
    br.samples.push_back({bd, bd * bd - 2 * ad, ad, real_zero_count(n, bd, ad), arc, s});
  };

  for (const auto& seed : seeds) {
    if (visited(seed)) continue;
    const int arc = br.arcs++;
    detail::Pt x{seed.b, seed.a};
    push(x.b, x.a, arc, 0);
    // Initial tangent oriented into the window; at a vertical tangent the
    // a-direction is taken along the larger root side.
    auto v = q.eval(x.b, x.a);
    long double tb = -v.fa, ta = v.fb;
    long double norm = std::hypot(tb, ta);
    if (norm == 0) throw NumericError("trace_branch: singular point of the locus at a seed");
    tb /= norm;
    ta /= norm;
    if (std::abs(tb) > 1e-12L) {
      if (tb * seed.dir < 0) {
        tb = -tb;
        ta = -ta;
      }
    } else if (ta < 0) {
      tb = -tb;
      ta = -ta;
    }
    double h = opt.h_init, s = 0;
    for (int count = 0;; ++count) {
      if (count > opt.max_samples) throw NumericError("trace_branch: sample cap exceeded");
      detail::Pt xp{x.b + h * tb, x.a + h * ta};
      detail::Pt y = xp;
      const bool ok = detail::correct(q, y, xp, tb, ta);
      bool accept = ok;
      const bool outside = ok && (y.b < b_lo - edge_eps || y.b > b_hi + edge_eps);
      if (ok && !outside) accept = branch_index(n, static_cast<double>(y.b), static_cast<double>(y.a)) == m;
      if (!accept) {
        h *= 0.5;
        if (h < opt.h_min) {
          std::ostringstream os;
          os << "trace_branch: " << (ok ? "classification flip without a detected singularity" : "Newton stall")
             << " near (b, a) = (" << static_cast<double>(x.b) << ", " << static_cast<double>(x.a) << ")";
          throw NumericError(os.str());
        }
        continue;
      }
      if (outside) {
        // Land exactly on the window edge.
        const long double edge = y.b < b_lo ? b_lo : b_hi;
        const long double t = (edge - x.b) / (y.b - x.b);
        long double a = x.a + t * (y.a - x.a);
        for (int it = 0; it < 30; ++it) {
          const auto w = q.eval(edge, a);
          if (w.fa == 0) break;
          const long double step = w.f / w.fa;
          a -= step;
          if (std::abs(step) < 1e-15L * (1 + std::abs(a))) break;
        }
        s += static_cast<double>(std::hypot(edge - x.b, a - x.a));
        push(edge, a, arc, s);
        break;
      }
      s += static_cast<double>(std::hypot(y.b - x.b, y.a - x.a));
      x = y;
      push(x.b, x.a, arc, s);
      // New tangent, continuing the old orientation.
      v = q.eval(x.b, x.a);
      long double nb = -v.fa, na = v.fb;
      norm = std::hypot(nb, na);
      if (norm == 0) throw NumericError("trace_branch: singular point of the locus");
      nb /= norm;
      na /= norm;
      if (nb * tb + na * ta < 0) {
        nb = -nb;
        na = -na;
      }
      tb = nb;
      ta = na;
      h = std::min(opt.h_max * (1 + std::sqrt(std::abs(static_cast<double>(x.b)))) , h * 1.5);
    }
  }
  return br;
}

// ---------------------------------------------------------------------------

struct OrderingReport {
  int n = 0;
  double b = 0;
  std::vector<std::vector<double>> lambdas;  ///< real lambdas per class m
  bool conclusive = false;
  bool pass = false;
};

/// At large b: every lambda on Gamma_{n,m+1} exceeds every lambda on Gamma_{n,m}.
inline OrderingReport branch_ordering_check(const QESFamily& f, double b_large) {
  if (!(b_large > 0)) throw UsageError("branch_ordering_check: b must be positive");
  OrderingReport rep;
  rep.n = f.n;
  rep.b = b_large;
  rep.lambdas.assign(static_cast<std::size_t>(f.n / 2 + 1), {});
  for (long double a : detail::real_roots_at(f.qstar, b_large)) {
    const int m = branch_index(f.n, b_large, static_cast<double>(a));
    rep.lambdas.at(static_cast<std::size_t>(m)).push_back(b_large * b_large - 2 * static_cast<double>(a));
  }
  rep.conclusive = std::all_of(rep.lambdas.begin(), rep.lambdas.end(), [](const auto& v) { return !v.empty(); });
  rep.pass = rep.conclusive;
  for (std::size_t m = 0; rep.conclusive && m + 1 < rep.lambdas.size(); ++m) {
    const double hi = *std::max_element(rep.lambdas[m].begin(), rep.lambdas[m].end());
    const double lo = *std::min_element(rep.lambdas[m + 1].begin(), rep.lambdas[m + 1].end());
    rep.pass = rep.pass && lo > hi;
  }
  return rep;
}

/// Number of distinct zero-count classes among the real QES points at b.
inline int branch_count_at(const QESFamily& f, double b) {
  std::vector<int> ms;
  for (long double a : detail::real_roots_at(f.qstar, b)) ms.push_back(branch_index(f.n, b, static_cast<double>(a)));
  std::sort(ms.begin(), ms.end());
  return static_cast<int>(std::unique(ms.begin(), ms.end()) - ms.begin());
}

// ---------------------------------------------------------------------------

struct CriticalPoint {
  double b = 0;
  double lambda = 0;
  double a = 0;
  RootInterval b_interval;
};

/// Real points with Q = dQ/dlambda = 0 and b in [lo, hi]: real roots of the
/// exact discriminant in lambda, each paired with its real double root.
inline std::vector<CriticalPoint> qes_critical_points(const QESFamily& f, const Rational& lo, const Rational& hi) {
  std::vector<CriticalPoint> out;
  if (f.n == 0) return out;
  const UniPoly disc = discriminant_in(f.qlambda, Var::lambda);
  if (disc.is_zero()) throw NumericError("qes_critical_points: discriminant vanishes identically");
  const UniPoly sf = squarefree_part(disc);
  const auto dq = f.qlambda.derivative(Var::lambda);
  for (const auto& iv : isolate_real_roots(sf, lo, hi, make_rational(1, Integer("1000000000000000")))) {
    const double b = iv.midpoint();
    const auto c = dq.numeric_coeffs_in(Var::lambda, cplx(b, 0));
    double best = std::numeric_limits<double>::infinity();
    cplx pick;
    for (const auto& r : complex_roots(c)) {
      const double v = std::abs(f.qlambda.eval(r, cplx(b, 0)));
      if (v < best) {
        best = v;
        pick = r;
      }
    }
    if (std::abs(pick.imag()) > 1e-6 * (1 + std::abs(pick))) continue;
    out.push_back({b, pick.real(), (b * b - pick.real()) / 2, iv});
  }
  return out;
}

// ---------------------------------------------------------------------------

/// prod_{k=0}^{n} (a - (n-2k) sqrt(b)) with the +-(n-2k) factors paired.
inline BiPoly top_weight_product(int n) {
  if (n < 0) throw UsageError("top_weight_product: n must be nonnegative");
  BiPoly prod = BiPoly::constant(1);
  for (int k = 0; 2 * k < n; ++k) {
    const long c = static_cast<long>(n - 2 * k);
    BiPoly factor;
    factor.add_term(2, 0, 1);
    factor.add_term(0, 1, -c * c);
    prod = prod * factor;
  }
  if (n % 2 == 0) prod = prod * BiPoly::variable(Var::a);
  return prod;
}

inline bool top_weight_check(const QESFamily& f) {
  return top_weight_part(f.qstar) == top_weight_product(f.n);
}

struct DiscriminantDegree {
  int degree = 0;
  int expected = 0;
  bool pass = false;
};

inline DiscriminantDegree discriminant_degree_check(const QESFamily& f) {
  if (f.n < 1) throw UsageError("discriminant_degree_check: n >= 1 required");
  DiscriminantDegree d;
  d.degree = discriminant_in_a(f.qstar).degree();
  d.expected = f.n * (f.n + 1) / 2;
  d.pass = d.degree == d.expected;
  return d;
}

struct AsymptoticReport {
  double b = 0;
  bool exact = false;  ///< Q* equals its top-weight part, residuals are exactly 0
  std::vector<double> scaled;     ///< (lambda_k - b^2)/sqrt(b)
  std::vector<double> residuals;  ///< scaled - (2(2k+1) - 2(n+1))
  double max_abs = 0;
};

/// Sorted QES eigenvalues at large b against lambda_k = b^2 + (2(2k+1) - 2J) sqrt(b).
inline AsymptoticReport asymptotic_k_check(const QESFamily& f, double b) {
  if (!(b > 0)) throw UsageError("asymptotic_k_check: b must be positive");
  AsymptoticReport rep;
  rep.b = b;
  const int n = f.n;
  rep.exact = f.qstar == top_weight_part(f.qstar);
  const double rb = std::sqrt(b);
  const auto pts = rep.exact ? std::vector<QESPoint>{} : eigenvalues_at(f, b);
  for (int k = 0; k <= n; ++k) {
    double scaled;
    if (rep.exact) {
      // roots a = (n - 2k) sqrt(b); lambda ascending means a descending
      scaled = -2.0 * (n - 2 * k);
    } else {
      // (lambda - b^2)/sqrt(b) = -2a/sqrt(b), without cancellation
      scaled = (-2.0 * pts[static_cast<std::size_t>(k)].a / rb).real();
    }
    const double r = scaled - (2.0 * (2 * k + 1) - 2.0 * (n + 1));
    rep.scaled.push_back(scaled);
    rep.residuals.push_back(r);
    rep.max_abs = std::max(rep.max_abs, std::abs(r));
  }
  return rep;
}

}  // namespace qes

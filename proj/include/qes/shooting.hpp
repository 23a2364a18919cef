#pragma once

// Spectral determinant of w'' + (zeta^4 + 2b zeta^2 + 2iJ zeta + lambda) w = 0
// with decay along the rays arg zeta = -pi/6 and -5pi/6, by shooting.
//
// Each recessive solution starts at |zeta| = R from the formal solution
//   w ~ zeta^{J-1} exp(-i zeta^3/3 - i b zeta) sum_k d_k zeta^{-k},
//   2ik d_k = 2ib(J-k+1) d_{k-2} - (lambda - b^2) d_{k-1} - (J-k+2)(J-k+1) d_{k-3},
// and is integrated along the straight segment to the match point with an
// embedded Runge-Kutta-Fehlberg 7(8) pair. The state is rescaled whenever
// |w| exceeds the threshold; log|scale| is accumulated separately.
//
// For real b, J, lambda, PT symmetry gives w_2 = e^{-i pi(J-1)} conj(w_1(-conj zeta)),
// so e^{i pi(J-1)} W(w_1, w_2) is real; det is reported with that phase.

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qes/crossing.hpp"
#include "qes/errors.hpp"
#include "qes/identity.hpp"
#include "qes/precision.hpp"
#include "qes/qes_family.hpp"
#include "qes/roots.hpp"

// odeint looks for a nested value_type to find the scalar of a state; the
// multiprecision number defines one of its own, so pin it down.
namespace boost::numeric::odeint::detail {
template <>
struct extract_value_type<qes::QuadReal, void> {
  typedef qes::QuadReal type;
};
}  // namespace boost::numeric::odeint::detail

namespace qes {

struct ShootingConfig {
  double J = 1;
  double b = 0;
  double R = 12;             ///< start radius on each ray
  double rtol = 1e-10;       ///< integrator relative tolerance
  double renorm = 4;         ///< keep the largest state component within [1/renorm, renorm]
  bool auto_radius = true;   ///< raise R until zeta^4 dominates the rest of V by 10x
  std::optional<cplx> match_point;  ///< where the Wronskian is formed; default match_point_for(b)
  int precision_bits = 53;   ///< 53 (double), 64 (long double) or 113 (quad)
};

struct InitialData {
  cplx zeta;
  cplx w;
  cplx wp;
  double logscale = 0;  ///< true solution = e^{logscale} (w, wp)
  int terms = 0;        ///< formal-series terms used
};

struct DetSample {
  cplx lambda;
  cplx det;             ///< phase-aligned Wronskian, scaled by e^{-logscale}
  double logscale = 0;  ///< true |det| = |det| e^{logscale}
  double radius = 0;    ///< radius actually used

  /// log|det| including the scale.
  double log_abs() const { return std::log(std::abs(det)) + logscale; }
};

inline constexpr double kRayRight = -std::numbers::pi / 6;
inline constexpr double kRayLeft = -5 * std::numbers::pi / 6;

inline void validate(const ShootingConfig& c) {
  if (!std::isfinite(c.J) || !std::isfinite(c.b)) throw UsageError("shooting: J and b must be finite");
  if (!(c.R > 1)) throw UsageError("shooting: R must exceed 1");
  if (!(c.rtol > 0 && c.rtol <= 1e-3)) throw UsageError("shooting: rtol must be in (0, 1e-3]");
  if (!(c.renorm > 1)) throw UsageError("shooting: renormalization threshold must exceed 1");
  if (c.precision_bits != 53 && c.precision_bits != 64 && c.precision_bits != 113) {
    throw UsageError("shooting: precision_bits must be 53, 64 or 113, got " + std::to_string(c.precision_bits));
  }
}

/// Smallest radius >= R at which |zeta|^4 is at least 10x the other terms of V.
inline double effective_radius(const ShootingConfig& c, cplx lambda) {
  if (!c.auto_radius) return c.R;
  auto ok = [&](double r) {
    return r * r * r * r >= 10 * (2 * std::abs(c.b) * r * r + 2 * std::abs(c.J) * r + std::abs(lambda));
  };
  double r = c.R;
  while (!ok(r)) r += 1;
  return r;
}

/// Default match point: 0 for b <= 0, the well centre -i sqrt(b) for b > 0.
inline cplx match_point_for(double b) { return b > 0 ? cplx(0, -std::sqrt(b)) : cplx(0, 0); }

inline cplx match_point(const ShootingConfig& c) { return c.match_point ? *c.match_point : match_point_for(c.b); }

namespace detail {

/// Formal series value and derivative at zeta, with the exponential and the
/// power split off as (phase, log-modulus).
inline InitialData formal_solution(double J, double b, std::complex<long double> lam, std::complex<long double> z) {
  using C = std::complex<long double>;
  const C I(0, 1);
  const long double n = J - 1;
  std::vector<C> d{C(1)};
  C S = 1, Sp = 0;  // S = sum d_k z^{-k}; Sp = sum d_k (n-k) z^{-k-1}
  Sp = n / z;
  const C zi = 1.0L / z;
  C zk = 1;
  long double prev = 1;
  int used = 1;
  for (int k = 1; k < 120; ++k) {
    C t = -(lam - C(b * b)) * d[k - 1];
    if (k >= 2) t += 2.0L * I * C(b) * (n - k + 2) * d[k - 2];
    if (k >= 3) t -= (n - k + 3) * (n - k + 2) * d[k - 3];
    d.push_back(t / (2.0L * I * C(k)));
    zk *= zi;
    const C term = d[k] * zk;
    const long double mag = std::abs(term);
    if (k > 3 && mag > prev) break;  // asymptotic series: stop at the smallest term
    S += term;
    Sp += d[k] * (n - k) * zk * zi;
    used = k + 1;
    prev = mag;
    if (mag < 1e-21L * std::abs(S)) break;
  }
  // w = e^{g} z^n S, g = -i z^3/3 - i b z
  const C g = -I * z * z * z / 3.0L - I * C(b) * z;
  const C gp = -I * z * z - I * C(b);
  const C logpre = g + n * std::log(z);
  const C phase = std::exp(C(0, logpre.imag()));
  InitialData out;
  out.zeta = cplx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  const C w = phase * S, wp = phase * (gp * S + Sp);
  out.w = cplx(static_cast<double>(w.real()), static_cast<double>(w.imag()));
  out.wp = cplx(static_cast<double>(wp.real()), static_cast<double>(wp.imag()));
  out.logscale = static_cast<double>(logpre.real());
  out.terms = used;
  return out;
}

template <class Real>
struct ComplexOf {
  using type = std::complex<Real>;
};
template <>
struct ComplexOf<QuadReal> {
  using type = QuadComplex;
};

template <class Real>
struct Shot {
  typename ComplexOf<Real>::type w, wp;
  double logscale = 0;
};

template <class Real>
Shot<Real> integrate_to(const ShootingConfig& c, cplx lambda, const InitialData& init) {
  using C = typename ComplexOf<Real>::type;
  using State = std::array<Real, 4>;  // Re w, Im w, Re w', Im w'
  using std::abs;
  using std::log;
  namespace ode = boost::numeric::odeint;
  const cplx mp = match_point(c);
  const C z0(init.zeta.real(), init.zeta.imag()), z1(mp.real(), mp.imag());
  const Real L = abs(z1 - z0);
  const C dir = (z1 - z0) / L;
  const C lam(lambda.real(), lambda.imag());
  const Real bb = c.b, JJ = c.J;
  const C twoiJ(Real(0), 2 * JJ);
  auto rhs = [&](const State& x, State& dx, Real t) {
    const C z = z0 + t * dir;
    const C z2 = z * z;
    const C V = z2 * z2 + 2 * bb * z2 + twoiJ * z + lam;
    const C w(x[0], x[1]), wp(x[2], x[3]);
    const C d0 = dir * wp, d1 = -dir * V * w;
    dx[0] = d0.real();
    dx[1] = d0.imag();
    dx[2] = d1.real();
    dx[3] = d1.imag();
  };
  auto stepper = ode::make_controlled(static_cast<Real>(c.rtol * 1e-3), static_cast<Real>(c.rtol),
                                      ode::runge_kutta_fehlberg78<State, Real, State, Real>());
  State x{Real(init.w.real()), Real(init.w.imag()), Real(init.wp.real()), Real(init.wp.imag())};
  Shot<Real> out;
  out.logscale = init.logscale;
  Real t = 0, dt = Real(1e-3);
  const Real floor = L * Real(1e-13);
  long fails = 0;
  while (t < L) {
    if (t + dt > L) dt = L - t;
    if (stepper.try_step(rhs, x, t, dt) == ode::success) {
      Real m = 0;
      for (const auto& v : x) m = std::max<Real>(m, abs(v));
      if (m > c.renorm || m * c.renorm < 1) {
        for (auto& v : x) v /= m;
        out.logscale += static_cast<double>(log(m));
      }
      fails = 0;
    } else if (dt < floor || ++fails > 200) {
      const C z = z0 + t * dir;
      std::ostringstream os;
      os << "shooting: step-size collapse (stiffness) at zeta = (" << static_cast<double>(z.real()) << ", "
         << static_cast<double>(z.imag()) << ")";
      throw NumericError(os.str());
    }
  }
  out.w = C(x[0], x[1]);
  out.wp = C(x[2], x[3]);
  return out;
}

template <class Real>
DetSample spectral_det_impl(const ShootingConfig& c, cplx lambda) {
  const double R = effective_radius(c, lambda);
  InitialData i1, i2;
  {
    using C = std::complex<long double>;
    const C lam(lambda.real(), lambda.imag());
    i1 = formal_solution(c.J, c.b, lam, std::polar<long double>(R, kRayRight));
    i2 = formal_solution(c.J, c.b, lam, std::polar<long double>(R, kRayLeft));
  }
  const auto s1 = integrate_to<Real>(c, lambda, i1);
  const auto s2 = integrate_to<Real>(c, lambda, i2);
  using C = typename ComplexOf<Real>::type;
  using std::abs;
  using std::cos;
  using std::log;
  using std::sin;
  C W = s1.w * s2.wp - s1.wp * s2.w;
  const Real m = abs(W);
  double ls = s1.logscale + s2.logscale;
  if (m > 0) {
    W /= m;
    ls += static_cast<double>(log(m));
  }
  const Real th = boost::math::constants::pi<Real>() * static_cast<Real>(c.J - 1);
  W *= C(cos(th), sin(th));
  DetSample out;
  out.lambda = lambda;
  out.det = cplx(static_cast<double>(W.real()), static_cast<double>(W.imag()));
  out.logscale = ls;
  out.radius = R;
  return out;
}

}  // namespace detail

/// Turning points of V (zeros of zeta^4 + 2b zeta^2 + 2iJ zeta + lambda).
inline std::vector<cplx> turning_points(double J, double b, cplx lambda) {
  using C = std::complex<long double>;
  const std::vector<C> c{C(lambda.real(), lambda.imag()), C(0, 2 * J), C(2 * b), C(0), C(1)};
  return complex_roots(c);
}

/// Recessive data on the ray at `ray_angle`, radius R (not auto-raised).
inline InitialData recessive_init(double ray_angle, double R, const ShootingConfig& c, cplx lambda) {
  validate(c);
  const cplx z = std::polar(R, ray_angle);
  for (const auto& tp : turning_points(c.J, c.b, lambda)) {
    if (std::abs(tp - z) < 1) {
      std::ostringstream os;
      os << "recessive_init: turning point (" << tp.real() << ", " << tp.imag() << ") within 1 of the start point; "
         << "increase R";
      throw NumericError(os.str());
    }
  }
  return detail::formal_solution(c.J, c.b, std::complex<long double>(lambda.real(), lambda.imag()),
                                 std::polar<long double>(R, ray_angle));
}

inline DetSample spectral_det(const ShootingConfig& c, cplx lambda) {
  validate(c);
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw UsageError("spectral_det: lambda must be finite");
  if (c.precision_bits == 113) return detail::spectral_det_impl<QuadReal>(c, lambda);
  if (c.precision_bits == 64) return detail::spectral_det_impl<long double>(c, lambda);
  return detail::spectral_det_impl<double>(c, lambda);
}

inline DetSample spectral_det(double J, double b, cplx lambda, ShootingConfig c = {}) {
  c.J = J;
  c.b = b;
  return spectral_det(c, lambda);
}

inline constexpr double kDetRatioTolerance = 1e-4;
inline constexpr double kVerificationRtol = 1e-13;

/// Grid step for eigenvalue scans: level spacing grows like sqrt|b| in the
/// harmonic regimes, 0.05 otherwise.
inline double scan_step(double b) { return 0.05 * std::max(1.0, std::sqrt(std::abs(b)) / 2); }

/// |det(lambda)| over the larger of |det(lambda -+ delta)|.
inline double det_ratio(const ShootingConfig& c, cplx lambda, double delta = 1e-2) {
  const double m = spectral_det(c, lambda).log_abs();
  const double l = spectral_det(c, lambda - delta).log_abs();
  const double r = spectral_det(c, lambda + delta).log_abs();
  return std::exp(m - std::max(l, r));
}

struct Eigenvalue {
  double lambda = 0;
  double ratio = 0;  ///< det_ratio at the refined value
};

struct EigenReport {
  double lo = 0, hi = 0;
  std::vector<Eigenvalue> values;  ///< real eigenvalues, ascending
  int zero_count = -1;             ///< zeros of det in the box (argument principle)
  double box_lo = 0, box_hi = 0, box_h = 0;  ///< box [box_lo,box_hi] x [-box_h,box_h]
  int unexplained = 0;             ///< zeros in the box beyond the simple real ones found: non-real
                                   ///< pairs or real zeros of even multiplicity
  double max_imag_ratio = 0;       ///< max |Im det| over max |det| on the real grid (phase alignment)
};

/// Zeros of det inside the rectangle [lo,hi] x [-H,H], by the argument principle.
inline int zero_count(const ShootingConfig& c, double lo, double hi, double H) {
  if (!(hi > lo) || !(H > 0)) throw UsageError("zero_count: empty rectangle");
  const cplx corners[4] = {{lo, -H}, {hi, -H}, {hi, H}, {lo, H}};
  double total = 0;
  auto arg_at = [&](cplx l) { return std::arg(spectral_det(c, l).det); };
  for (int e = 0; e < 4; ++e) {
    const cplx p0 = corners[e], p1 = corners[(e + 1) % 4];
    // Adaptive bisection until each phase step is below pi/4.
    double a0 = arg_at(p0), a1 = arg_at(p1);
    struct Seg {
      double s0, s1, g0, g1;
      int depth;
    };
    std::vector<Seg> todo{{0, 1, a0, a1, 0}};
    while (!todo.empty()) {
      Seg sg = todo.back();
      todo.pop_back();
      double d = std::remainder(sg.g1 - sg.g0, 2 * std::numbers::pi);
      if ((std::abs(d) < std::numbers::pi / 4 && sg.depth >= 3) || sg.depth > 24) {
        if (sg.depth > 24) {
          const cplx at = p0 + sg.s0 * (p1 - p0);
          std::ostringstream os;
          os << "zero_count: determinant zero on or near the contour at lambda = (" << at.real() << ", " << at.imag()
             << ")";
          throw NumericError(os.str());
        }
        total += d;
        continue;
      }
      const double sm = 0.5 * (sg.s0 + sg.s1);
      const double gm = arg_at(p0 + sm * (p1 - p0));
      todo.push_back({sm, sg.s1, gm, sg.g1, sg.depth + 1});
      todo.push_back({sg.s0, sm, sg.g0, gm, sg.depth + 1});
    }
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

/// Real eigenvalues in [lo, hi]: sign changes of the phase-aligned determinant
/// on a uniform grid, refined by bracketing secant (TOMS 748).
inline EigenReport eigenvalues(const ShootingConfig& c, double lo, double hi, double step = 0.05, double H = 1.0,
                               bool count_zeros = true) {
  validate(c);
  if (!(hi > lo)) throw UsageError("eigenvalues: empty window");
  if (!(step > 0)) throw UsageError("eigenvalues: step must be positive");
  EigenReport rep;
  rep.lo = lo;
  rep.hi = hi;
  // (log|Im det|, log|det|) per grid point, for the phase-alignment check
  std::vector<std::pair<double, double>> logs;
  auto re = [&](double l) {
    const auto d = spectral_det(c, cplx(l, 0));
    logs.emplace_back(std::log(std::abs(d.det.imag())) + d.logscale, d.log_abs());
    return d.det.real();
  };
  const int N = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
  double x0 = lo, f0 = re(lo);
  for (int i = 1; i <= N; ++i) {
    const double x1 = lo + (hi - lo) * i / N;
    const double f1 = re(x1);
    if (f1 == 0 || (f0 < 0) != (f1 < 0)) {
      std::uintmax_t it = 100;
      auto tol = [](double u, double v) { return std::abs(u - v) <= 1e-12 * (1 + std::abs(u)); };
      const auto [u, v] = boost::math::tools::toms748_solve(re, x0, x1, f0, f1, tol, it);
      const double l = 0.5 * (u + v);
      if (l > lo && l <= hi) rep.values.push_back({l, det_ratio(c, l)});
    }
    x0 = x1;
    f0 = f1;
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& [li, la] : logs) top = std::max(top, la);
  for (const auto& [li, la] : logs) rep.max_imag_ratio = std::max(rep.max_imag_ratio, std::exp(li - top));
  if (count_zeros) {
    // An eigenvalue on a vertical edge stops the contour; step inward then.
    double blo = lo, bhi = hi;
    try {
      rep.zero_count = zero_count(c, blo, bhi, H);
    } catch (const NumericError&) {
      blo = lo + step / 3;
      bhi = hi - step / 3;
      rep.zero_count = zero_count(c, blo, bhi, H);
    }
    rep.box_lo = blo;
    rep.box_hi = bhi;
    rep.box_h = H;
    int inside = 0;
    for (const auto& e : rep.values) inside += (e.lambda > blo && e.lambda < bhi) ? 1 : 0;
    rep.unexplained = rep.zero_count - inside;
  }
  return rep;
}

inline EigenReport eigenvalues(double J, double b, double lo, double hi, ShootingConfig c = {}) {
  c.J = J;
  c.b = b;
  return eigenvalues(c, lo, hi, scan_step(b));
}

struct CrossingVerification {
  int n = 0;
  double b = 0;
  double lambda = 0;
  double ratio = 0;  ///< det_ratio of L_{-(n+1)} at (b, lambda)
  cplx C;            ///< identity constant at the QES point
  bool C_nonzero = false;
  bool pass = false;
};

/// Theorem-style check: at a QES/non-QES crossing the determinant of
/// L_{-(n+1)} vanishes.
inline CrossingVerification verify_crossing(int n, const CrossingPoint& cp, ShootingConfig c = {}) {
  CrossingVerification v;
  v.n = n;
  v.b = cp.b;
  v.lambda = cp.lambda;
  v.C = constant_law(build_family(n), cplx(cp.b, 0), cplx(cp.a, 0));
  v.C_nonzero = std::abs(v.C) > 1e-8;
  c.J = -(n + 1);
  c.b = cp.b;
  c.rtol = std::min(c.rtol, kVerificationRtol);
  v.ratio = det_ratio(c, cplx(cp.lambda, 0));
  v.pass = v.ratio < kDetRatioTolerance;
  return v;
}

struct RealityReport {
  double J = 0, b = 0;
  std::vector<double> qes;         ///< real QES eigenvalues excluded
  std::vector<double> non_qes;     ///< first `count` non-QES eigenvalues
  std::vector<double> dual;        ///< matching eigenvalues of L_{-J}
  double max_dual_diff = 0;
  double max_imag = 0;             ///< 0 when all found on the real axis
  bool complex_pair = false;
  bool pass = false;
};

namespace detail {

inline std::vector<cplx> qes_values(int J, double b) {
  std::vector<cplx> out;
  for (const auto& p : eigenvalues_at(build_family(J - 1), b)) out.push_back(p.lambda);
  return out;
}

/// Eigenvalue of the configured operator nearest to `guess` within +-w.
inline std::optional<double> refine_near(const ShootingConfig& c, double guess, double w) {
  const auto rep = eigenvalues(c, guess - w, guess + w, w / 4, 1.0, false);
  std::optional<double> best;
  for (const auto& e : rep.values) {
    if (!best || std::abs(e.lambda - guess) < std::abs(*best - guess)) best = e.lambda;
  }
  return best;
}

}  // namespace detail

/// First `count` non-QES eigenvalues of L_J (J a positive integer): real,
/// no complex pairs in the scanned boxes, and shared with L_{-J}.
inline RealityReport reality_check(int J, double b, int count, ShootingConfig c = {}, double tol = 1e-6) {
  if (J < 1 || J > 4) throw UsageError("reality_check: J must be in 1..4");
  if (count < 1 || count > 8) throw UsageError("reality_check: count must be in 1..8");
  RealityReport rep;
  rep.J = J;
  rep.b = b;
  const auto qes_all = detail::qes_values(J, b);
  for (const auto& q : qes_all) {
    if (std::abs(q.imag()) < 1e-9 * (1 + std::abs(q))) rep.qes.push_back(q.real());
  }
  c.J = J;
  c.b = b;
  c.rtol = std::min(c.rtol, kVerificationRtol);
  // Window edges are offset so they do not sit on integer QES values.
  double lo = -10.0371 - b * b, width = 5;
  const double cap = lo + 400;
  while (static_cast<int>(rep.non_qes.size()) < count && lo < cap) {
    const auto w = eigenvalues(c, lo, lo + width, scan_step(b));
    // Zeros in the box: the non-QES real ones found plus every QES root
    // (with multiplicity); any excess is a non-real non-QES pair.
    int expected = 0;
    for (const auto& q : qes_all) {
      expected += (q.real() > w.box_lo && q.real() < w.box_hi && std::abs(q.imag()) < w.box_h) ? 1 : 0;
    }
    for (const auto& e : w.values) {
      bool is_qes = false;
      for (double q : rep.qes) is_qes = is_qes || std::abs(q - e.lambda) < 1e-6 * (1 + std::abs(q));
      if (!is_qes) {
        expected += (e.lambda > w.box_lo && e.lambda < w.box_hi) ? 1 : 0;
        if (static_cast<int>(rep.non_qes.size()) < count) rep.non_qes.push_back(e.lambda);
      }
    }
    if (w.zero_count > expected) rep.complex_pair = true;
    lo += width;
  }
  ShootingConfig dual = c;
  dual.J = -J;
  bool all = static_cast<int>(rep.non_qes.size()) == count;
  for (double l : rep.non_qes) {
    const auto m = detail::refine_near(dual, l, 0.1);
    if (!m) {
      all = false;
      rep.dual.push_back(std::nan(""));
      rep.max_dual_diff = std::numeric_limits<double>::infinity();
      continue;
    }
    rep.dual.push_back(*m);
    rep.max_dual_diff = std::max(rep.max_dual_diff, std::abs(*m - l));
  }
  rep.pass = all && !rep.complex_pair && rep.max_imag < tol && rep.max_dual_diff < tol;
  return rep;
}

/// Lowest real eigenvalue at or above `lo` (scanning upward in windows).
inline std::optional<double> lowest_eigenvalue(const ShootingConfig& c, double lo, double span = 400, double width = 5) {
  for (double x = lo; x < lo + span; x += width) {
    const auto w = eigenvalues(c, x, x + width, scan_step(c.b), 1.0, false);
    if (!w.values.empty()) return w.values.front().lambda;
  }
  return std::nullopt;
}

struct QESConsistency {
  int n = 0;
  double b = 0;
  std::vector<cplx> lambdas;
  std::vector<double> ratios;
  double worst = 0;
  bool pass = false;
};

/// Every root of Q_{n+1}(b, .), real or complex, is a zero of the
/// determinant of L_{n+1}.
inline QESConsistency qes_consistency(int n, double b, ShootingConfig c = {}) {
  QESConsistency r;
  r.n = n;
  r.b = b;
  c.J = n + 1;
  c.b = b;
  c.rtol = std::min(c.rtol, kVerificationRtol);
  for (const auto& p : eigenvalues_at(build_family(n), b)) {
    r.lambdas.push_back(p.lambda);
    r.ratios.push_back(det_ratio(c, p.lambda));
    r.worst = std::max(r.worst, r.ratios.back());
  }
  r.pass = r.worst < kDetRatioTolerance;
  return r;
}

struct HarmonicReport {
  double b = 0;
  std::vector<double> expected;  ///< 2(2k+1) - 2J
  std::vector<double> measured;  ///< (lambda_k - b^2) / sqrt(b)
  double max_rel = 0;            ///< max |measured - expected| / max(1, |expected|)
};

/// Large positive b: lambda_k = b^2 + (2(2k+1) - 2J + o(1)) sqrt(b).
inline HarmonicReport harmonic_check(double J, double b, int levels, ShootingConfig c = {}) {
  if (!(b > 0)) throw UsageError("harmonic_check: b must be positive");
  HarmonicReport r;
  r.b = b;
  c.J = J;
  c.b = b;
  const double s = std::sqrt(b);
  for (int k = 0; k < levels; ++k) {
    const double e = 2 * (2 * k + 1) - 2 * J;
    r.expected.push_back(e);
    const auto w = eigenvalues(c, b * b + (e - 2) * s + 0.0173, b * b + (e + 2) * s, s / 20, 1.0, false);
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& v : w.values) {
      const double m = (v.lambda - b * b) / s;
      if (std::isnan(best) || std::abs(m - e) < std::abs(best - e)) best = m;
    }
    r.measured.push_back(best);
    r.max_rel = std::max(r.max_rel, std::isnan(best) ? std::numeric_limits<double>::infinity()
                                                     : std::abs(best - e) / std::max(1.0, std::abs(e)));
  }
  return r;
}

}  // namespace qes

#pragma once

// Level crossings of the QES branch Gamma_{n,n/2} with the non-QES spectrum:
// zeros of Phi_n(b) = int_gamma y^2 dz, y = p_n exp(z^3/3 - bz). With
// Phi_0(b) = 2^{2/3} i pi Ai(2^{2/3} b) and z^k -> (-D/2)^k, D = d/db,
//   Phi_n(b) = sum_k c_k (-2)^{-k} 2^{2k/3} [u_k Ai + v_k Ai'](2^{2/3} b)
// times 2^{2/3} i pi, which phi() drops.

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qes/airy.hpp"
#include "qes/errors.hpp"
#include "qes/locus.hpp"
#include "qes/qes_family.hpp"

namespace qes {

inline constexpr double kCrossingBracket = 1e-12;

struct CrossingPoint {
  int n = 0;
  int k = 0;  ///< 1-based, counted downward from b = 0
  double b = 0;
  double a = 0;
  double lambda = 0;    ///< b^2 - 2a
  double residual = 0;  ///< |phi| at b, relative to the local phi scale
  double bracket = 0;   ///< width of the final sign-change bracket
};

/// Evaluator for phi(n, .) with the family and the Airy reductions cached.
class PhiEvaluator {
 public:
  explicit PhiEvaluator(int n) : n_(n), f_(build_family(check_even(n))) {
    for (int k = 0; k <= 2 * n; ++k) red_.push_back(derivative_reduction(k));
  }

  int n() const { return n_; }
  const QESFamily& family() const { return f_; }

  /// Real root a(b) of Q*(b, .) with p_n free of real zeros (class m = n/2).
  double select_a(double b) const {
    std::vector<long double> hits;
    for (long double a : detail::real_roots_at(f_.qstar, b)) {
      if (real_zero_count(n_, b, static_cast<double>(a)) == 0) hits.push_back(a);
    }
    if (hits.empty()) {
      throw NumericError("phi: no real root of Q* in class m = " + std::to_string(n_ / 2) + " at b = " + fmt(b));
    }
    if (hits.size() > 1) {
      std::ostringstream os;
      os << "phi: ambiguous branch at b = " << fmt(b) << "; candidates a =";
      for (auto a : hits) os << " " << fmt(static_cast<double>(a));
      throw NumericError(os.str());
    }
    return static_cast<double>(hits.front());
  }

  double operator()(double b) const { return value(b, select_a(b)); }

  /// phi at b for a given branch value a.
  double value(double b, double a) const {
    const auto pc = p_coefficients(n_, cplx(a, 0), cplx(b, 0));  // descending
    std::vector<long double> asc(pc.size());
    for (std::size_t j = 0; j < pc.size(); ++j) asc[pc.size() - 1 - j] = pc[j].real();
    std::vector<long double> sq(2 * asc.size() - 1, 0.0L);
    for (std::size_t i = 0; i < asc.size(); ++i)
      for (std::size_t j = 0; j < asc.size(); ++j) sq[i + j] += asc[i] * asc[j];
    const long double c23 = std::cbrt(4.0L);  // 2^{2/3}
    const long double s = c23 * b;
    const AiryValue av = airy(static_cast<double>(s));
    long double acc = 0, scale = 1;
    for (std::size_t k = 0; k < sq.size(); ++k) {
      const auto& [u, v] = red_[k];
      const long double uk = eval_real(u, s), vk = eval_real(v, s);
      acc += sq[k] * scale * (uk * av.ai + vk * av.aip);
      scale *= -c23 / 2;
    }
    return static_cast<double>(acc);
  }

 private:
  static int check_even(int n) {
    if (n < 0 || n % 2 != 0) throw UsageError("phi: n must be even and nonnegative (odd n unsupported), got " + std::to_string(n));
    return n;
  }
  static long double eval_real(const UniPoly& p, long double x) {
    long double acc = 0;
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * x + to_long_double(*it);
    return acc;
  }
  static std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
  }

  int n_;
  QESFamily f_;
  std::vector<std::pair<UniPoly, UniPoly>> red_;
};

inline double phi(int n, double b) { return PhiEvaluator(n)(b); }

namespace detail {

/// Quarter of the local oscillation length of Ai(2^{2/3} b) in b, capped.
inline double crossing_step(double b) {
  const double c23 = std::cbrt(4.0);
  const double x = c23 * std::abs(b);
  return std::min(0.1, M_PI / (2 * c23 * std::sqrt(std::max(x, 1e-12))));
}

/// Number of zeros of Ai(2^{2/3} t) for t in [b, 0].
inline int airy_zero_count(double b) {
  const double x = -std::cbrt(4.0) * b;
  if (x <= 0) return 0;
  // Zeros of Ai at -((3pi/8)(4k-1))^{2/3} (leading order, accurate to 1e-2).
  int k = 0;
  while (std::pow(3 * M_PI / 8 * (4 * (k + 1) - 1), 2.0 / 3.0) <= x) ++k;
  return k;
}

}  // namespace detail

/// First `count` zeros of phi(n, .) scanning downward from b = 0.
inline std::vector<CrossingPoint> find_crossings(int n, int count, double step_factor = 1.0) {
  if (count < 0) throw UsageError("find_crossings: count must be nonnegative");
  const PhiEvaluator ph(n);
  std::vector<CrossingPoint> out;
  if (count == 0) return out;
  for (int attempt = 0; attempt < 4; ++attempt, step_factor /= 2) {
    out.clear();
    double b = 0, fb = ph(b);
    bool missed = false;
    while (static_cast<int>(out.size()) < count) {
      const double b2 = b - step_factor * detail::crossing_step(b);
      const double f2 = ph(b2);
      if (f2 == 0 || (f2 < 0) != (fb < 0)) {
        std::uintmax_t iters = 200;
        auto tol = [](double x, double y) { return std::abs(x - y) <= kCrossingBracket; };
        const auto [lo, hi] = boost::math::tools::toms748_solve([&](double t) { return ph(t); }, b2, b, f2, fb, tol, iters);
        CrossingPoint cp;
        cp.n = n;
        cp.k = static_cast<int>(out.size()) + 1;
        const double flo = ph(lo), fhi = ph(hi);
        cp.b = std::abs(flo) <= std::abs(fhi) ? lo : hi;
        cp.a = ph.select_a(cp.b);
        cp.lambda = cp.b * cp.b - 2 * cp.a;
        cp.residual = std::min(std::abs(flo), std::abs(fhi)) / (std::abs(fb) + std::abs(f2));
        cp.bracket = hi - lo;
        out.push_back(cp);
      }
      b = b2;
      fb = f2;
      // Zeros of phi interlace with those of Phi_0' and so track the Airy
      // zeros; falling more than one behind means a bracket was skipped.
      if (static_cast<int>(out.size()) + 1 < detail::airy_zero_count(b)) {
        missed = true;
        break;
      }
    }
    if (!missed) return out;
  }
  throw NumericError("find_crossings: sign changes keep falling behind the Airy zero count for n = " +
                     std::to_string(n));
}

}  // namespace qes

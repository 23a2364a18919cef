#pragma once

// Airy function Ai and its derivative on the real line. Maclaurin series for
// |x| <= 4.5; beyond, integral representations through the saddle points,
// integrated by Gauss-Kronrod in long double:
//   x > 0:  Ai(x)  = e^{-zeta}/pi int_0^inf e^{-sqrt(x) s^2} cos(s^3/3) ds
//   x < 0:  Ai(-X) = Im(I)/pi,  I = e^{i zeta} int exp(i sqrt(X) u^2 + u^3/3) du
// with zeta = (2/3)|x|^{3/2}, the second along rays u = r e^{i pi/4} and
// u = r e^{i 13pi/12} leaving the saddle t = i sqrt(X).

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "qes/errors.hpp"
#include "qes/poly.hpp"

namespace qes {

struct AiryValue {
  double x = 0;
  double ai = 0;
  double aip = 0;
  double error = 0;        ///< estimated absolute error of ai
  bool underflow = false;  ///< x beyond the representable decay; ai, aip set to 0
};

inline constexpr double kAirySeriesLimit = 4.5;
inline constexpr double kAiryUnderflow = 104.0;

namespace detail {

inline long double airy_c1() { return 1.0L / (std::cbrt(9.0L) * std::tgamma(2.0L / 3.0L)); }
inline long double airy_c2() { return 1.0L / (std::cbrt(3.0L) * std::tgamma(1.0L / 3.0L)); }

/// Ai, Ai' from the Maclaurin series Ai = c1 f - c2 g.
inline AiryValue airy_series(long double x) {
  long double f = 1, g = x, fp = 0, gp = 1;
  long double tf = 1, tg = x;  // current terms of f and g
  const long double x3 = x * x * x;
  long double mag = 1 + std::abs(x);
  for (int k = 1; k < 200; ++k) {
    // f: x^{3k} / prod (3j-1)(3j) ; g: x^{3k+1} / prod (3j)(3j+1)
    tf *= x3 / ((3.0L * k - 1) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1));
    f += tf;
    g += tg;
    fp += tf * (3.0L * k) / x;
    gp += tg * (3.0L * k + 1) / x;
    mag += std::abs(tf) + std::abs(tg);
    if (std::abs(tf) + std::abs(tg) < 1e-24L * (std::abs(f) + std::abs(g))) break;
  }
  if (x == 0) {
    fp = 0;
    gp = 1;
  }
  const long double c1 = airy_c1(), c2 = airy_c2();
  AiryValue v;
  v.x = static_cast<double>(x);
  v.ai = static_cast<double>(c1 * f - c2 * g);
  v.aip = static_cast<double>(c1 * fp - c2 * gp);
  v.error = static_cast<double>(4 * std::numeric_limits<long double>::epsilon() * mag);
  return v;
}

inline AiryValue airy_decaying(long double x) {
  using boost::math::quadrature::gauss_kronrod;
  const long double rx = std::sqrt(x), zeta = 2.0L / 3.0L * x * rx;
  const long double inf = std::numeric_limits<long double>::infinity();
  long double e1 = 0, e2 = 0;
  const long double i1 = gauss_kronrod<long double, 15>::integrate(
      [rx](long double s) { return std::exp(-rx * s * s) * std::cos(s * s * s / 3); }, 0.0L, inf, 20, 1e-17L, &e1);
  const long double i2 = gauss_kronrod<long double, 15>::integrate(
      [rx](long double s) { return (rx * std::cos(s * s * s / 3) + s * std::sin(s * s * s / 3)) * std::exp(-rx * s * s); },
      0.0L, inf, 20, 1e-17L, &e2);
  const long double pre = std::exp(-zeta) / std::numbers::pi_v<long double>;
  AiryValue v;
  v.x = static_cast<double>(x);
  v.ai = static_cast<double>(pre * i1);
  v.aip = static_cast<double>(-pre * i2);
  v.error = static_cast<double>(pre * (e1 + 1e-18L * std::abs(i1)));
  return v;
}

inline AiryValue airy_oscillatory(long double X) {
  using boost::math::quadrature::gauss_kronrod;
  using C = std::complex<long double>;
  const long double rx = std::sqrt(X), zeta = 2.0L / 3.0L * X * rx;
  const long double pi = std::numbers::pi_v<long double>;
  const C out_dir = std::polar(1.0L, pi / 4), in_dir = std::polar(1.0L, 13 * pi / 12);
  const C irx(0, rx);
  auto ray = [&](C dir, bool deriv, long double& err) {
    auto f = [&](long double r) -> C {
      const C u = r * dir;
      C val = std::exp(irx * u * u + u * u * u / 3.0L) * dir;
      if (deriv) val *= -(irx + u);
      return val;
    };
    // The Gaussian width is X^{-1/4}; integrate well past it.
    const long double T = 12 / std::sqrt(rx) + 6;
    return gauss_kronrod<long double, 15>::integrate(f, 0.0L, T, 20, 1e-17L, &err);
  };
  long double ea = 0, eb = 0, ec = 0, ed = 0;
  const C phase = std::polar(1.0L, zeta);
  const C I = phase * (ray(out_dir, false, ea) - ray(in_dir, false, eb));
  const C Ip = phase * (ray(out_dir, true, ec) - ray(in_dir, true, ed));
  AiryValue v;
  v.x = static_cast<double>(-X);
  v.ai = static_cast<double>(I.imag() / pi);
  v.aip = static_cast<double>(Ip.imag() / pi);
  v.error = static_cast<double>((ea + eb) / pi + 1e-18L);
  return v;
}

}  // namespace detail

inline AiryValue airy(double x) {
  if (!std::isfinite(x)) throw UsageError("airy: x must be finite");
  if (std::abs(x) <= kAirySeriesLimit) return detail::airy_series(x);
  if (x > kAiryUnderflow) {
    AiryValue v;
    v.x = x;
    v.underflow = true;
    return v;
  }
  if (x > 0) return detail::airy_decaying(x);
  return detail::airy_oscillatory(-static_cast<long double>(x));
}

/// Integral-representation value regardless of |x| (for overlap checks).
inline AiryValue airy_asymptotic(double x) {
  if (x > 0) return detail::airy_decaying(x);
  if (x < 0) return detail::airy_oscillatory(-static_cast<long double>(x));
  throw UsageError("airy_asymptotic: x = 0 has no saddle-point form");
}

inline AiryValue airy_maclaurin(double x) { return detail::airy_series(x); }

/// u_k, v_k with Ai^{(k)}(s) = u_k(s) Ai(s) + v_k(s) Ai'(s); polynomials in s
/// (tagged z).
inline std::pair<UniPoly, UniPoly> derivative_reduction(int k) {
  if (k < 0) throw UsageError("derivative_reduction: k must be nonnegative");
  UniPoly u = UniPoly::constant(1, Var::z), v(Var::z);
  const UniPoly s = UniPoly::identity(Var::z);
  for (int i = 0; i < k; ++i) {
    UniPoly nu = u.derivative() + s * v;
    UniPoly nv = u + v.derivative();
    u = std::move(nu);
    v = std::move(nv);
  }
  return {u, v};
}

}  // namespace qes

#pragma once

// Contour quadrature along the two-ray path gamma, from infinity at angle
// -pi/3 through a real vertex and out to infinity at angle +pi/3, using
// adaptive Gauss-Kronrod (7/15) panels.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "qes/errors.hpp"

namespace qes {

template <class Real>
struct QuadResult {
  std::complex<Real> value;
  Real error = 0;
};

struct QuadOptions {
  double tol = 1e-12;
  int max_depth = 18;
  double panel = 0.5;  ///< panel length in t
};

/// Integral of f(z) dz along z = vertex + t e^{i angle}, t in [0, T].
template <class Real, class F>
QuadResult<Real> integrate_ray(F&& f, std::complex<Real> vertex, Real angle, Real T, QuadOptions opt = {}) {
  using C = std::complex<Real>;
  using boost::math::quadrature::gauss_kronrod;
  const C dir = std::polar(Real(1), angle);
  QuadResult<Real> out{C(0), Real(0)};
  const int panels = std::max(1, static_cast<int>(std::ceil(static_cast<double>(T) / opt.panel)));
  const Real h = T / panels;
  for (int i = 0; i < panels; ++i) {
    Real err = 0;
    auto g = [&](Real t) -> C { return f(vertex + t * dir) * dir; };
    const C v = gauss_kronrod<Real, 15>::integrate(g, h * i, h * (i + 1), static_cast<unsigned>(opt.max_depth),
                                                    static_cast<Real>(opt.tol), &err);
    if (!std::isfinite(static_cast<double>(std::abs(v)))) throw NumericError("integrate_ray: non-finite panel value");
    out.value += v;
    out.error += err;
  }
  return out;
}

/// Truncation length along the ray where |f| falls below `floor` times its
/// running maximum.
template <class Real, class F>
Real decay_length(F&& f, std::complex<Real> vertex, Real angle, Real start = 4, double floor = 1e-40) {
  const std::complex<Real> dir = std::polar(Real(1), angle);
  Real peak = 0;
  for (Real t = 0; t <= start; t += Real(0.25)) peak = std::max(peak, std::abs(f(vertex + t * dir)));
  Real T = start;
  for (int it = 0; it < 400; ++it) {
    const Real m = std::abs(f(vertex + T * dir));
    peak = std::max(peak, m);
    if (m <= floor * peak) return T;
    T += Real(0.5);
  }
  throw NumericError("decay_length: integrand does not decay along the ray");
}

/// Integral over gamma truncated at parameter length R on each ray (R <= 0
/// selects an automatic decay length).
template <class Real, class F>
QuadResult<Real> integrate_gamma(F&& f, Real vertex, Real R, QuadOptions opt = {}) {
  using C = std::complex<Real>;
  const Real th = std::numbers::pi_v<Real> / 3;
  const C v(vertex, 0);
  const Real Tp = R > 0 ? R : decay_length<Real>(f, v, th);
  const Real Tm = R > 0 ? R : decay_length<Real>(f, v, -th);
  const auto up = integrate_ray<Real>(f, v, th, Tp, opt);
  const auto down = integrate_ray<Real>(f, v, -th, Tm, opt);
  return {up.value - down.value, up.error + down.error};
}

}  // namespace qes

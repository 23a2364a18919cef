#pragma once

// The QES polynomial family of L_J(y) = y'' - (z^4 - 2bz^2 + 2Jz)y, J = n+1:
// eigenfunctions y = p_n(z) exp(z^3/3 - bz) with monic p_n = sum_j a_j z^{n-j},
// a_1 = a, and lambda = b^2 - 2a.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qes/errors.hpp"
#include "qes/poly.hpp"
#include "qes/roots.hpp"

namespace qes {

inline constexpr int kDefaultFamilyCap = 16;

struct QESFamily {
  int n = 0;
  std::vector<BiPoly> coeffs;  ///< a_0..a_n in the ring (a, b)
  BiPoly qstar;                ///< Q*_{n+1}(b, a), monic in a
  BiPoly qlambda;              ///< Q_{n+1}(b, lambda), monic in lambda; ring (lambda, b)

  int J() const { return n + 1; }
};

namespace detail {

/// Left side of p'' + 2(z^2 - b)p' - (2nz - 2a)p for p with BiPoly coefficients
/// (ascending in z).
inline ZPoly qes_operator(const ZPoly& p, int n) {
  const BiPoly A = BiPoly::variable(Var::a);
  const BiPoly B = BiPoly::variable(Var::b);
  const std::size_t len = p.size() + 2;
  ZPoly out(len, BiPoly());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k].is_zero()) continue;
    const long kk = static_cast<long>(k);
    if (k >= 2) out[k - 2] += p[k] * Rational(kk * (kk - 1));
    if (k >= 1) {
      out[k + 1] += p[k] * Rational(2 * kk);
      out[k - 1] -= (B * p[k]) * Rational(2 * kk);
    }
    out[k + 1] -= p[k] * Rational(2L * n);
    out[k] += (A * p[k]) * Rational(2);
  }
  while (!out.empty() && out.back().is_zero()) out.pop_back();
  return out;
}

}  // namespace detail

/// Builds a_j by the three-term recurrence and Q*, Q from the vanishing
/// constant term of p'' + 2(z^2 - b)p' - (2nz - 2a)p.
inline QESFamily build_family(int n, int cap = kDefaultFamilyCap) {
  if (n < 0) throw UsageError("build_family: n must be nonnegative");
  if (n > cap) throw UsageError("build_family: n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  QESFamily f;
  f.n = n;
  const BiPoly A = BiPoly::variable(Var::a);
  const BiPoly B = BiPoly::variable(Var::b);
  f.coeffs.push_back(BiPoly::constant(1));
  for (int j = 1; j <= n; ++j) {
    BiPoly next = A * f.coeffs[static_cast<std::size_t>(j - 1)];
    if (j >= 2) next -= (B * f.coeffs[static_cast<std::size_t>(j - 2)]) * Rational(n - j + 2);
    if (j >= 3) {
      next += f.coeffs[static_cast<std::size_t>(j - 3)] * make_rational((n - j + 2) * (n - j + 3), 2);
    }
    f.coeffs.push_back(next * make_rational(1, j));
  }
  ZPoly p(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) p[static_cast<std::size_t>(n - j)] = f.coeffs[static_cast<std::size_t>(j)];
  const ZPoly lhs = detail::qes_operator(p, n);
  for (std::size_t k = 1; k < lhs.size(); ++k) {
    if (!lhs[k].is_zero()) throw NumericError("recurrence does not annihilate z^" + std::to_string(k) + " term");
  }
  f.qstar = lhs.at(0).monic_in(Var::a);
  // a = (b^2 - lambda)/2 in the ring (lambda, b).
  BiPoly repl(Var::lambda, Var::b);
  repl.add_term(0, 2, make_rational(1, 2));
  repl.add_term(1, 0, make_rational(-1, 2));
  f.qlambda = f.qstar.substitute(Var::a, repl).monic_in(Var::lambda);
  return f;
}

inline const BiPoly& q_in_lambda(const QESFamily& f) { return f.qlambda; }

/// p_n of the family as a polynomial in z with BiPoly coefficients (ascending).
inline ZPoly p_as_zpoly(const QESFamily& f) {
  ZPoly p(static_cast<std::size_t>(f.n) + 1);
  for (int j = 0; j <= f.n; ++j) p[static_cast<std::size_t>(f.n - j)] = f.coeffs[static_cast<std::size_t>(j)];
  return p;
}

struct QESPoint {
  int n = 0;
  cplx b;
  cplx a;
  cplx lambda;
  std::vector<cplx> pcoeffs;  ///< a_0 = 1, a_1, ..., a_n (descending powers of z)
  double residual = 0;        ///< |Q*(b,a)| relative to the sum of |terms|
};

/// Numeric a_0..a_n at (a, b) from the same recurrence, in long double.
inline std::vector<cplx> p_coefficients(int n, cplx a, cplx b) {
  using lc = std::complex<long double>;
  const lc al(a.real(), a.imag()), bl(b.real(), b.imag());
  std::vector<lc> c{lc(1)};
  for (int j = 1; j <= n; ++j) {
    lc next = al * c[static_cast<std::size_t>(j - 1)];
    if (j >= 2) next -= bl * static_cast<long double>(n - j + 2) * c[static_cast<std::size_t>(j - 2)];
    if (j >= 3) next += static_cast<long double>((n - j + 2) * (n - j + 3)) / 2.0L * c[static_cast<std::size_t>(j - 3)];
    c.push_back(next / static_cast<long double>(j));
  }
  std::vector<cplx> out;
  out.reserve(c.size());
  for (const auto& x : c) out.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  return out;
}

/// Relative residual |P(x, y)| / sum |terms|.
inline double relative_residual(const BiPoly& p, cplx xv, cplx yv) {
  const auto cs = p.numeric_coeffs_in(p.x(), yv);
  std::complex<long double> acc(0), xl(xv.real(), xv.imag());
  long double mag = 0;
  for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
    acc = acc * xl + *it;
  }
  // Scale: evaluate term magnitudes directly.
  const std::complex<long double> yl(yv.real(), yv.imag());
  for (const auto& [key, c] : p.terms()) {
    mag += std::abs(to_long_double(c) * std::pow(xl, key.first) * std::pow(yl, key.second));
  }
  if (mag == 0) return static_cast<double>(std::abs(acc));
  return static_cast<double>(std::abs(acc) / mag);
}

/// Packages (b, a) as a QES point; `a` need not lie on the locus.
inline QESPoint make_point(const QESFamily& f, cplx b, cplx a) {
  QESPoint pt;
  pt.n = f.n;
  pt.b = b;
  pt.a = a;
  pt.lambda = b * b - 2.0 * a;
  pt.pcoeffs = p_coefficients(f.n, a, b);
  pt.residual = relative_residual(f.qstar, a, b);
  return pt;
}

/// Newton polish of a root of Q*(b, .) in long double.
inline cplx polish_root(const std::vector<std::complex<long double>>& c, cplx a0) {
  std::complex<long double> x(a0.real(), a0.imag());
  for (int it = 0; it < 3; ++it) {
    std::complex<long double> v(0), d(0);
    for (auto k = c.size(); k-- > 0;) {
      d = d * x + v;
      v = v * x + c[k];
    }
    if (std::abs(d) == 0) break;
    const auto step = v / d;
    if (!(std::abs(step) < 1e-6L * (1 + std::abs(x)))) break;
    x -= step;
  }
  return {static_cast<double>(x.real()), static_cast<double>(x.imag())};
}

/// All n+1 QES eigenvalues at parameter b, sorted by (Re lambda, Im lambda).
inline std::vector<QESPoint> eigenvalues_at(const QESFamily& f, cplx b) {
  if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) throw UsageError("eigenvalues_at: b must be finite");
  const auto c = f.qstar.numeric_coeffs_in(Var::a, b);
  std::vector<cplx> roots = complex_roots(c);
  std::vector<QESPoint> pts;
  pts.reserve(roots.size());
  for (const auto& r : roots) pts.push_back(make_point(f, b, polish_root(c, r)));
  long double scale = 1;
  for (const auto& p : pts) scale = std::max<long double>(scale, std::abs(p.lambda));
  const double eps = 1e-12 * static_cast<double>(scale);
  std::sort(pts.begin(), pts.end(), [eps](const QESPoint& x, const QESPoint& y) {
    if (std::abs(x.lambda.real() - y.lambda.real()) > eps) return x.lambda.real() < y.lambda.real();
    return x.lambda.imag() < y.lambda.imag();
  });
  return pts;
}

inline std::vector<QESPoint> eigenvalues_at(const QESFamily& f, double b) { return eigenvalues_at(f, cplx(b, 0)); }

}  // namespace qes

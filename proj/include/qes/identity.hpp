#pragma once

// Certificates for the identity
//   p^2(z) p^2(-z) - C = q'p - qp' - 2qph',   h' = z^2 - b,  deg q = 3n - 2,
// numerically at single points and exactly over Q[b][a]/(Q*), together with
// the constant law C = 2^{-n} dQ*/da and the contour form of the identity.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "qes/equilibrium.hpp"
#include "qes/errors.hpp"
#include "qes/poly.hpp"
#include "qes/precision.hpp"
#include "qes/qes_family.hpp"
#include "qes/quadrature.hpp"

namespace qes {

inline constexpr double kCertificateTolerance = 1e-8;
inline constexpr double kMaxCondition = 1e14;

struct IdentityCertificate {
  QESPoint point;
  int qdegree = 0;
  std::vector<cplx> qcoeffs;  ///< ascending
  cplx C;
  cplx a_refined;  ///< a at which q and C are reported
  double residual = 0;        ///< relative distance in a to the identity's solution set
  double backward_error = 0;  ///< componentwise backward error of the coefficient system
  double condition = 0;
  bool certified = false;
};

namespace detail {

using lc = std::complex<long double>;

inline std::vector<lc> mul(const std::vector<lc>& x, const std::vector<lc>& y) {
  if (x.empty() || y.empty()) return {};
  std::vector<lc> r(x.size() + y.size() - 1, lc(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  }
  return r;
}

inline std::vector<lc> reflect(std::vector<lc> x) {
  for (std::size_t i = 1; i < x.size(); i += 2) x[i] = -x[i];
  return x;
}

/// Coefficients of q'p - qp' - 2q p (z^2 - b) for q = z^k, ascending.
inline std::vector<lc> certificate_column(const std::vector<lc>& p, int k, lc b) {
  const std::size_t n = p.size() - 1;
  std::vector<lc> r(static_cast<std::size_t>(k) + n + 3, lc(0));
  for (std::size_t j = 0; j <= n; ++j) {
    const auto kk = static_cast<std::size_t>(k);
    const long double coef = static_cast<long double>(k) - static_cast<long double>(j);
    if (kk + j >= 1) r[kk + j - 1] += coef * p[j];
    r[kk + j + 2] -= 2.0L * p[j];
    r[kk + j] += 2.0L * b * p[j];
  }
  return r;
}

}  // namespace detail

namespace detail {

using qc = QuadComplex;

inline std::vector<qc> qmul(const std::vector<qc>& x, const std::vector<qc>& y) {
  std::vector<qc> r(x.size() + y.size() - 1, qc(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  }
  return r;
}

/// Ascending coefficients of p_n at (a, b) from the recurrence, in quad.
inline std::vector<qc> quad_p(int n, const qc& a, const qc& b) {
  std::vector<qc> c{qc(1)};
  for (int j = 1; j <= n; ++j) {
    qc next = a * c[static_cast<std::size_t>(j - 1)];
    if (j >= 2) next -= b * (n - j + 2) * c[static_cast<std::size_t>(j - 2)];
    if (j >= 3) next += qc((n - j + 2) * (n - j + 3) / 2) * c[static_cast<std::size_t>(j - 3)];
    c.push_back(next / j);
  }
  return {c.rbegin(), c.rend()};
}

/// Coefficients of q'p - qp' - 2qp(z^2 - b) for q = z^k, ascending.
inline std::vector<qc> quad_column(const std::vector<qc>& p, int k, const qc& b) {
  const std::size_t n = p.size() - 1;
  std::vector<qc> r(static_cast<std::size_t>(k) + n + 3, qc(0));
  for (std::size_t j = 0; j <= n; ++j) {
    const auto kk = static_cast<std::size_t>(k);
    const int coef = k - static_cast<int>(j);
    if (kk + j >= 1) r[kk + j - 1] += p[j] * coef;
    r[kk + j + 2] -= p[j] * 2;
    r[kk + j] += b * p[j] * 2;
  }
  return r;
}

struct CertificateSolve {
  std::vector<qc> x;       ///< q_0..q_d, then C
  std::vector<qc> defect;  ///< rows that are not pivots: z^1..z^{n+1} and any above the top pivot
  double backward_error = 0;
  double condition = 0;
};

/// Coefficient system for q of degree d and C. Row k+n+2 has pivot -2 on the
/// z^k coefficient of q and nothing above it, so q follows by back
/// substitution and C from row 0; the remaining rows are the consistency
/// conditions. Entries of p^2(z)p^2(-z) grow like |a|^{4n} while C does not,
/// so the elimination runs in quad precision.
inline CertificateSolve certificate_system(const std::vector<qc>& p, const qc& b, int d) {
  const int n = static_cast<int>(p.size()) - 1;
  const auto p2 = qmul(p, p);
  auto p2r = p2;
  for (std::size_t i = 1; i < p2r.size(); i += 2) p2r[i] = -p2r[i];
  const auto P = qmul(p2, p2r);
  const int rows = std::max(static_cast<int>(P.size()), d + n + 3);
  const int cols = d + 2;
  std::vector<std::vector<qc>> A(static_cast<std::size_t>(rows), std::vector<qc>(static_cast<std::size_t>(cols), qc(0)));
  std::vector<qc> rhs(static_cast<std::size_t>(rows), qc(0));
  for (int k = 0; k <= d; ++k) {
    const auto col = quad_column(p, k, b);
    for (std::size_t i = 0; i < col.size(); ++i) A[i][static_cast<std::size_t>(k)] = col[i];
  }
  A[0][static_cast<std::size_t>(d + 1)] = qc(1);
  std::copy(P.begin(), P.end(), rhs.begin());

  CertificateSolve out;
  {
    using Mat = Eigen::Matrix<lc, Eigen::Dynamic, Eigen::Dynamic>;
    Mat S(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int k = 0; k < cols; ++k) S(i, k) = to_lcplx(A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    }
    for (int k = 0; k < cols; ++k) {
      const long double nk = S.col(k).norm();
      if (nk > 0) S.col(k) /= nk;
    }
    Eigen::JacobiSVD<Mat> svd(S);
    const auto& sv = svd.singularValues();
    const long double smin = sv(sv.size() - 1);
    out.condition = smin > 0 ? static_cast<double>(sv(0) / smin) : INFINITY;
  }
  if (!(out.condition < kMaxCondition)) {
    std::ostringstream os;
    os << "solve_certificate: ill-conditioned system, condition estimate " << out.condition;
    throw NumericError(os.str());
  }
  out.x.assign(static_cast<std::size_t>(cols), qc(0));
  auto& x = out.x;
  for (int k = d; k >= 0; --k) {
    const auto r = static_cast<std::size_t>(k + n + 2);
    qc acc = rhs[r];
    for (int j = k + 1; j <= d; ++j) acc -= A[r][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(k)] = acc / A[r][static_cast<std::size_t>(k)];
  }
  {
    qc acc = rhs[0];
    for (int j = 0; j <= d; ++j) acc -= A[0][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(d + 1)] = acc;
  }
  QuadReal worst = 0;
  for (int i = 0; i < rows; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    qc r = -rhs[ii];
    QuadReal mag = abs(rhs[ii]);
    for (int k = 0; k < cols; ++k) {
      const qc t = A[ii][static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
      r += t;
      mag += abs(t);
    }
    const bool pivot_row = i == 0 || (i >= n + 2 && i <= d + n + 2);
    if (!pivot_row) out.defect.push_back(r);
    if (mag > 0) worst = std::max(worst, QuadReal(abs(r) / mag));
  }
  out.backward_error = static_cast<double>(worst);
  return out;
}

}  // namespace detail

/// Certificate at a family point for a trial degree of q (default 3n - 2).
/// p is rebuilt from (a, b) by the recurrence. The residual is the
/// first-order relative distance in a from the point to where the
/// consistency rows vanish, |D| / (|dD/da| (1 + |a|)). Off the locus it stays
/// large: this is reported, not thrown.
inline IdentityCertificate solve_certificate(const QESPoint& pt, int trial_degree = -1,
                                             double tol = kCertificateTolerance) {
  if (pt.n < 1) throw UsageError("solve_certificate: n >= 1 required");
  const int d = trial_degree < 0 ? 3 * pt.n - 2 : trial_degree;
  if (d < 0) throw UsageError("solve_certificate: trial degree must be nonnegative");
  const QuadComplex a = to_quad(pt.a), b = to_quad(pt.b);
  const auto sol = detail::certificate_system(detail::quad_p(pt.n, a, b), b, d);

  const QuadReal h = QuadReal(1e-12) * (1 + abs(a));
  const auto sol2 = detail::certificate_system(detail::quad_p(pt.n, a + h, b), b, d);
  QuadReal num = 0, den = 0;
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < sol.defect.size(); ++i) {
    num = std::max(num, QuadReal(abs(sol.defect[i])));
    const QuadReal slope = abs(sol2.defect[i] - sol.defect[i]) / h;
    if (slope > den) {
      den = slope;
      pivot = i;
    }
  }

  IdentityCertificate cert;
  cert.point = pt;
  cert.qdegree = d;
  if (num == 0) {
    cert.residual = 0;
  } else if (den == 0) {
    cert.residual = INFINITY;
  } else {
    cert.residual = static_cast<double>(num / (den * (1 + abs(a))));
  }
  // Close to the locus, one Newton step on the defect moves a onto it in
  // quad precision; q and C are reported there.
  const detail::CertificateSolve* use = &sol;
  detail::CertificateSolve refined;
  QuadComplex a_used = a;
  if (cert.residual < 1e-6 && num > 0 && den > 0) {
    const QuadComplex slope = (sol2.defect[pivot] - sol.defect[pivot]) / h;
    a_used = a - sol.defect[pivot] / slope;
    refined = detail::certificate_system(detail::quad_p(pt.n, a_used, b), b, d);
    use = &refined;
  }
  cert.a_refined = to_cplx(a_used);
  for (int k = 0; k <= d; ++k) cert.qcoeffs.push_back(to_cplx(use->x[static_cast<std::size_t>(k)]));
  cert.C = to_cplx(use->x.back());
  cert.backward_error = sol.backward_error;
  cert.condition = sol.condition;
  // A q of the requested degree must really have that degree. Coefficient k
  // scales like s^{d-k} with s the size of a and sqrt(b).
  const double top = std::abs(cert.qcoeffs.back());
  const double s = std::max({1.0, std::abs(cert.a_refined), std::sqrt(std::abs(pt.b))});
  double qscale = 0;
  for (int k = 0; k <= d; ++k) {
    qscale = std::max(qscale, std::abs(cert.qcoeffs[static_cast<std::size_t>(k)]) / std::pow(s, d - k));
  }
  const bool full_degree = top > 1e-6 * qscale;
  cert.certified = cert.residual < tol && full_degree;
  return cert;
}

/// 2^{-n} dQ*/da evaluated at the point.
inline cplx constant_law(const QESFamily& f, cplx b, cplx a) {
  const QuadComplex qa = to_quad(a), qb = to_quad(b);
  QuadComplex acc(0);
  const BiPoly dq = f.qstar.derivative(Var::a);
  for (const auto& [key, c] : dq.terms()) {
    acc += QuadComplex(QuadReal(c.get_num().get_str()) / QuadReal(c.get_den().get_str())) * pow(qa, key.first) *
           pow(qb, key.second);
  }
  return to_cplx(acc) * std::ldexp(1.0, -f.n);
}

// ---------------------------------------------------------------------------
// Exact certificates.

/// Reduces x in Q[b][a] modulo a polynomial monic in a.
inline BiPoly reduce_mod(const BiPoly& x, const BiPoly& modulus) {
  const int N = modulus.degree_in(Var::a);
  if (modulus.leading_constant_in(Var::a) != 1) throw UsageError("reduce_mod: modulus must be monic in a");
  BiPoly r = x;
  for (int m = r.degree_in(Var::a); m >= N; m = r.degree_in(Var::a)) {
    BiPoly lead;
    for (const auto& [key, c] : r.terms()) {
      if (key.first == m) lead.add_term(m - N, key.second, c);
    }
    r -= lead * modulus;
  }
  return r;
}

struct ExactCertificate {
  int n = 0;
  ZPoly q;     ///< ascending in z, coefficients reduced mod Q*
  BiPoly C;    ///< reduced mod Q*
  bool proof = false;
  bool constant_law = false;
};

namespace detail {

inline ZPoly zmul(const ZPoly& x, const ZPoly& y) {
  if (x.empty() || y.empty()) return {};
  ZPoly r(x.size() + y.size() - 1, BiPoly());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  }
  return r;
}

inline ZPoly zreflect(ZPoly x) {
  for (std::size_t i = 1; i < x.size(); i += 2) x[i] = -x[i];
  return x;
}

inline ZPoly zreduce(ZPoly x, const BiPoly& m) {
  for (auto& c : x) c = reduce_mod(c, m);
  return x;
}

/// q'p - qp' - 2qp(z^2 - b) for q = c z^k.
inline ZPoly zcolumn(const ZPoly& p, int k, const BiPoly& c) {
  const BiPoly B = BiPoly::variable(Var::b);
  const std::size_t n = p.size() - 1;
  ZPoly r(static_cast<std::size_t>(k) + n + 3, BiPoly());
  for (std::size_t j = 0; j <= n; ++j) {
    const auto kk = static_cast<std::size_t>(k);
    const BiPoly t = c * p[j];
    const long coef = static_cast<long>(k) - static_cast<long>(j);
    if (kk + j >= 1 && coef != 0) r[kk + j - 1] += t * Rational(coef);
    r[kk + j + 2] -= t * Rational(2);
    r[kk + j] += (B * t) * Rational(2);
  }
  return r;
}

}  // namespace detail

inline constexpr int kExactCertificateMax = 4;

/// Solves for q and C over Q[b][a]/(Q*). The operator sends c z^k to a
/// polynomial with leading term -2c z^{k+n+2}, so the system is triangular
/// with constant pivots and is solved top-down without division.
inline ExactCertificate exact_certificate(int n, int max_n = kExactCertificateMax) {
  if (n < 1) throw UsageError("exact_certificate: n >= 1 required");
  if (n > max_n) throw UsageError("exact_certificate: n = " + std::to_string(n) + " exceeds limit " + std::to_string(max_n));
  const QESFamily f = build_family(n);
  const ZPoly p = p_as_zpoly(f);
  const ZPoly p2 = detail::zmul(p, p);
  ZPoly R = detail::zreduce(detail::zmul(p2, detail::zreflect(p2)), f.qstar);
  ExactCertificate cert;
  cert.n = n;
  const int d = 3 * n - 2;
  cert.q.assign(static_cast<std::size_t>(d) + 1, BiPoly());
  for (int k = d; k >= 0; --k) {
    const std::size_t top = static_cast<std::size_t>(k + n + 2);
    const BiPoly c = top < R.size() ? R[top] * make_rational(-1, 2) : BiPoly();
    cert.q[static_cast<std::size_t>(k)] = c;
    if (c.is_zero()) continue;
    const ZPoly col = detail::zcolumn(p, k, c);
    if (R.size() < col.size()) R.resize(col.size(), BiPoly());
    for (std::size_t i = 0; i < col.size(); ++i) R[i] = reduce_mod(R[i] - col[i], f.qstar);
  }
  cert.C = R.empty() ? BiPoly() : R[0];
  bool clean = true;
  for (std::size_t i = 1; i < R.size(); ++i) clean = clean && R[i].is_zero();
  if (!clean) throw NumericError("exact_certificate: system has no solution in the quotient ring");
  // Independent check of the full identity.
  const ZPoly lhs = detail::zmul(p2, detail::zreflect(p2));
  ZPoly rhs{cert.C};
  for (int k = 0; k <= d; ++k) {
    const ZPoly col = detail::zcolumn(p, k, cert.q[static_cast<std::size_t>(k)]);
    if (rhs.size() < col.size()) rhs.resize(col.size(), BiPoly());
    for (std::size_t i = 0; i < col.size(); ++i) rhs[i] += col[i];
  }
  bool proof = true;
  for (std::size_t i = 0; i < std::max(lhs.size(), rhs.size()); ++i) {
    const BiPoly l = i < lhs.size() ? lhs[i] : BiPoly();
    const BiPoly r = i < rhs.size() ? rhs[i] : BiPoly();
    proof = proof && reduce_mod(l - r, f.qstar).is_zero();
  }
  cert.proof = proof;
  Rational s(1);
  for (int i = 0; i < n; ++i) s /= 2;
  cert.constant_law = reduce_mod(cert.C - f.qstar.derivative(Var::a) * s, f.qstar).is_zero();
  return cert;
}

inline std::string to_text(const ExactCertificate& c) {
  std::ostringstream os;
  os << "n = " << c.n << "\n";
  os << "C*(b,a) = " << c.C.to_string() << "\n";
  os << "q(z) =";
  bool first = true;
  for (std::size_t k = c.q.size(); k-- > 0;) {
    if (c.q[k].is_zero()) continue;
    os << (first ? " " : "\n     + ") << "(" << c.q[k].to_string() << ")";
    if (k > 0) os << " z^" << k;
    first = false;
  }
  if (first) os << " 0";
  os << "\nidentity holds mod Q*: " << (c.proof ? "yes" : "no") << "\n";
  os << "C* = 2^-n dQ*/da: " << (c.constant_law ? "yes" : "no") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Constant law.

struct ConstantReport {
  int n = 0;
  bool exact = false;
  int samples = 0;
  double max_rel_error = 0;
  bool pass = false;
};

/// Exact in the quotient ring for n <= 4; otherwise compares numeric
/// certificates with 2^{-n} dQ*/da at locus points over the given b values.
inline ConstantReport verify_constant(int n, const std::vector<double>& bs, double tol = 1e-8) {
  if (n < 1) throw UsageError("verify_constant: n >= 1 required");
  ConstantReport rep;
  rep.n = n;
  if (n <= kExactCertificateMax) {
    const auto c = exact_certificate(n);
    rep.exact = true;
    rep.pass = c.proof && c.constant_law;
    return rep;
  }
  const auto f = build_family(n);
  for (double b : bs) {
    for (const auto& pt : eigenvalues_at(f, b)) {
      const auto cert = solve_certificate(pt);
      const cplx want = constant_law(f, pt.b, cert.a_refined);
      const double err = std::abs(cert.C - want) / std::max(1e-300, std::abs(want));
      rep.max_rel_error = std::max(rep.max_rel_error, err);
      ++rep.samples;
    }
  }
  rep.pass = rep.samples > 0 && rep.max_rel_error < tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Contour form: int_gamma p^2(z) e^{2h} dz = C int_gamma p^{-2}(-z) e^{2h} dz.

struct IntegralIdentityReport {
  cplx lhs;
  cplx rhs;
  cplx C;
  double mismatch = 0;
  double quad_error = 0;
  double tail_bound = 0;  ///< bound on both integrands' contribution beyond R
};

struct IntegralOptions {
  double R = 8;
  double vertex = 0;
  double pole_tol = 1e-3;
  QuadOptions quad{};
};

/// Distance from w to gamma with the given real vertex.
inline double distance_to_gamma(cplx w, double vertex) {
  double best = 1e300;
  for (double s : {1.0, -1.0}) {
    const cplx dir = std::polar(1.0, s * std::numbers::pi / 3);
    const cplx rel = w - cplx(vertex, 0);
    const double t = std::max(0.0, (rel * std::conj(dir)).real());
    best = std::min(best, std::abs(rel - t * dir));
  }
  return best;
}

inline IntegralIdentityReport verify_integral_identity(const QESPoint& pt, IntegralOptions opt = {}) {
  using detail::lc;
  if (pt.n < 1) throw UsageError("verify_integral_identity: n >= 1 required (C is undefined for n = 0)");
  for (const auto& z : point_roots(pt)) {
    const double d = distance_to_gamma(-z, opt.vertex);
    if (d < opt.pole_tol) {
      std::ostringstream os;
      os << "verify_integral_identity: pole " << -z << " of p^-2(-z) lies " << d
         << " from the contour; move the vertex (e.g. vertex = " << opt.vertex + 0.5 << ")";
      throw NumericError(os.str());
    }
  }
  const auto cert = solve_certificate(pt);
  const auto p = detail::ascending_p(pt);
  const lc b(pt.b.real(), pt.b.imag());
  auto weight = [b](lc z) { return std::exp(2.0L * (z * z * z / 3.0L - b * z)); };
  auto left = [&](lc z) {
    const lc v = detail::horner(p, z);
    return v * v * weight(z);
  };
  auto right = [&](lc z) {
    const lc v = detail::horner(p, -z);
    return weight(z) / (v * v);
  };
  const long double R = opt.R, x0 = opt.vertex;
  const auto L = integrate_gamma<long double>(left, x0, R, opt.quad);
  const auto Rr = integrate_gamma<long double>(right, x0, R, opt.quad);
  IntegralIdentityReport rep;
  rep.C = cert.C;
  rep.lhs = cplx(static_cast<double>(L.value.real()), static_cast<double>(L.value.imag()));
  const lc rr = Rr.value * lc(cert.C.real(), cert.C.imag());
  rep.rhs = cplx(static_cast<double>(rr.real()), static_cast<double>(rr.imag()));
  rep.quad_error = static_cast<double>(L.error + Rr.error * std::abs(lc(cert.C.real(), cert.C.imag())));
  const double denom = std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-300});
  rep.mismatch = std::abs(rep.lhs - rep.rhs) / denom;
  // Beyond |t| = R the integrands decay faster than |f(R)| e^{-R^2 (t-R)}.
  long double tail = 0;
  for (double s : {1.0, -1.0}) {
    const lc z = lc(x0, 0) + R * std::polar(1.0L, static_cast<long double>(s * std::numbers::pi / 3));
    tail += (std::abs(left(z)) + std::abs(right(z)) * std::abs(lc(cert.C.real(), cert.C.imag()))) / (R * R);
  }
  rep.tail_bound = static_cast<double>(tail) / denom;
  return rep;
}

}  // namespace qes

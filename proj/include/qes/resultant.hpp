#pragma once

// Resultants and discriminants of bivariate polynomials with respect to one
// variable, computed as fraction-free (Bareiss) determinants of the Sylvester
// matrix over Q[y].

#include <utility>
#include <vector>

#include "qes/errors.hpp"
#include "qes/poly.hpp"

namespace qes {

/// Determinant of a square matrix over Q[y] by Bareiss elimination; every
/// division is exact.
inline UniPoly bareiss_determinant(std::vector<std::vector<UniPoly>> m, Var y) {
  const std::size_t n = m.size();
  if (n == 0) return UniPoly::constant(1, y);
  int sign = 1;
  UniPoly prev = UniPoly::constant(1, y);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k].is_zero()) ++swap;
      if (swap == n) return UniPoly(y);
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        UniPoly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = t.exact_div(prev);
      }
      m[i][k] = UniPoly(y);
    }
    prev = m[k][k];
  }
  UniPoly det = m[n - 1][n - 1];
  if (sign < 0) det = -det;
  return det;
}

/// Res_v(P, R) as a polynomial in the remaining variable.
inline UniPoly resultant_in(const BiPoly& p, const BiPoly& r, Var v) {
  const auto pc = p.as_poly_in(v);
  const auto rc = r.as_poly_in(v);
  const Var other = p.x() == v ? p.y() : p.x();
  const int dp = static_cast<int>(pc.size()) - 1;
  const int dr = static_cast<int>(rc.size()) - 1;
  if (dp < 0 || dr < 0) return UniPoly(other);
  const int n = dp + dr;
  if (n == 0) return UniPoly::constant(1, other);
  std::vector<std::vector<UniPoly>> s(static_cast<std::size_t>(n),
                                      std::vector<UniPoly>(static_cast<std::size_t>(n), UniPoly(other)));
  // Rows hold coefficients from the top degree down.
  for (int i = 0; i < dr; ++i) {
    for (int j = 0; j <= dp; ++j) s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + j)] = pc[static_cast<std::size_t>(dp - j)];
  }
  for (int i = 0; i < dp; ++i) {
    for (int j = 0; j <= dr; ++j) {
      s[static_cast<std::size_t>(dr + i)][static_cast<std::size_t>(i + j)] = rc[static_cast<std::size_t>(dr - j)];
    }
  }
  return bareiss_determinant(std::move(s), other);
}

/// Discriminant in `v`: (-1)^{d(d-1)/2} Res_v(P, dP/dv) / lc_v(P).
inline UniPoly discriminant_in(const BiPoly& p, Var v) {
  const int d = p.degree_in(v);
  if (d < 1) throw UsageError("discriminant: polynomial is constant in " + std::string(var_name(v)));
  const auto pc = p.as_poly_in(v);
  const UniPoly res = resultant_in(p, p.derivative(v), v);
  UniPoly disc = res.exact_div(pc.back());
  if ((d * (d - 1) / 2) % 2 != 0) disc = -disc;
  return disc;
}

inline UniPoly discriminant_in_a(const BiPoly& p) { return discriminant_in(p, Var::a); }

}  // namespace qes

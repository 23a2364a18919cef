#pragma once

// Exact univariate and bivariate polynomials over the rationals.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qes/errors.hpp"
#include "qes/rational.hpp"

namespace qes {

enum class Var : std::uint8_t { z, a, b, lambda };

inline std::string_view var_name(Var v) {
  switch (v) {
    case Var::z: return "z";
    case Var::a: return "a";
    case Var::b: return "b";
    case Var::lambda: return "lambda";
  }
  return "?";
}

using cplx = std::complex<double>;

namespace detail {

inline void append_monomial(std::ostringstream& os, bool& first, const Rational& c,
                            const std::vector<std::pair<Var, int>>& powers) {
  bool has_var = false;
  for (const auto& [v, e] : powers) has_var = has_var || e > 0;
  Rational mag = abs(c);
  if (first) {
    if (sgn(c) < 0) os << "-";
  } else {
    os << (sgn(c) < 0 ? " - " : " + ");
  }
  first = false;
  bool wrote = false;
  if (!has_var || mag != 1) {
    os << mag.get_str();
    wrote = true;
  }
  for (const auto& [v, e] : powers) {
    if (e == 0) continue;
    if (wrote) os << "*";
    os << var_name(v);
    if (e > 1) os << "^" << e;
    wrote = true;
  }
}

}  // namespace detail

/// Dense univariate polynomial, coefficients in ascending degree.
class UniPoly {
 public:
  explicit UniPoly(Var v = Var::z) : var_(v) {}
  UniPoly(std::vector<Rational> coeffs, Var v) : c_(std::move(coeffs)), var_(v) { trim(); }

  static UniPoly constant(const Rational& c, Var v) { return UniPoly({c}, v); }
  static UniPoly monomial(const Rational& c, int deg, Var v) {
    std::vector<Rational> cs(static_cast<std::size_t>(deg) + 1);
    cs.back() = c;
    return UniPoly(std::move(cs), v);
  }
  /// The polynomial `v` itself.
  static UniPoly identity(Var v) { return monomial(1, 1, v); }

  Var var() const { return var_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational coeff(int i) const {
    if (i < 0 || i > degree()) return Rational(0);
    return c_[static_cast<std::size_t>(i)];
  }
  const Rational& leading() const {
    if (c_.empty()) throw UsageError("leading coefficient of zero polynomial");
    return c_.back();
  }

  UniPoly& operator+=(const UniPoly& o) {
    check_tag(o);
    if (degree() <= 0) var_ = o.var_;
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  UniPoly& operator-=(const UniPoly& o) {
    check_tag(o);
    if (degree() <= 0) var_ = o.var_;
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  UniPoly& operator*=(const Rational& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend UniPoly operator+(UniPoly x, const UniPoly& y) { return x += y; }
  friend UniPoly operator-(UniPoly x, const UniPoly& y) { return x -= y; }
  friend UniPoly operator*(UniPoly x, const Rational& s) { return x *= s; }
  friend UniPoly operator*(const Rational& s, UniPoly x) { return x *= s; }
  UniPoly operator-() const { return *this * Rational(-1); }

  friend UniPoly operator*(const UniPoly& x, const UniPoly& y) {
    x.check_tag(y);
    const Var tag = x.degree() > 0 ? x.var_ : y.var_;
    if (x.is_zero() || y.is_zero()) return UniPoly(tag);
    std::vector<Rational> r(x.c_.size() + y.c_.size() - 1);
    for (std::size_t i = 0; i < x.c_.size(); ++i) {
      if (x.c_[i] == 0) continue;
      for (std::size_t j = 0; j < y.c_.size(); ++j) r[i + j] += x.c_[i] * y.c_[j];
    }
    return UniPoly(std::move(r), tag);
  }
  UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }

  friend bool operator==(const UniPoly& x, const UniPoly& y) {
    return (x.var_ == y.var_ || (x.degree() <= 0 && y.degree() <= 0)) && x.c_ == y.c_;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return UniPoly(var_);
    std::vector<Rational> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
    return UniPoly(std::move(r), var_);
  }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  cplx eval(cplx x) const {
    std::complex<long double> acc(0), xl(x.real(), x.imag());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * xl + to_long_double(*it);
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  int sign_at(const Rational& x) const { return sgn(eval(x)); }

  /// Substitutes `inner` for the variable; the result carries inner's tag.
  UniPoly compose(const UniPoly& inner) const {
    UniPoly acc(inner.var());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = acc * inner;
      acc += UniPoly::constant(*it, inner.var());
    }
    return acc;
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    Rational inv = 1 / leading();
    return *this * inv;
  }

  /// Euclidean division: *this = q*d + r with deg r < deg d.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
    check_tag(d);
    if (d.is_zero()) throw UsageError("polynomial division by zero");
    UniPoly r = *this;
    if (degree() < d.degree()) return {UniPoly(var_), r};
    std::vector<Rational> q(static_cast<std::size_t>(degree() - d.degree() + 1));
    const Rational inv = 1 / d.leading();
    for (int k = degree() - d.degree(); k >= 0; --k) {
      const auto top = static_cast<std::size_t>(k + d.degree());
      if (top >= r.c_.size() || r.c_[top] == 0) continue;
      Rational f = r.c_[top] * inv;
      q[static_cast<std::size_t>(k)] = f;
      for (int j = 0; j <= d.degree(); ++j) {
        r.c_[static_cast<std::size_t>(k + j)] -= f * d.c_[static_cast<std::size_t>(j)];
      }
    }
    r.trim();
    return {UniPoly(std::move(q), var_), r};
  }

  /// Quotient when the division is known to be exact; throws otherwise.
  UniPoly exact_div(const UniPoly& d) const {
    auto [q, r] = divmod(d);
    if (!r.is_zero()) throw NumericError("inexact polynomial division");
    return q;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const auto& c = c_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      detail::append_monomial(os, first, c, {{var_, i}});
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  void check_tag(const UniPoly& o) const {
    // Constants adopt any tag.
    if (var_ != o.var_ && degree() > 0 && o.degree() > 0) {
      throw UsageError("variable mismatch: " + std::string(var_name(var_)) + " vs " +
                       std::string(var_name(o.var_)));
    }
  }

  std::vector<Rational> c_;
  Var var_;
};

/// Monic gcd over Q.
inline UniPoly gcd(UniPoly x, UniPoly y) {
  while (!y.is_zero()) {
    UniPoly r = x.divmod(y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

inline UniPoly squarefree_part(const UniPoly& p) {
  if (p.degree() <= 0) return p;
  UniPoly g = gcd(p, p.derivative());
  return p.exact_div(g).monic();
}

/// Sparse bivariate polynomial: (m, k) -> coefficient of x^m y^k.
class BiPoly {
 public:
  using Key = std::pair<int, int>;
  using Terms = std::map<Key, Rational>;

  explicit BiPoly(Var x = Var::a, Var y = Var::b) : x_(x), y_(y) {
    if (x == y) throw UsageError("BiPoly needs two distinct variables");
  }

  static BiPoly constant(const Rational& c, Var x = Var::a, Var y = Var::b) {
    BiPoly p(x, y);
    p.add_term(0, 0, c);
    return p;
  }
  /// The polynomial consisting of variable `v` in the ring (x, y).
  static BiPoly variable(Var v, Var x = Var::a, Var y = Var::b) {
    BiPoly p(x, y);
    if (v == x) {
      p.add_term(1, 0, 1);
    } else if (v == y) {
      p.add_term(0, 1, 1);
    } else {
      throw UsageError("variable " + std::string(var_name(v)) + " not in ring");
    }
    return p;
  }

  Var x() const { return x_; }
  Var y() const { return y_; }
  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  void add_term(int m, int k, const Rational& c) {
    if (m < 0 || k < 0) throw UsageError("negative exponent");
    if (c == 0) return;
    auto [it, inserted] = t_.try_emplace(Key{m, k}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) t_.erase(it);
    }
  }

  Rational coeff(int m, int k) const {
    auto it = t_.find(Key{m, k});
    return it == t_.end() ? Rational(0) : it->second;
  }

  int degree_in(Var v) const {
    int d = -1;
    const bool first = slot(v) == 0;
    for (const auto& [key, c] : t_) d = std::max(d, first ? key.first : key.second);
    return d;
  }

  BiPoly& operator+=(const BiPoly& o) {
    check_ring(o);
    for (const auto& [key, c] : o.t_) add_term(key.first, key.second, c);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    check_ring(o);
    for (const auto& [key, c] : o.t_) add_term(key.first, key.second, -c);
    return *this;
  }
  BiPoly& operator*=(const Rational& s) {
    if (s == 0) {
      t_.clear();
      return *this;
    }
    for (auto& [key, c] : t_) c *= s;
    return *this;
  }
  friend BiPoly operator+(BiPoly p, const BiPoly& q) { return p += q; }
  friend BiPoly operator-(BiPoly p, const BiPoly& q) { return p -= q; }
  friend BiPoly operator*(BiPoly p, const Rational& s) { return p *= s; }
  friend BiPoly operator*(const Rational& s, BiPoly p) { return p *= s; }
  BiPoly operator-() const { return *this * Rational(-1); }

  friend BiPoly operator*(const BiPoly& p, const BiPoly& q) {
    p.check_ring(q);
    BiPoly r(p.x_, p.y_);
    for (const auto& [kp, cp] : p.t_) {
      for (const auto& [kq, cq] : q.t_) {
        r.add_term(kp.first + kq.first, kp.second + kq.second, cp * cq);
      }
    }
    return r;
  }
  BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }

  friend bool operator==(const BiPoly& p, const BiPoly& q) {
    return p.x_ == q.x_ && p.y_ == q.y_ && p.t_ == q.t_;
  }

  BiPoly derivative(Var v) const {
    const int s = slot(v);
    BiPoly r(x_, y_);
    for (const auto& [key, c] : t_) {
      const int e = s == 0 ? key.first : key.second;
      if (e == 0) continue;
      if (s == 0) {
        r.add_term(key.first - 1, key.second, c * e);
      } else {
        r.add_term(key.first, key.second - 1, c * e);
      }
    }
    return r;
  }

  /// Replaces variable `v` by `repl`; the other variable of this ring must
  /// belong to repl's ring, and the result lives in repl's ring.
  BiPoly substitute(Var v, const BiPoly& repl) const {
    const int s = slot(v);
    const Var other = s == 0 ? y_ : x_;
    const BiPoly other_poly = BiPoly::variable(other, repl.x_, repl.y_);
    int max_v = 0, max_o = 0;
    for (const auto& [key, c] : t_) {
      max_v = std::max(max_v, s == 0 ? key.first : key.second);
      max_o = std::max(max_o, s == 0 ? key.second : key.first);
    }
    std::vector<BiPoly> pv{BiPoly::constant(1, repl.x_, repl.y_)};
    for (int i = 1; i <= max_v; ++i) pv.push_back(pv.back() * repl);
    std::vector<BiPoly> po{BiPoly::constant(1, repl.x_, repl.y_)};
    for (int i = 1; i <= max_o; ++i) po.push_back(po.back() * other_poly);
    BiPoly r(repl.x_, repl.y_);
    for (const auto& [key, c] : t_) {
      const int ev = s == 0 ? key.first : key.second;
      const int eo = s == 0 ? key.second : key.first;
      r += (pv[static_cast<std::size_t>(ev)] * po[static_cast<std::size_t>(eo)]) * c;
    }
    return r;
  }

  Rational eval(const Rational& xv, const Rational& yv) const {
    Rational acc(0);
    for (const auto& [key, c] : t_) {
      Rational term = c;
      for (int i = 0; i < key.first; ++i) term *= xv;
      for (int i = 0; i < key.second; ++i) term *= yv;
      acc += term;
    }
    return acc;
  }

  cplx eval(cplx xv, cplx yv) const {
    std::vector<std::complex<long double>> cs = numeric_coeffs_in(x_, yv);
    std::complex<long double> acc(0), xl(xv.real(), xv.imag());
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * xl + *it;
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }

  /// Coefficients of the powers of `v` (ascending), each evaluated at the
  /// other variable = `other`.
  std::vector<std::complex<long double>> numeric_coeffs_in(Var v, cplx other) const {
    const int s = slot(v);
    const int d = degree_in(v);
    std::vector<std::complex<long double>> cs(static_cast<std::size_t>(std::max(d + 1, 0)));
    const std::complex<long double> o(other.real(), other.imag());
    for (const auto& [key, c] : t_) {
      const int ev = s == 0 ? key.first : key.second;
      const int eo = s == 0 ? key.second : key.first;
      cs[static_cast<std::size_t>(ev)] += to_long_double(c) * std::pow(o, eo);
    }
    return cs;
  }

  /// Coefficients of the powers of `v` as univariate polynomials in the other variable.
  std::vector<UniPoly> as_poly_in(Var v) const {
    const int s = slot(v);
    const Var other = s == 0 ? y_ : x_;
    const int d = degree_in(v);
    std::vector<std::vector<Rational>> raw(static_cast<std::size_t>(std::max(d + 1, 0)));
    for (const auto& [key, c] : t_) {
      const int ev = s == 0 ? key.first : key.second;
      const int eo = s == 0 ? key.second : key.first;
      auto& row = raw[static_cast<std::size_t>(ev)];
      if (row.size() <= static_cast<std::size_t>(eo)) row.resize(static_cast<std::size_t>(eo) + 1);
      row[static_cast<std::size_t>(eo)] += c;
    }
    std::vector<UniPoly> out;
    out.reserve(raw.size());
    for (auto& row : raw) out.emplace_back(std::move(row), other);
    return out;
  }

  static BiPoly from_poly_in(Var v, const std::vector<UniPoly>& coeffs, Var x, Var y) {
    BiPoly r(x, y);
    const int s = r.slot(v);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      for (int j = 0; j <= coeffs[i].degree(); ++j) {
        if (s == 0) {
          r.add_term(static_cast<int>(i), j, coeffs[i].coeff(j));
        } else {
          r.add_term(j, static_cast<int>(i), coeffs[i].coeff(j));
        }
      }
    }
    return r;
  }

  /// Leading coefficient in `v` when it is a rational constant.
  Rational leading_constant_in(Var v) const {
    auto cs = as_poly_in(v);
    if (cs.empty() || cs.back().degree() != 0) {
      throw UsageError("leading coefficient in " + std::string(var_name(v)) + " is not constant");
    }
    return cs.back().coeff(0);
  }

  BiPoly monic_in(Var v) const { return *this * (1 / leading_constant_in(v)); }

  /// Quasi-homogeneous weight: b counts twice, the other variable once.
  int weight(const Key& key) const {
    const int wx = x_ == Var::b ? 2 : 1;
    const int wy = y_ == Var::b ? 2 : 1;
    return wx * key.first + wy * key.second;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    // Descending in x then y, which reads like the usual printed form.
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      detail::append_monomial(os, first, it->second, {{x_, it->first.first}, {y_, it->first.second}});
    }
    return os.str();
  }

 private:
  int slot(Var v) const {
    if (v == x_) return 0;
    if (v == y_) return 1;
    throw UsageError("variable " + std::string(var_name(v)) + " not in ring (" +
                     std::string(var_name(x_)) + "," + std::string(var_name(y_)) + ")");
  }
  void check_ring(const BiPoly& o) const {
    if (x_ != o.x_ || y_ != o.y_) throw UsageError("BiPoly ring mismatch");
  }

  Var x_, y_;
  Terms t_;
};

/// Sum of the monomials of maximal weight.
inline BiPoly top_weight_part(const BiPoly& p) {
  if (p.is_zero()) throw UsageError("top weight part of zero polynomial");
  int wmax = -1;
  for (const auto& [key, c] : p.terms()) wmax = std::max(wmax, p.weight(key));
  BiPoly r(p.x(), p.y());
  for (const auto& [key, c] : p.terms()) {
    if (p.weight(key) == wmax) r.add_term(key.first, key.second, c);
  }
  return r;
}

/// Polynomial in z whose coefficients (ascending) are BiPolys.
using ZPoly = std::vector<BiPoly>;

}  // namespace qes

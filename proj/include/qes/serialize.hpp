#pragma once

// JSON documents carry {"schema": "qes.<kind>", "version": N}. CSV files start
// with "# qes-csv v<N> <kind>: col,col,..." followed by a plain header row.

#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qes/crossing.hpp"
#include "qes/errors.hpp"
#include "qes/identity.hpp"
#include "qes/locus.hpp"
#include "qes/poly.hpp"
#include "qes/qes_family.hpp"
#include "qes/shooting.hpp"

namespace qes {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; "nan", "inf", "-inf" otherwise.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline Json envelope(const std::string& kind) {
  Json j;
  j["schema"] = "qes." + kind;
  j["version"] = kSchemaVersion;
  return j;
}

/// Rejects documents of another kind or version.
inline void check_envelope(const Json& j, const std::string& kind) {
  if (!j.is_object() || j.value("schema", "") != "qes." + kind) {
    throw UsageError("expected a qes." + kind + " document");
  }
  if (j.value("version", -1) != kSchemaVersion) {
    throw UsageError("qes." + kind + ": unsupported version " + j.value("version", Json(nullptr)).dump());
  }
}

inline Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const std::vector<cplx>& zs) {
  Json a = Json::array();
  for (const auto& z : zs) a.push_back(to_json(z));
  return a;
}

/// Integers that fit a long become numbers, others decimal strings.
inline Json integer_json(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw UsageError("bad integer: " + j.get<std::string>());
    return v;
  }
  throw UsageError("expected an integer, got " + j.dump());
}

/// [[m, k, num, den], ...] for the terms c x^m y^k.
inline Json to_json(const BiPoly& p) {
  Json a = Json::array();
  for (const auto& [key, c] : p.terms()) {
    a.push_back(Json::array({key.first, key.second, integer_json(c.get_num()), integer_json(c.get_den())}));
  }
  return a;
}

inline BiPoly bipoly_from_json(const Json& j, Var x, Var y) {
  if (!j.is_array()) throw UsageError("polynomial must be an array of [m, k, num, den]");
  BiPoly p(x, y);
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 4) throw UsageError("polynomial term must be [m, k, num, den]: " + t.dump());
    const Integer den = integer_from_json(t[3]);
    if (den == 0) throw UsageError("zero denominator in " + t.dump());
    p.add_term(t[0].get<int>(), t[1].get<int>(), make_rational(integer_from_json(t[2]), den));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Families.

inline Json to_json(const QESFamily& f) {
  Json j = envelope("family");
  j["n"] = f.n;
  Json cs = Json::array();
  for (const auto& c : f.coeffs) cs.push_back(to_json(c));
  j["coeffs"] = cs;
  j["qstar"] = to_json(f.qstar);
  j["qlambda"] = to_json(f.qlambda);
  return j;
}

inline QESFamily family_from_json(const Json& j) {
  check_envelope(j, "family");
  QESFamily f;
  f.n = j.at("n").get<int>();
  for (const auto& c : j.at("coeffs")) f.coeffs.push_back(bipoly_from_json(c, Var::a, Var::b));
  if (static_cast<int>(f.coeffs.size()) != f.n + 1) throw UsageError("family: expected n+1 coefficients");
  f.qstar = bipoly_from_json(j.at("qstar"), Var::a, Var::b);
  f.qlambda = bipoly_from_json(j.at("qlambda"), Var::lambda, Var::b);
  return f;
}

// ---------------------------------------------------------------------------
// Certificates.

inline Json to_json(const ExactCertificate& c) {
  Json j = envelope("exact_certificate");
  j["n"] = c.n;
  j["C"] = to_json(c.C);
  Json q = Json::array();
  for (const auto& x : c.q) q.push_back(to_json(x));
  j["q"] = q;
  j["proof"] = c.proof;
  j["constant_law"] = c.constant_law;
  return j;
}

inline Json to_json(const IdentityCertificate& c) {
  Json j;
  j["b"] = to_json(c.point.b);
  j["a"] = to_json(c.point.a);
  j["lambda"] = to_json(c.point.lambda);
  j["a_refined"] = to_json(c.a_refined);
  j["qdegree"] = c.qdegree;
  j["q"] = to_json(c.qcoeffs);
  j["C"] = to_json(c.C);
  j["residual"] = c.residual;
  j["backward_error"] = c.backward_error;
  j["condition"] = c.condition;
  j["certified"] = c.certified;
  return j;
}

// ---------------------------------------------------------------------------
// Locus.

inline Json to_json(const CriticalPoint& c) {
  Json j;
  j["b"] = c.b;
  j["lambda"] = c.lambda;
  j["a"] = c.a;
  j["b_interval"] = Json::array({c.b_interval.lo.get_str(), c.b_interval.hi.get_str()});
  return j;
}

inline Json critical_json(int n, const std::vector<CriticalPoint>& pts) {
  Json j = envelope("critical_points");
  j["n"] = n;
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  j["points"] = a;
  return j;
}

inline Json locus_json(int n, const std::vector<Branch>& branches) {
  Json j = envelope("locus");
  j["n"] = n;
  Json bs = Json::array();
  for (const auto& br : branches) {
    Json b;
    b["m"] = br.m;
    b["arcs"] = br.arcs;
    Json s = Json::array();
    for (const auto& x : br.samples) s.push_back(Json::array({x.b, x.lambda, x.a, x.real_zeros, x.arc}));
    b["columns"] = Json::array({"b", "lambda", "a", "real_zero_count", "arc"});
    b["samples"] = s;
    bs.push_back(b);
  }
  j["branches"] = bs;
  return j;
}

// ---------------------------------------------------------------------------
// Crossings and shooting.

inline Json to_json(const CrossingPoint& c) {
  Json j;
  j["k"] = c.k;
  j["b"] = c.b;
  j["lambda"] = c.lambda;
  j["a"] = c.a;
  j["residual"] = c.residual;
  j["bracket"] = c.bracket;
  return j;
}

inline Json to_json(const CrossingVerification& v) {
  Json j;
  j["J"] = -(v.n + 1);
  j["ratio"] = v.ratio;
  j["C"] = to_json(v.C);
  j["C_nonzero"] = v.C_nonzero;
  j["pass"] = v.pass;
  return j;
}

inline Json crossings_json(int n, const std::vector<CrossingPoint>& cps, const std::vector<CrossingVerification>& vs) {
  Json j = envelope("crossings");
  j["n"] = n;
  Json a = Json::array();
  for (std::size_t i = 0; i < cps.size(); ++i) {
    Json c = to_json(cps[i]);
    if (i < vs.size()) c["verification"] = to_json(vs[i]);
    a.push_back(c);
  }
  j["crossings"] = a;
  return j;
}

inline Json to_json(const EigenReport& r, const ShootingConfig& c) {
  Json j = envelope("eigenvalues");
  j["J"] = c.J;
  j["b"] = c.b;
  j["lo"] = r.lo;
  j["hi"] = r.hi;
  Json vs = Json::array();
  for (const auto& e : r.values) vs.push_back({{"lambda", e.lambda}, {"ratio", e.ratio}});
  j["values"] = vs;
  j["zero_count"] = r.zero_count;
  j["box"] = Json::array({r.box_lo, r.box_hi, r.box_h});
  j["unexplained_zeros"] = r.unexplained;
  j["max_imag_ratio"] = r.max_imag_ratio;
  return j;
}

inline Json detscan_json(const ShootingConfig& c, const std::vector<DetSample>& s) {
  Json j = envelope("detscan");
  j["J"] = c.J;
  j["b"] = c.b;
  j["precision_bits"] = c.precision_bits;
  Json a = Json::array();
  for (const auto& x : s) a.push_back(Json::array({x.lambda.real(), x.det.real(), x.det.imag(), x.logscale}));
  j["columns"] = Json::array({"lambda", "re_det", "im_det", "logscale"});
  j["samples"] = a;
  return j;
}

inline Json to_json(const RealityReport& r) {
  Json j;
  j["J"] = r.J;
  j["b"] = r.b;
  j["qes"] = r.qes;
  j["non_qes"] = r.non_qes;
  j["dual"] = r.dual;
  j["max_dual_diff"] = r.max_dual_diff;
  j["max_imag"] = r.max_imag;
  j["complex_pair"] = r.complex_pair;
  j["pass"] = r.pass;
  return j;
}

// ---------------------------------------------------------------------------
// CSV.

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::string& kind, std::vector<std::string> columns)
      : os_(os), cols_(std::move(columns)) {
    if (cols_.empty()) throw UsageError("CsvWriter: no columns");
    os_ << "# qes-csv v" << kSchemaVersion << ' ' << kind << ": " << join() << '\n' << join() << '\n';
  }

  template <class... T>
  void row(const T&... v) {
    if (sizeof...(v) != cols_.size()) throw UsageError("CsvWriter: row width does not match the header");
    std::size_t i = 0;
    ((os_ << (i++ ? "," : "") << field(v)), ...);
    os_ << '\n';
  }

 private:
  static std::string field(double x) { return format_double(x); }
  static std::string field(int x) { return std::to_string(x); }
  static std::string field(long x) { return std::to_string(x); }
  static std::string field(bool x) { return x ? "1" : "0"; }
  static std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  static std::string field(const char* s) { return field(std::string(s)); }

  std::string join() const {
    std::string s;
    for (std::size_t i = 0; i < cols_.size(); ++i) s += (i ? "," : "") + cols_[i];
    return s;
  }

  std::ostream& os_;
  std::vector<std::string> cols_;
};

}  // namespace qes

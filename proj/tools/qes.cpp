// qes: batch front end for the QES library. Exit codes: 0 pass, 1 mathematical
// failure, 2 usage or numeric error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qes/crossing.hpp"
#include "qes/identity.hpp"
#include "qes/locus.hpp"
#include "qes/precision.hpp"
#include "qes/qes_family.hpp"
#include "qes/serialize.hpp"
#include "qes/shooting.hpp"
#include "qes/verify.hpp"

namespace {

using namespace qes;

enum ExitCode { kPass = 0, kFail = 1, kError = 2 };

/// --config: a JSON object; nested objects address subcommands, e.g.
/// {"seed": 3, "crossings": {"n": 2, "count": 2}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config: top level must be a JSON object");
    std::vector<CLI::ConfigItem> out;
    walk(j, {}, out);
    return out;
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config: unsupported value " + v.dump());
  }

  static void walk(const Json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object()) {
        auto p = parents;
        p.push_back(k);
        walk(v, p, out);
        continue;
      }
      CLI::ConfigItem it;
      it.parents = parents;
      it.name = k;
      if (v.is_array()) {
        for (const auto& x : v) it.inputs.push_back(scalar(x));
      } else {
        it.inputs.push_back(scalar(v));
      }
      out.push_back(std::move(it));
    }
  }
};

struct Range {
  double lo = 0, hi = 0;
};

Range parse_range(const std::string& s, const std::string& what) {
  const auto c = s.find(':', 1);
  if (c == std::string::npos) throw UsageError(what + ": expected lo:hi, got '" + s + "'");
  Range r;
  try {
    std::size_t used = 0;
    r.lo = std::stod(s.substr(0, c), &used);
    if (used != c) throw std::invalid_argument("trailing");
    const std::string t = s.substr(c + 1);
    r.hi = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError(what + ": expected lo:hi, got '" + s + "'");
  }
  if (!(r.hi > r.lo)) throw UsageError(what + ": need lo < hi, got '" + s + "'");
  return r;
}

struct Globals {
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string format;  // empty: per-command default
  int precision_bits = 53;
  double rtol = 1e-10;
  double radius = 12;
};

struct Output {
  std::ostringstream text;
  int code = kPass;
};

std::string format_or(const Globals& g, const std::string& fallback, const std::vector<std::string>& allowed,
                      const std::string& cmd) {
  const std::string f = g.format.empty() ? fallback : g.format;
  for (const auto& a : allowed) {
    if (a == f) return f;
  }
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
  throw UsageError(cmd + ": format '" + f + "' not supported (use " + list + ")");
}

ShootingConfig shooting_config(const Globals& g, double J, double b) {
  ShootingConfig c;
  c.J = J;
  c.b = b;
  c.rtol = g.rtol;
  c.R = g.radius;
  c.precision_bits = precision_bits_from_env(g.precision_bits);
  validate(c);
  return c;
}

void print_report(std::ostream& os, const CheckReport& r, const std::string& params) {
  os << "verify " << r.kind << params << "\n";
  for (const auto& [k, v] : r.metrics) os << "  " << k << " = " << format_double(v) << "\n";
  for (const auto& n : r.notes) os << "  " << n << "\n";
  os << (r.pass ? "PASS" : "FAIL") << "\n";
}

Json report_json(const CheckReport& r) {
  Json j = envelope("verify");
  j["kind"] = r.kind;
  Json m = Json::object();
  for (const auto& [k, v] : r.metrics) m[k] = v;
  j["metrics"] = m;
  j["notes"] = r.notes;
  j["pass"] = r.pass;
  return j;
}

// ---------------------------------------------------------------------------

std::string p_text(const QESFamily& f) {
  std::string s;
  for (int j = 0; j <= f.n; ++j) {
    const int k = f.n - j;
    const auto& c = f.coeffs[static_cast<std::size_t>(j)];
    if (c.is_zero()) continue;
    const std::string zk = k == 0 ? "" : (k == 1 ? "z" : "z^" + std::to_string(k));
    std::string term;
    if (c == BiPoly::constant(1)) {
      term = zk.empty() ? "1" : zk;
    } else {
      term = "(" + c.to_string() + ")" + (zk.empty() ? "" : "*" + zk);
    }
    s += (s.empty() ? "" : " + ") + term;
  }
  return s;
}

void cmd_table(const Globals& g, int n, Output& out) {
  const auto f = build_family(n);
  const std::string fmt = format_or(g, "text", {"text", "json"}, "table");
  std::optional<ExactCertificate> cert;
  if (n >= 1 && n <= kExactCertificateMax) cert = exact_certificate(n);
  const BiPoly law = f.qstar.derivative(Var::a) * make_rational(1, 1L << n);
  if (fmt == "json") {
    Json j = to_json(f);
    if (cert) {
      j["cstar"] = to_json(cert->C);
      j["cstar_exact"] = true;
    } else if (n >= 1) {
      j["cstar"] = to_json(law);
      j["cstar_exact"] = false;
    } else {
      j["cstar"] = nullptr;
    }
    out.text << j.dump(2) << "\n";
    return;
  }
  const std::string J = std::to_string(n + 1);
  out.text << "n = " << n << "\n";
  out.text << "p_" << n << "(z) = " << p_text(f) << "\n";
  out.text << "Q*_" << J << "(b,a) = " << f.qstar.to_string() << "\n";
  out.text << "Q_" << J << "(b,lambda) = " << f.qlambda.to_string() << "\n";
  if (cert) {
    out.text << "C*(b,a) = " << cert->C.to_string() << " = 2^-" << n << " dQ*_" << J << "/da"
             << (cert->constant_law ? "" : " FAILS") << "\n";
    if (!cert->proof || !cert->constant_law) out.code = kFail;
  } else if (n >= 1) {
    out.text << "C*(b,a) = " << law.to_string() << " (2^-" << n << " dQ*_" << J
             << "/da; exact certificates stop at n = " << kExactCertificateMax << ")\n";
  } else {
    out.text << "C*(b,a): undefined for n = 0\n";
  }
}

void cmd_locus(const Globals& g, int n, const Range& br, double step, Output& out) {
  const std::string fmt = format_or(g, "csv", {"csv", "json"}, "locus");
  const auto f = build_family(n);
  TraceOptions opt;
  if (!(step > 0)) throw UsageError("locus: step must be positive");
  opt.h_max = step;
  opt.h_init = std::min(opt.h_init, step);
  std::vector<Branch> branches;
  for (int m = 0; m <= n / 2; ++m) branches.push_back(trace_branch(f, m, br.lo, br.hi, opt));
  if (fmt == "json") {
    out.text << locus_json(n, branches).dump(2) << "\n";
    return;
  }
  CsvWriter w(out.text, "locus", {"b", "lambda", "a", "real_zero_count", "m", "arc"});
  for (const auto& b : branches) {
    for (const auto& s : b.samples) w.row(s.b, s.lambda, s.a, s.real_zeros, b.m, s.arc);
  }
}

void cmd_crossings(const Globals& g, int n, int count, bool verify, Output& out) {
  const std::string fmt = format_or(g, "csv", {"csv", "json"}, "crossings");
  if (count < 1) throw UsageError("crossings: count must be positive");
  const auto cps = find_crossings(n, count);
  std::vector<CrossingVerification> vs;
  if (verify) {
    const auto c = shooting_config(g, -(n + 1), 0);
    for (const auto& cp : cps) {
      vs.push_back(verify_crossing(n, cp, c));
      if (!vs.back().pass) out.code = kFail;
    }
  }
  if (fmt == "json") {
    out.text << crossings_json(n, cps, vs).dump(2) << "\n";
    return;
  }
  if (!verify) {
    CsvWriter w(out.text, "crossings", {"k", "b", "lambda", "a", "residual"});
    for (const auto& cp : cps) w.row(cp.k, cp.b, cp.lambda, cp.a, cp.residual);
    return;
  }
  CsvWriter w(out.text, "crossings", {"k", "b", "lambda", "a", "residual", "det_ratio", "pass"});
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const auto& cp = cps[i];
    w.row(cp.k, cp.b, cp.lambda, cp.a, cp.residual, vs[i].ratio, std::string(vs[i].pass ? "PASS" : "FAIL"));
  }
}

struct VerifyArgs {
  std::string kind;
  int n = 3;
  int J = 1;
  double b = 0;
  int count = 6;
  int samples = 20;
  bool n_set = false, b_set = false;
};

void cmd_verify(const Globals& g, const VerifyArgs& a, Output& out) {
  const std::string fmt = format_or(g, "text", {"text", "json"}, "verify");
  CheckReport r;
  std::string params = " n=" + std::to_string(a.n);
  if (a.kind == "equilibrium") {
    const int lo = a.n_set ? a.n : 1, hi = a.n_set ? a.n : 6;
    r = check_equilibrium(lo, hi, a.samples, g.seed);
    params = " n=" + std::to_string(lo) + ".." + std::to_string(hi) + " seed=" + std::to_string(g.seed);
  } else if (a.kind == "identity") {
    r = check_identity(a.n, a.samples, g.seed);
    params += " seed=" + std::to_string(g.seed);
  } else if (a.kind == "constant") {
    r = check_constant(a.n, g.seed);
    params += " seed=" + std::to_string(g.seed);
  } else if (a.kind == "topweight") {
    r = check_topweight(a.n);
  } else if (a.kind == "discriminant") {
    r = check_discriminant(a.n);
  } else if (a.kind == "asymptotics") {
    const double b = a.b_set ? a.b : 1e4;
    r = check_asymptotics(a.n, b);
    params += " b=" + format_double(b);
  } else if (a.kind == "reality") {
    r = check_reality(a.J, a.b, a.count, shooting_config(g, a.J, a.b));
    params = " J=" + std::to_string(a.J) + " b=" + format_double(a.b) + " count=" + std::to_string(a.count);
  } else {
    throw UsageError("verify: unknown kind '" + a.kind + "'");
  }
  if (fmt == "json") {
    out.text << report_json(r).dump(2) << "\n";
  } else {
    print_report(out.text, r, params);
  }
  if (!r.pass) out.code = kFail;
}

void cmd_detscan(const Globals& g, double J, double b, const Range& lr, int points, Output& out) {
  const std::string fmt = format_or(g, "csv", {"csv", "json"}, "detscan");
  if (points < 2) throw UsageError("detscan: points must be at least 2");
  const auto c = shooting_config(g, J, b);
  std::vector<DetSample> s;
  for (int i = 0; i < points; ++i) {
    const double l = lr.lo + (lr.hi - lr.lo) * i / (points - 1);
    s.push_back(spectral_det(c, cplx(l, 0)));
  }
  if (fmt == "json") {
    out.text << detscan_json(c, s).dump(2) << "\n";
    return;
  }
  CsvWriter w(out.text, "detscan", {"lambda", "re_det", "im_det", "logscale"});
  for (const auto& x : s) w.row(x.lambda.real(), x.det.real(), x.det.imag(), x.logscale);
}

void cmd_eigen(const Globals& g, double J, double b, const Range& lr, double step, Output& out) {
  const std::string fmt = format_or(g, "json", {"csv", "json"}, "eigen");
  const auto c = shooting_config(g, J, b);
  const auto r = eigenvalues(c, lr.lo, lr.hi, step > 0 ? step : scan_step(b));
  if (fmt == "json") {
    out.text << to_json(r, c).dump(2) << "\n";
    return;
  }
  CsvWriter w(out.text, "eigenvalues", {"lambda", "det_ratio"});
  for (const auto& e : r.values) w.row(e.lambda, e.ratio);
}

void cmd_critical(const Globals& g, int n, const Range& br, Output& out) {
  const std::string fmt = format_or(g, "json", {"csv", "json"}, "critical");
  const auto pts = qes_critical_points(build_family(n), Rational(br.lo), Rational(br.hi));
  if (fmt == "json") {
    out.text << critical_json(n, pts).dump(2) << "\n";
    return;
  }
  CsvWriter w(out.text, "critical", {"b", "lambda", "a"});
  for (const auto& p : pts) w.row(p.b, p.lambda, p.a);
}

void cmd_certificate(const Globals& g, int n, bool at_b, double b, Output& out) {
  if (!at_b) {
    const std::string fmt = format_or(g, "text", {"text", "json"}, "certificate");
    const auto c = exact_certificate(n);
    out.text << (fmt == "json" ? to_json(c).dump(2) + "\n" : to_text(c));
    if (!c.proof || !c.constant_law) out.code = kFail;
    return;
  }
  const std::string fmt = format_or(g, "json", {"csv", "json"}, "certificate");
  const auto f = build_family(n);
  std::vector<IdentityCertificate> cs;
  for (const auto& pt : eigenvalues_at(f, b)) {
    cs.push_back(solve_certificate(pt));
    if (!cs.back().certified) out.code = kFail;
  }
  if (fmt == "json") {
    Json j = envelope("certificates");
    j["n"] = n;
    j["b"] = b;
    Json a = Json::array();
    for (const auto& c : cs) a.push_back(to_json(c));
    j["certificates"] = a;
    out.text << j.dump(2) << "\n";
    return;
  }
  CsvWriter w(out.text, "certificates", {"re_lambda", "im_lambda", "re_C", "im_C", "residual", "certified"});
  for (const auto& c : cs) {
    w.row(c.point.lambda.real(), c.point.lambda.imag(), c.C.real(), c.C.imag(), c.residual, c.certified);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QES spectra of L_J(y) = y'' - (z^4 - 2bz^2 + 2Jz)y"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values; nested objects address subcommands");

  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized verification points")->capture_default_str();
  app.add_option("--out,-o", g.out, "Output file, '-' for stdout")->capture_default_str();
  app.add_option("--format", g.format, "Output format (default depends on the command)")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--precision-bits", g.precision_bits,
                 "Shooting precision: 53, 64 or 113 bits; QES_PRECISION_BITS overrides")
      ->check(CLI::IsMember({53, 64, 113}))
      ->capture_default_str();
  app.add_option("--rtol", g.rtol, "Relative tolerance of the shooting integrator")->capture_default_str();
  app.add_option("--radius", g.radius, "Starting radius on the Stokes rays (raised automatically)")
      ->capture_default_str();

  int n = 2, count = 3, points = 201;
  double J = 1, b = 0, step = 0.1, estep = 0;
  std::string brange = "-6:6", lrange = "0:20";
  bool verify_shooting = false;

  auto* table = app.add_subcommand("table", "Print p_n, Q*_{n+1}, Q_{n+1} and C* (text or json)")->fallthrough();
  table->add_option("--n", n, "Degree n of p_n")->required();

  auto* locus = app.add_subcommand("locus", "Trace all real branches of the QES locus (csv or json)")->fallthrough();
  locus->add_option("--n", n, "Degree n")->required();
  locus->add_option("--b", brange, "Window lo:hi in b")->capture_default_str();
  locus->add_option("--step", step, "Largest continuation step")->capture_default_str();

  auto* crossings =
      app.add_subcommand("crossings", "QES/non-QES level crossings for even n (csv or json)")->fallthrough();
  crossings->add_option("--n", n, "Even degree n; odd n is unsupported")->required();
  crossings->add_option("--count", count, "Number of crossings below b = 0")->capture_default_str();
  crossings->add_flag("--verify-shooting", verify_shooting, "Check the determinant of L_{-(n+1)} at each crossing");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run one check and report PASS or FAIL (text or json)")->fallthrough();
  verify
      ->add_option("kind", va.kind, "equilibrium|identity|constant|topweight|discriminant|asymptotics|reality")
      ->required()
      ->check(CLI::IsMember({"equilibrium", "identity", "constant", "topweight", "discriminant", "asymptotics",
                             "reality"}));
  auto* vn = verify->add_option("--n", va.n, "Degree n (equilibrium: all of 1..6 when omitted)")->capture_default_str();
  verify->add_option("--J", va.J, "J for reality (1..4)")->capture_default_str();
  auto* vb = verify->add_option("--b", va.b, "b (asymptotics default 1e4, reality default 0)");
  verify->add_option("--count", va.count, "Non-QES eigenvalues for reality (1..8)")->capture_default_str();
  verify->add_option("--samples", va.samples, "Random points for equilibrium/identity")->capture_default_str();

  auto* detscan = app.add_subcommand("detscan", "Spectral determinant on a real lambda grid (csv or json)")->fallthrough();
  detscan->add_option("--J", J, "J (any real)")->capture_default_str();
  detscan->add_option("--b", b, "b")->capture_default_str();
  detscan->add_option("--lambda", lrange, "Window lo:hi in lambda")->capture_default_str();
  detscan->add_option("--points", points, "Grid points")->capture_default_str();

  auto* eigen = app.add_subcommand("eigen", "Real eigenvalues and a zero count in a window (json or csv)")->fallthrough();
  eigen->add_option("--J", J, "J (any real)")->capture_default_str();
  eigen->add_option("--b", b, "b")->capture_default_str();
  eigen->add_option("--lambda", lrange, "Window lo:hi in lambda")->capture_default_str();
  eigen->add_option("--step", estep, "Grid step (default grows with sqrt|b|)");

  auto* critical = app.add_subcommand("critical", "Real critical points of the QES locus (json or csv)")->fallthrough();
  critical->add_option("--n", n, "Degree n")->required();
  critical->add_option("--b", brange, "Window lo:hi in b")->capture_default_str();

  double cb = 0;
  auto* certificate =
      app.add_subcommand("certificate", "Exact certificate (n <= 4), or numeric ones at --b")->fallthrough();
  certificate->add_option("--n", n, "Degree n")->required();
  auto* cbo = certificate->add_option("--b", cb, "Numeric certificates at every QES point of this b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  Output out;
  try {
    if (table->parsed()) {
      cmd_table(g, n, out);
    } else if (locus->parsed()) {
      cmd_locus(g, n, parse_range(brange, "locus --b"), step, out);
    } else if (crossings->parsed()) {
      cmd_crossings(g, n, count, verify_shooting, out);
    } else if (verify->parsed()) {
      va.n_set = vn->count() > 0;
      va.b_set = vb->count() > 0;
      cmd_verify(g, va, out);
    } else if (detscan->parsed()) {
      cmd_detscan(g, J, b, parse_range(lrange, "detscan --lambda"), points, out);
    } else if (eigen->parsed()) {
      cmd_eigen(g, J, b, parse_range(lrange, "eigen --lambda"), estep, out);
    } else if (critical->parsed()) {
      cmd_critical(g, n, parse_range(brange, "critical --b"), out);
    } else if (certificate->parsed()) {
      cmd_certificate(g, n, cbo->count() > 0, cb, out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kError;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }

  if (g.out == "-") {
    std::cout << out.text.str() << std::flush;
  } else {
    std::ofstream f(g.out, std::ios::binary);
    f << out.text.str();
    if (!f) {
      std::cerr << "error: cannot write " << g.out << "\n";
      return kError;
    }
  }
  return out.code;
}

#include <gtest/gtest.h>

#include <sstream>

#include "qes/serialize.hpp"

namespace qes {
namespace {

TEST(Json, FamilyRoundTrip) {
  for (int n = 0; n <= 6; ++n) {
    const auto f = build_family(n);
    const auto j = to_json(f);
    EXPECT_EQ(j["schema"], "qes.family");
    EXPECT_EQ(j["version"], kSchemaVersion);
    const auto g = family_from_json(Json::parse(j.dump()));
    EXPECT_EQ(g.n, n);
    EXPECT_EQ(g.qstar, f.qstar);
    EXPECT_EQ(g.qlambda, f.qlambda);
    for (int k = 0; k <= n; ++k) EXPECT_EQ(g.coeffs[k], f.coeffs[k]);
  }
}

TEST(Json, TermLayout) {
  // Q*_3 = a^3 - 4ab + 2
  const auto j = to_json(build_family(2).qstar);
  EXPECT_EQ(j.dump(), "[[0,0,2,1],[1,1,-4,1],[3,0,1,1]]");
}

TEST(Json, BigIntegersAsStrings) {
  BiPoly p;
  p.add_term(1, 0, make_rational(Integer("123456789012345678901234567890"), Integer(7)));
  const auto j = to_json(p);
  EXPECT_TRUE(j[0][2].is_string());
  EXPECT_EQ(bipoly_from_json(j, Var::a, Var::b), p);
}

TEST(Json, EnvelopeChecked) {
  auto j = to_json(build_family(1));
  j["version"] = kSchemaVersion + 1;
  EXPECT_THROW(family_from_json(j), UsageError);
  j = to_json(build_family(1));
  j["schema"] = "qes.locus";
  EXPECT_THROW(family_from_json(j), UsageError);
  EXPECT_THROW(bipoly_from_json(Json::parse("[[1,0,1,0]]"), Var::a, Var::b), UsageError);
}

TEST(Csv, HeaderAndRows) {
  std::ostringstream os;
  CsvWriter w(os, "demo", {"x", "n", "label"});
  w.row(0.1, 3, std::string("a,b"));
  w.row(-2.0, -1, std::string("plain"));
  EXPECT_EQ(os.str(), "# qes-csv v1 demo: x,n,label\nx,n,label\n0.1,3,\"a,b\"\n-2,-1,plain\n");
  EXPECT_THROW(w.row(1.0), UsageError);
}

TEST(Format, RoundTripDoubles) {
  for (double x : {0.1, -1.4729153716767265, 1e-300, 6.02e23}) EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

}  // namespace
}  // namespace qes

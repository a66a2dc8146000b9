#include <gtest/gtest.h>

#include "shiftlab/json.hpp"
#include "shiftlab/shiftlab.hpp"

using namespace shiftlab;
using shiftlab::io::json;

TEST(Json, RationalRoundTrip) {
  for (const Rational& r : {Rational(0), Rational(11, 9), Rational(-3, 7), Rational(BigInt("123456789012345678901234567890"), BigInt(7))}) {
    const auto j = io::to_json(r);
    EXPECT_EQ(io::rational_from_json(j), r);
    EXPECT_TRUE(j.at("num").is_string());
  }
  EXPECT_EQ(io::rational_from_json(json("3/10")), Rational(3, 10));
  EXPECT_EQ(io::rational_from_json(json(4)), Rational(4));
  EXPECT_THROW(io::rational_from_json(json(0.5)), usage_error);
}

TEST(Json, BigIntsAreStrings) {
  const BigInt big = ipow(2, 200);
  EXPECT_EQ(io::to_json(big).get<std::string>(), big.str());
}

TEST(Json, CertificateIsDeterministic) {
  const auto a = io::to_json(refute_almost_spec(MistakeFunction::log_budget())).dump(2);
  const auto b = io::to_json(refute_almost_spec(MistakeFunction::log_budget())).dump(2);
  EXPECT_EQ(a, b);
  const auto j = json::parse(a);
  EXPECT_EQ(j.at("steps").size(), 5u);
  EXPECT_EQ(j.at("mistake_function").get<std::string>(), MistakeFunction::log_budget().id());
  EXPECT_TRUE(j.at("params").at("s").is_object() || j.at("params").at("s").is_string());
}

TEST(Json, WindowRoundTrip) {
  const auto w = MatrixWindow::from_rows({"abc", "aab", "bbb"});
  EXPECT_EQ(io::window_from_json(io::to_json(w)), w);
  EXPECT_THROW(io::window_from_json(json("abc")), usage_error);
}

TEST(Json, ProductSpecLoader) {
  const auto j = json::parse(R"({"segments":[{"source":["cc","cc","cc","cc","bb"],"alpha":0,"beta":1}]})");
  const auto segs = io::product_spec_from_json(j);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].source.rows(), 5u);
  EXPECT_EQ(segs[0].beta, 1);
}

TEST(Json, FamilyTable) {
  const auto fam = io::family_from_json(json::parse(R"({"kind":"custom-table","horizon":10,"entries":[[1,1],[4,4],[9,9]]})"));
  EXPECT_EQ(fam.kind(), FamilyKind::custom_table);
  EXPECT_EQ(fam.max_special(10), RestrictionFamily::squares().max_special(10));
  EXPECT_EQ(io::family_from_json(json::parse(R"({"kind":"prefix"})")).kind(), FamilyKind::prefix);
}

TEST(Json, FamilyTableErrors) {
  EXPECT_THROW(io::family_from_json(json::parse(R"({"kind":"cubes"})")), usage_error);
  EXPECT_THROW(io::family_from_json(json::parse(R"({"kind":"custom-table","entries":[[1,1]]})")), usage_error);
  EXPECT_THROW(io::family_from_json(json::parse(R"({"kind":"custom-table","horizon":5,"entries":[[2,1]]})")), usage_error);
  EXPECT_THROW(io::family_from_json(json::parse(R"({"kind":"custom-table","horizon":5,"entries":[[1,1],[7,7]]})")), usage_error);
  EXPECT_THROW(io::resolve_family("/nonexistent/table.json"), usage_error);
  EXPECT_THROW(io::read_json_file("/nonexistent/x.json"), usage_error);
}

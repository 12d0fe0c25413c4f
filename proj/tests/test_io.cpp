#include <gtest/gtest.h>

#include "jetcalc/json_io.hpp"
#include "test_support.hpp"

using namespace jetcalc;
using namespace jetcalc::test;
using jetcalc::io::Json;

TEST(Io, JetHomRoundTrip) {
  JetHom h = factorize(Op("[[dx*dy, [x]], [1, dy^2]]", 2));
  Json j = io::to_json(h);
  EXPECT_EQ(j["basis"].size(), h.domain().rank());
  EXPECT_EQ(io::jet_hom_from_json(j), h);
  j["basis"][0]["fiber"] = 1;
  EXPECT_THROW(io::jet_hom_from_json(j), InvalidInput);
}

TEST(Io, TestSectionRoundTrip) {
  TestSection t(Box({{Q("-1/2"), Rational(1)}, {Rational(0), Rational(3)}}), 3, S("x*y - 1/7, y", 2));
  EXPECT_EQ(io::test_section_from_json(io::to_json(t)), t);
}

TEST(Io, DistributionRoundTrip) {
  Box box = Box::unit(2);
  Distribution d = Distribution::evaluation({Q("1/3"), Q("2/5")}, MultiIndex{1, 2}, 1, 2, Q("-3/4")) +
                   Distribution::embedded(TestSection(box, 2, S("x, y^2", 2)));
  Distribution back = io::distribution_from_json(io::to_json(d), 2, 2, box);
  EXPECT_TRUE(back.equivalent(d));
  Json plain = Json::parse(R"({"density": {"polys": ["x^2"]}})");
  EXPECT_TRUE(io::distribution_from_json(plain, 1, 1, Box::unit(1)).equivalent(Distribution::density({P("x^2")})));
}

TEST(Io, RationalsAreExactStrings) {
  Json j = io::rational_array({Q("1/3"), Rational(-2)});
  EXPECT_EQ(j.dump(), R"(["1/3","-2"])");
  EXPECT_THROW(io::parse_rational_array(Json::parse(R"(["1/0"])")), ParseError);
}

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace jetcalc;
using namespace jetcalc::test;

TEST(RingCore, Arithmetic) {
  EXPECT_EQ(P("x+1") * P("x-1"), P("x^2-1"));
  EXPECT_EQ(P("3*x*y", 2) + Poly(2), P("3*x*y", 2));
  EXPECT_EQ(P("x^2*y", 2) * Q("3/2"), P("3/2*x^2*y", 2));
  EXPECT_THROW(P("x") + P("x", 2), InvalidInput);
}

TEST(RingCore, Partials) {
  EXPECT_EQ(partial(0, P("x^2*y", 2)), P("2*x*y", 2));
  EXPECT_EQ(partial(1, P("x^2", 2)), Poly(2));
  EXPECT_EQ(partial(0, P("x^3")), P("3*x^2"));
  EXPECT_THROW(partial(2, P("x", 2)), InvalidInput);
}

TEST(RingCore, MixedPartialsCommuteAndLeibniz) {
  Sampler rng(7);
  for (int i = 0; i < 30; ++i) {
    Poly a = rng.poly(3, 4), b = rng.poly(3, 4);
    EXPECT_EQ(partial(0, partial(2, a)), partial(2, partial(0, a)));
    EXPECT_EQ(partial(1, a * b), partial(1, a) * b + a * partial(1, b));
  }
}

TEST(RingCore, Evaluation) {
  EXPECT_EQ(eval(P("x^2+y", 2), {Rational(2), Rational(3)}), 7);
  EXPECT_EQ(eval(Poly(2), {Rational(5), Rational(-1)}), 0);
  EXPECT_EQ(eval(P("x*(1-x)"), {Q("1/2")}), Q("1/4"));
  EXPECT_THROW(eval(P("x", 2), {Rational(1)}), InvalidInput);
}

TEST(RingCore, CanonicalForms) {
  EXPECT_EQ(to_string(P("1 - x + 3/2*x^2*y", 2)), "3/2*x^2*y - x + 1");
  EXPECT_EQ(to_string(P("(x+y)^2 - 2*x*y", 2)), "x^2 + y^2");
  EXPECT_EQ(to_string(Poly(1)), "0");
  EXPECT_EQ(to_string(P("-x/3 + 4/6")), "-1/3*x + 2/3");
  EXPECT_EQ(P("x^2").degree(), 2);
  EXPECT_EQ(Poly(1).degree(), -1);
}

TEST(RingCore, ParsePrintRoundTrip) {
  Sampler rng(11);
  for (int i = 0; i < 50; ++i) {
    Poly p = rng.poly(4, 4);
    EXPECT_EQ(parse_poly(to_string(p), 4), p);
  }
}

TEST(RingCore, ParseErrorsCarryPositions) {
  try {
    parse_poly("x + * y", 2);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse_poly("x^", 1), ParseError);
  EXPECT_THROW(parse_poly("q", 1), ParseError);
  EXPECT_THROW(parse_poly("y", 1), ParseError);
  EXPECT_THROW(parse_poly("x/0", 1), ParseError);
}

TEST(RingCore, DimensionInference) {
  EXPECT_EQ(infer_dimension("x + 1"), 1u);
  EXPECT_EQ(infer_dimension("dz + [x]"), 3u);
  EXPECT_EQ(infer_dimension("w"), 4u);
}

TEST(RingCore, DivideByLinear) {
  EXPECT_EQ(divide_by_linear(P("x^2-1"), 0, Rational(1)), P("x+1"));
  EXPECT_FALSE(divide_by_linear(P("x^2+1"), 0, Rational(1)).has_value());
}

TEST(RingCore, MultiIndexCombinatorics) {
  EXPECT_EQ(multi_indices_up_to(2, 2).size(), 6u);
  EXPECT_EQ(binomial(MultiIndex{2, 1}, MultiIndex{1, 1}), 2);
  EXPECT_EQ(factorial(MultiIndex{3, 2}), 12);
  EXPECT_LT(MultiIndex({1, 0}), MultiIndex({0, 2}));
}

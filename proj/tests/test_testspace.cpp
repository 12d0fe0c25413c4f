#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace jetcalc;
using namespace jetcalc::test;

TEST(TestSpace, BoxValidation) {
  EXPECT_THROW(Box({{Rational(1), Rational(1)}}), InvalidInput);
  Box b({{Rational(-1), Rational(2)}});
  EXPECT_EQ(b.bump(), P("(x+1)*(2-x)"));
  EXPECT_TRUE(b.strictly_contains({Rational(0)}));
  EXPECT_FALSE(b.strictly_contains({Rational(2)}));
}

TEST(TestSpace, IntegrateExamples) {
  Box unit = Box::unit(1);
  EXPECT_EQ(integrate(TestSection(unit, 1, S("1")), 0), Q("1/6"));
  EXPECT_EQ(integrate(TestSection(unit, 1, S("0")), 0), 0);
  EXPECT_EQ(integrate(P("x*y", 2), Box::unit(2)), Q("1/4"));
  Sampler rng(29);
  for (int i = 0; i < 10; ++i) {
    TestSection t(Box::unit(2), 2, rng.section(2, 1, 3));
    EXPECT_EQ(integrate(apply_operator(Op("dx", 2), t), 0), 0);
    EXPECT_EQ(integrate(apply_operator(Op("dy", 2), t), 0), 0);
  }
}

TEST(TestSpace, IntegrationByParts) {
  Sampler rng(31);
  Box box({{Rational(-1), Q("1/2")}, {Rational(0), Rational(2)}});
  for (int i = 0; i < 10; ++i) {
    Poly a = rng.poly(2, 2);
    TestSection t(box, 1, rng.section(2, 1, 2));
    Rational lhs = integrate(partial(0, a) * t.realize()[0], box);
    Rational rhs = -integrate(a * partial(0, t.realize()[0]), box);
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(TestSpace, BoundaryVanishing) {
  Sampler rng(37);
  Box box = Box::unit(2);
  for (unsigned p = 1; p <= 3; ++p) {
    Poly s = TestSection(box, p, rng.section(2, 1, 2)).realize()[0];
    for (const auto& alpha : multi_indices_up_to(2, p - 1))
      for (int k = 0; k <= 4; ++k) {
        Rational t(k, 4);
        t.canonicalize();
        EXPECT_EQ(eval(partial(alpha, s), {Rational(0), t}), 0);
        EXPECT_EQ(eval(partial(alpha, s), {Rational(1), t}), 0);
        EXPECT_EQ(eval(partial(alpha, s), {t, Rational(0)}), 0);
        EXPECT_EQ(eval(partial(alpha, s), {t, Rational(1)}), 0);
      }
  }
}

TEST(TestSpace, MulScalarExamples) {
  TestSection s(Box::unit(1), 2, S("x + 1"));
  EXPECT_EQ(mul_scalar(P("1"), s), s);
  EXPECT_EQ(mul_scalar(P("x"), TestSection(Box::unit(1), 2, S("1"))).polynomial_part(), S("x"));
  EXPECT_EQ(mul_scalar(P("x") * P("x+2"), s), mul_scalar(P("x"), mul_scalar(P("x+2"), s)));
}

TEST(TestSpace, ApplyOperatorExamples) {
  TestSection s(Box::unit(1), 1, S("1"));
  TestSection d = apply_operator(Op("dx"), s);
  EXPECT_EQ(d.bump_exponent(), 0u);
  EXPECT_EQ(d.realize(), S("1 - 2*x"));
  EXPECT_EQ(d.realize(), partial(0, S("x*(1-x)")));
  EXPECT_EQ(eval(d.realize()[0], {Q("1/2")}), 0);
  TestSection f(Box::unit(1), 3, S("x^2"));
  EXPECT_EQ(apply_operator(NormalOperator::multiplication(P("x+1")), f), mul_scalar(P("x+1"), f));
  EXPECT_TRUE(apply_operator(NormalOperator::zero(1, 1, 1), f).realize().is_zero());
  EXPECT_THROW(apply_operator(Op("dx^2"), s), InvalidInput);
}

TEST(TestSpace, ApplyOperatorMatchesRealizedAction) {
  Sampler rng(41);
  Box box({{Q("-1/2"), Rational(1)}, {Rational(1), Rational(3)}});
  for (int i = 0; i < 20; ++i) {
    NormalOperator op = rng.op(2, 2, 1, 2, 2);
    TestSection t(box, 3, rng.section(2, 2, 2));
    TestSection out = apply_operator(op, t);
    EXPECT_EQ(out.bump_exponent(), 1u);
    EXPECT_EQ(out.realize(), oracle::apply_termwise(op, t.realize()));
  }
}

TEST(TestSpace, ContractDualExamples) {
  TestSection s(Box::unit(1), 2, S("x^2 + 1"));
  EXPECT_EQ(contract_dual(S("1"), s), s);
  TestSection two(Box::unit(1), 2, S("1, x"));
  EXPECT_EQ(contract_dual(S("x, 1"), two).polynomial_part(), S("2*x"));
  EXPECT_TRUE(contract_dual(S("0, 0"), two).realize().is_zero());
  EXPECT_THROW(contract_dual(S("1"), two), InvalidInput);
}

TEST(TestSpace, SeminormExamples) {
  TestSection s(Box::unit(1), 1, S("1"));
  auto v0 = seminorm(FiberJetFunction::slot(MultiIndex{0}, 0), s);
  EXPECT_NEAR(v0.value, 0.25, 1e-6);
  EXPECT_EQ(v0.resolution, 1024u);
  auto v1 = seminorm(FiberJetFunction::slot(MultiIndex{1}, 0), s);
  EXPECT_NEAR(v1.value, 1.0, 1e-6);
  EXPECT_EQ(seminorm(FiberJetFunction::slot(MultiIndex{0}, 0), TestSection(Box::unit(1), 1, S("0"))).value, 0.0);
}

TEST(TestSpace, SeminormWorkersAreDeterministic) {
  TestSection s(Box::unit(2), 2, S("x - y^2 + 1/3", 2));
  FiberJetFunction phi(Op("[x]*dx + dy^2", 2));
  auto one = seminorm(phi, s, 64, 1);
  auto four = seminorm(phi, s, 64, 4);
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.grid_spacing, four.grid_spacing);
}

TEST(TestSpace, SeminormCompatibility) {
  Sampler rng(43);
  Box box = Box::unit(1);
  for (int i = 0; i < 5; ++i) {
    TestSection s(box, 3, rng.section(1, 2, 2));
    FreeModuleElement sigma = rng.section(1, 2, 1);
    FiberJetFunction phi(Op("dx + [x]"));
    double lhs = seminorm(phi, contract_dual(sigma, s), 256).value;
    double rhs = seminorm(pullback(phi, sigma), s, 256).value;
    EXPECT_NEAR(lhs, rhs, 1e-6 * std::max(1.0, std::abs(rhs)));
    NormalOperator op = rng.op(1, 2, 1, 1, 1);
    TestSection t(box, 3, rng.section(1, 2, 2));
    double a = seminorm(phi, apply_operator(op, t), 256).value;
    double b = seminorm(pullback(phi, op), t, 256).value;
    EXPECT_NEAR(a, b, 1e-6 * std::max(1.0, std::abs(b)));
  }
}

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace jetcalc;
using namespace jetcalc::test;

namespace {

TestSection bump1(const std::string& q, unsigned p = 1) { return TestSection(Box::unit(1), p, S(q)); }
Distribution ev(const std::string& x, unsigned a) { return Distribution::evaluation({Q(x)}, MultiIndex{a}); }

}  // namespace

TEST(Dist, PairExamples) {
  EXPECT_EQ(pair(bump1("1"), ev("1/2", 0)), Q("1/4"));
  EXPECT_EQ(pair(bump1("1"), Distribution(1, 1)), 0);
  EXPECT_EQ(pair(bump1("1"), Distribution::density({P("1")})), Q("1/6"));
  EXPECT_THROW(pair(bump1("1"), ev("2", 0)), InvalidInput);
}

TEST(Dist, EmbeddedDensityPairsAsIntegral) {
  TestSection t(Box::unit(1), 2, S("x"));
  Distribution e = Distribution::embedded(t);
  EXPECT_EQ(pair(bump1("1"), e), integrate(P("x*(1-x)") * t.realize()[0], Box::unit(1)));
}

TEST(Dist, MulDistExamples) {
  Distribution d = Distribution::density({P("x^2")});
  EXPECT_TRUE(mul_dist(P("x+1"), d).equivalent(Distribution::density({P("x^3 + x^2")})));
  Distribution out = mul_dist(P("x"), ev("2", 1));
  Distribution expected = ev("2", 0) + Rational(2) * ev("2", 1);
  EXPECT_TRUE(out.equivalent(expected));
  Distribution mixed = ev("1/3", 2) + Distribution::density({P("x")});
  EXPECT_TRUE(mul_dist(P("1"), mixed).equivalent(mixed));
}

TEST(Dist, TransposeExamples) {
  DistOperator t = transpose(Op("dx"));
  EXPECT_TRUE(t(ev("1/4", 0)).equivalent(ev("1/4", 1)));
  EXPECT_TRUE(t(Distribution::density({P("x^2")})).equivalent(Distribution::density({P("-2*x")})));
  Sampler rng(47);
  Distribution psi = Distribution::density({P("x^2")});
  for (int i = 0; i < 20; ++i) {
    TestSection s(Box::unit(1), 2, rng.section(1, 1, 3));
    EXPECT_TRUE(adjoint_check(Op("dx"), s, psi));
  }
  Distribution mixed = ev("1/3", 1) + Distribution::density({P("x - 1")});
  EXPECT_TRUE(transpose(NormalOperator::multiplication(P("x^2")))(mixed).equivalent(mul_dist(P("x^2"), mixed)));
  EXPECT_TRUE(transpose(NormalOperator::identity(1))(mixed).equivalent(mixed));
  EXPECT_EQ(formal_adjoint(Op("[x]*dx")), Op("[-x]*dx - 1"));
}

TEST(Dist, AdjointCheckExamples) {
  Distribution e = ev("1/2", 0);
  EXPECT_TRUE(adjoint_check(Op("dx"), bump1("x", 2), e));
  EXPECT_TRUE(adjoint_check(NormalOperator::zero(1, 1, 1), bump1("x", 1), e));
  DistOperator wrong = transpose(Op("-dx"));
  EXPECT_FALSE(adjoint_check(Op("dx"), bump1("x^2 + 1", 2), Distribution::density({P("x^2")}), wrong));
  EXPECT_THROW(adjoint_check(Op("dx^2"), bump1("1", 2), e), InvalidInput);
}

TEST(Dist, AdjointIdentityOnRandomTriples) {
  Sampler rng(53);
  Box box({{Rational(-1), Rational(1)}, {Rational(0), Q("3/2")}});
  for (int i = 0; i < 20; ++i) {
    unsigned k = static_cast<unsigned>(rng.integer(0, 3));
    NormalOperator op = rng.op(2, 2, 1, k, 2);
    TestSection s(box, k + 1, rng.section(2, 2, 2));
    Distribution psi = Distribution::evaluation(rng.interior_point(box), MultiIndex{1, 0}) +
                       Distribution::density({rng.poly(2, 2)});
    EXPECT_TRUE(adjoint_check(op, s, psi));
  }
}

TEST(Dist, TransposeIsAntihomomorphism) {
  Sampler rng(59);
  for (int i = 0; i < 10; ++i) {
    NormalOperator a = rng.op(1, 1, 1, 2, 2), b = rng.op(1, 1, 1, 1, 2);
    Distribution psi = Distribution::evaluation(rng.interior_point(Box::unit(1)), MultiIndex{1}) +
                       Distribution::density({rng.poly(1, 2)});
    EXPECT_TRUE(transpose(compose(a, b))(psi).equivalent(transpose(b)(transpose(a)(psi))));
  }
}

TEST(Dist, DeltaOfTranspose) {
  Sampler rng(61);
  for (int i = 0; i < 10; ++i) {
    NormalOperator op = rng.op(1, 1, 1, 2, 2);
    Poly f = rng.poly(1, 2);
    Distribution psi = Distribution::evaluation(rng.interior_point(Box::unit(1)), MultiIndex{0}) +
                       Distribution::density({rng.poly(1, 2)});
    Distribution lhs = delta(f, transpose(op))(psi);
    Distribution rhs = transpose(Rational(-1) * delta(f, op))(psi);
    EXPECT_TRUE(lhs.equivalent(rhs));
  }
}

TEST(Dist, LieDerivativeExamples) {
  EXPECT_EQ(lie_derivative_density({P("1")}, P("x^2")), P("-2*x"));
  Distribution d = Distribution::density({P("x^2")});
  EXPECT_TRUE(lie_derivative_dist({P("1")}, d).equivalent(Distribution::density({P("-2*x")})));
  Sampler rng(67);
  for (int i = 0; i < 20; ++i) {
    TestSection s(Box::unit(1), 2, rng.section(1, 1, 3));
    EXPECT_EQ(pair(s, lie_derivative_dist({P("1")}, d)), pair(apply_operator(Op("dx"), s), d));
  }
  EXPECT_TRUE(lie_derivative_dist({Poly(1)}, d).is_zero());
  EXPECT_TRUE(lie_derivative_dist({P("1")}, ev("1/3", 0)).equivalent(ev("1/3", 1)));
}

TEST(Dist, LieDerivationRule) {
  Sampler rng(71);
  for (int i = 0; i < 10; ++i) {
    std::vector<Poly> u = rng.vector_field(2, 2);
    Poly f = rng.poly(2, 2), dens = rng.poly(2, 2);
    EXPECT_EQ(lie_derivative_density(u, f * dens), -apply(vector_field(u), f) * dens + f * lie_derivative_density(u, dens));
  }
}

TEST(Dist, OperatorOrderExamples) {
  Sampler rng(73);
  std::vector<Distribution> probes{ev("1/3", 0), ev("1/2", 1), Distribution::density({P("x^2 + 1")})};
  EXPECT_EQ(dist_op_order(transpose(Op("dx")), probes, rng), 1u);
  EXPECT_EQ(dist_op_order(multiplication_operator(P("x^2 - 1")), probes, rng), 0u);
  EXPECT_EQ(dist_op_order(transpose(Op("dx^2")), probes, rng), 2u);
  EXPECT_EQ(dist_op_order(compose(transpose(Op("dx")), transpose(Op("[x]*dx"))), probes, rng), 2u);
}

TEST(Dist, RestrictionExamples) {
  RestrictionConfig cfg{Box::unit(1), 2, 4, 2};
  EXPECT_EQ(restricts_to_test(transpose(Op("dx")), cfg), Op("dx"));
  EXPECT_EQ(restricts_to_test(multiplication_operator(P("x^2 + 3")), cfg), NormalOperator::multiplication(P("x^2 + 3")));
  EXPECT_FALSE(restricts_to_test(properties::detail::strip_embedding(transpose(Op("dx"))), cfg).has_value());
  Sampler rng(79);
  RestrictionConfig cfg2{Box({{Rational(-1), Rational(1)}, {Rational(0), Rational(1)}}), 2, 4, 2};
  for (int i = 0; i < 5; ++i) {
    NormalOperator op = rng.op(2, 1, 1, 2, 2);
    EXPECT_EQ(restricts_to_test(transpose(op), cfg2), op);
  }
}

TEST(Dist, RecoveryExamples) {
  auto blackbox = [](const NormalOperator& op) {
    return [op](const TestSection& t) { return apply_operator(op, t); };
  };
  RecoveryConfig cfg{Box::unit(1), 1, 1, 1, 4, 2};
  EXPECT_EQ(recover_coefficients(blackbox(Op("[x]*dx")), cfg), Op("[x]*dx"));
  RecoveryConfig zero{Box::unit(1), 1, 1, 0, 4, 2};
  EXPECT_EQ(recover_coefficients(blackbox(NormalOperator::multiplication(P("x^2 - 2"))), zero),
            NormalOperator::multiplication(P("x^2 - 2")));
  EXPECT_THROW(recover_coefficients(blackbox(Op("dx^2")), cfg), InconsistentProbes);
  EXPECT_THROW(recover_coefficients(blackbox(Op("dx^3")), cfg), InconsistentProbes);
  Sampler rng(83);
  Box box({{Rational(0), Rational(2)}, {Rational(-1), Rational(1)}});
  for (int i = 0; i < 5; ++i) {
    NormalOperator op = rng.op(2, 2, 1, 2, 2);
    RecoveryConfig c{box, 2, 1, 2, 4, 2};
    EXPECT_EQ(recover_coefficients(blackbox(op), c), op);
  }
}

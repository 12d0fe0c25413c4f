#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace jetcalc;
using namespace jetcalc::test;

namespace {

// Compares two operators by their action on x^j, j ≤ 5, via termwise differentiation.
void expect_same_on_monomials(const NormalOperator& a, const NormalOperator& b) {
  for (unsigned j = 0; j <= 5; ++j) {
    Poly m = Poly::monomial(1, MultiIndex{j});
    EXPECT_EQ(oracle::apply_termwise(a, FreeModuleElement({m})), oracle::apply_termwise(b, FreeModuleElement({m})))
        << "monomial x^" << j;
  }
}

}  // namespace

TEST(Diffop, NormalizeExamples) {
  EXPECT_EQ(Op("dx*[x]"), Op("[x]*dx + 1"));
  EXPECT_EQ(to_string(Op("[x]*dx")), "[x]*dx");
  NormalOperator n = Op("dx^2*[x^2]");
  EXPECT_EQ(to_string(n), "[x^2]*dx^2 + [4*x]*dx + 2");
  // Oracle: apply the unnormalized composite as two successive termwise steps.
  for (unsigned j = 0; j <= 5; ++j) {
    Poly m = Poly::monomial(1, MultiIndex{j});
    Poly composite = oracle::iterated_partial(MultiIndex{2}, P("x^2") * m);
    EXPECT_EQ(apply(n, m), composite);
  }
  EXPECT_EQ(to_string(Op("x^2*[1]*dx^2 + dx*dy", 2)), "[x^2]*dx^2 + dx*dy");
}

TEST(Diffop, ComposeExamples) {
  EXPECT_EQ(compose(Op("dx"), Op("dx")), Op("dx^2"));
  NormalOperator d = Op("[x^3]*dx + 2");
  EXPECT_EQ(compose(d, NormalOperator::identity(1)), d);
  NormalOperator c = compose(Op("dx"), NormalOperator::multiplication(P("x^2")));
  EXPECT_EQ(c, Op("[x^2]*dx + [2*x]"));
  expect_same_on_monomials(c, Op("[x^2]*dx + [2*x]"));
  EXPECT_THROW(compose(NormalOperator::zero(1, 2, 1), NormalOperator::zero(1, 1, 1)), InvalidInput);
}

TEST(Diffop, ApplyExamples) {
  NormalOperator op = Op("[x]*dx + 1");
  EXPECT_EQ(apply(op, P("x^2")), P("3*x^2"));
  EXPECT_EQ(apply(op, P("x^2")), oracle::apply_termwise(op, S("x^2"))[0]);
  FreeModuleElement s = S("x*y, y^3", 2);
  EXPECT_EQ(apply(NormalOperator::identity(2, 2), s), s);
  EXPECT_TRUE(apply(NormalOperator::zero(2, 2, 3), s).is_zero());
  EXPECT_THROW(apply(NormalOperator::identity(2, 3), s), InvalidInput);
}

TEST(Diffop, DeltaExamples) {
  EXPECT_TRUE(delta(P("x^2+y", 2), NormalOperator::multiplication(P("x*y", 2))).is_zero());
  EXPECT_EQ(delta(P("x"), Op("dx")), NormalOperator::multiplication(Poly::constant(1, Rational(-1))));
  NormalOperator d = delta(P("x^2"), Op("dx^2"));
  EXPECT_EQ(d, Op("[-4*x]*dx - 2"));
  // Oracle: x^2 s'' - (x^2 s)'' on monomials.
  for (unsigned j = 0; j <= 5; ++j) {
    Poly m = Poly::monomial(1, MultiIndex{j});
    EXPECT_EQ(apply(d, m), P("x^2") * partial(0, partial(0, m)) - partial(0, partial(0, P("x^2") * m)));
  }
}

TEST(Diffop, DeltaCommutesAndDropsOrder) {
  Sampler rng(3);
  for (int i = 0; i < 20; ++i) {
    NormalOperator op = rng.op(2, 1, 2, 3, 2);
    Poly a = rng.poly(2, 2), b = rng.poly(2, 2);
    EXPECT_EQ(delta(a, delta(b, op)), delta(b, delta(a, op)));
    NormalOperator d = delta(a, op);
    if (!d.is_zero()) {
      EXPECT_LE(*d.order(), *op.order() - 1);
    }
  }
}

TEST(Diffop, OrderExamples) {
  EXPECT_EQ(NormalOperator::multiplication(P("x^3+1")).order(), 0u);
  EXPECT_EQ(Op("dx*dy + [x]*dx", 2).order(), 2u);
  EXPECT_FALSE(Op("[x] - [x]").order().has_value());
  Sampler rng(5);
  EXPECT_EQ(oracle::definition_order(Op("dx*dy + [x]*dx", 2), rng), 2u);
}

TEST(Diffop, OracleDiscriminatesOrders) {
  Sampler rng(9);
  EXPECT_EQ(oracle::definition_order(Op("dx^3 + [y]*dy", 2), rng), 3u);
  EXPECT_EQ(oracle::definition_order(NormalOperator::multiplication(P("x*y", 2)), rng), 0u);
  EXPECT_FALSE(oracle::definition_order(NormalOperator::zero(2, 1, 1), rng).has_value());
}

TEST(Diffop, DecomposeExamples) {
  auto [q, d] = decompose_first_order(Op("[x] + dx"));
  EXPECT_EQ(q, P("x"));
  EXPECT_EQ(d, Op("dx"));
  auto [q2, d2] = decompose_first_order(Op("[y]*dx + [x^2]*dy", 2));
  EXPECT_TRUE(q2.is_zero());
  EXPECT_EQ(d2, Op("[y]*dx + [x^2]*dy", 2));
  EXPECT_EQ(derivation_components(d2), (std::vector<Poly>{P("y", 2), P("x^2", 2)}));
  auto [q3, d3] = decompose_first_order(NormalOperator::multiplication(P("x+2")));
  EXPECT_EQ(q3, P("x+2"));
  EXPECT_TRUE(d3.is_zero());
  EXPECT_THROW(decompose_first_order(Op("dx^2")), InvalidInput);
}

TEST(Diffop, VectorFieldRoundTrip) {
  std::vector<Poly> u{P("x*y", 2), P("1 - y", 2)};
  EXPECT_EQ(derivation_components(vector_field(u)), u);
  EXPECT_FALSE(derivation_components(Op("[x] + dx")).has_value());
}

TEST(Diffop, CurryExamples) {
  EXPECT_EQ(curry(Op("dx"), S("x")), Op("[x]*dx + 1"));
  // Oracle: (a x)' = a + x a' on monomials.
  for (unsigned j = 0; j <= 5; ++j) {
    Poly a = Poly::monomial(1, MultiIndex{j});
    EXPECT_EQ(apply(curry(Op("dx"), S("x")), a), a + P("x") * partial(0, a));
  }
  EXPECT_EQ(curry(Op("dx"), S("1")), Op("dx"));
  PolyMatrix f(1, 1, 2);
  f(0, 0) = P("x");
  f(0, 1) = P("2");
  NormalOperator c = curry(NormalOperator::multiplication(f), S("x^2, 3"));
  EXPECT_EQ(c, NormalOperator::multiplication(P("x^3 + 6")));
  EXPECT_THROW(curry(Op("dx"), S("x, 1")), InvalidInput);
}

TEST(Diffop, MatrixOperatorLiteral) {
  NormalOperator op = Op("[[dx, [x]], [0, dx^2]]");
  EXPECT_EQ(op.m_in(), 2u);
  EXPECT_EQ(op.m_out(), 2u);
  EXPECT_EQ(apply(op, S("x^2, x")), S("x^2 + 2*x, 0"));
}

TEST(Diffop, OperatorParseErrors) {
  EXPECT_THROW(Op("dx +* x"), ParseError);
  EXPECT_THROW(Op("[x"), ParseError);
  EXPECT_THROW(Op("dy", 1), ParseError);
}

TEST(Diffop, OperatorPrintRoundTrip) {
  Sampler rng(13);
  for (int i = 0; i < 30; ++i) {
    NormalOperator op = rng.op(3, 1, 1, 3, 2);
    EXPECT_EQ(Op(to_string(op), 3), op) << to_string(op);
  }
}

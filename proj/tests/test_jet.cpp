#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace jetcalc;
using namespace jetcalc::test;

TEST(Jet, ProlongExamples) {
  JetVector j = jet_prolong(2, S("x^3"));
  EXPECT_EQ(j.coords(), (std::vector<Poly>{P("x^3"), P("3*x^2"), P("6*x")}));
  for (unsigned a = 0; a <= 2; ++a) EXPECT_EQ(j.at(MultiIndex{a}, 0), oracle::iterated_partial(MultiIndex{a}, P("x^3")));
  EXPECT_EQ(jet_prolong(0, S("x*y, y", 2)).coords(), (std::vector<Poly>{P("x*y", 2), P("y", 2)}));
  JetVector c = jet_prolong(3, S("5", 2));
  EXPECT_EQ(c[0], P("5", 2));
  for (std::size_t i = 1; i < c.coords().size(); ++i) EXPECT_TRUE(c[i].is_zero());
}

TEST(Jet, RankExamples) {
  EXPECT_EQ(jet_rank(2, 2, 1), 6);
  EXPECT_EQ(jet_rank(1, 0, 1), 1);
  EXPECT_EQ(jet_rank(3, 1, 2), 8);
  for (std::size_t n = 1; n <= 4; ++n)
    for (unsigned k = 0; k <= 4; ++k) {
      EXPECT_EQ(jet_rank(n, k, 3), Integer(oracle::enumerate_jet_rank(n, k, 3)));
      EXPECT_EQ(JetSpace(n, 3, k).rank(), oracle::enumerate_jet_rank(n, k, 3));
    }
}

TEST(Jet, BasisOrder) {
  JetSpace space(2, 2, 1);
  ASSERT_EQ(space.rank(), 6u);
  EXPECT_EQ(space.basis()[0].alpha, MultiIndex({0, 0}));
  EXPECT_EQ(space.basis()[1].fiber, 1u);
  EXPECT_EQ(space.basis()[2].alpha, MultiIndex({1, 0}));
  EXPECT_EQ(space.basis()[4].alpha, MultiIndex({0, 1}));
  EXPECT_EQ(space.index_of(MultiIndex({0, 1}), 1), 5u);
}

TEST(Jet, TensorStructure) {
  FreeModuleElement s = S("x*y, x^2 - y", 2);
  JetVector j = jet_prolong(2, s);
  for (std::size_t i = 0; i < 2; ++i) {
    JetVector ji = jet_prolong(2, FreeModuleElement({s[i]}));
    for (const auto& slot : ji.space().basis()) EXPECT_EQ(j.at(slot.alpha, i), ji.at(slot.alpha, 0));
  }
}

TEST(Jet, ProjectExamples) {
  JetVector j = jet_prolong(2, S("x^3"));
  EXPECT_EQ(project(j, 1).coords(), (std::vector<Poly>{P("x^3"), P("3*x^2")}));
  EXPECT_EQ(project(j, 2), j);
  EXPECT_EQ(section_part(project(jet_prolong(1, S("x*y, 1", 2)), 0)), S("x*y, 1", 2));
  EXPECT_THROW(project(j, 3), InvalidInput);
}

TEST(Jet, FactorizeExamples) {
  JetHom h = factorize(Op("dx^2 + [x]"));
  EXPECT_EQ(h.matrix()(0, 0), P("x"));
  EXPECT_TRUE(h.matrix()(0, 1).is_zero());
  EXPECT_EQ(h.matrix()(0, 2), P("1"));
  // Oracle: f(J^2 x^j) agrees with the operator on monomials.
  for (unsigned j = 0; j <= 6; ++j) {
    FreeModuleElement m({Poly::monomial(1, MultiIndex{j})});
    EXPECT_EQ(h(jet_prolong(2, m)), oracle::apply_termwise(Op("dx^2 + [x]"), m));
  }
  JetHom f = factorize(NormalOperator::multiplication(P("x+3")));
  EXPECT_EQ(f.domain().order(), 0u);
  EXPECT_EQ(f.matrix()(0, 0), P("x+3"));
  JetHom g = factorize(Op("[x]*dx"));
  EXPECT_TRUE(g.matrix()(0, 0).is_zero());
  EXPECT_EQ(g.matrix()(0, 1), P("x"));
  EXPECT_THROW(factorize(NormalOperator::zero(1, 1, 1)), InvalidInput);
}

TEST(Jet, OperatorFromJetHom) {
  PolyMatrix m(1, 1, 2);
  m(0, 1) = P("1");
  EXPECT_EQ(operator_from_jet_hom(JetHom(JetSpace(1, 1, 1), m)), Op("dx"));
  EXPECT_TRUE(operator_from_jet_hom(JetHom(JetSpace(1, 1, 2), 1)).is_zero());
  PolyMatrix m2(1, 1, 3);
  m2(0, 0) = P("x");
  m2(0, 2) = P("1");
  EXPECT_EQ(operator_from_jet_hom(JetHom(JetSpace(1, 1, 2), m2)), Op("dx^2 + [x]"));
  Sampler rng(17);
  for (int i = 0; i < 20; ++i) {
    NormalOperator op = rng.op(2, 2, 1, 2, 2);
    EXPECT_EQ(operator_from_jet_hom(factorize(op)), op);
  }
}

TEST(Jet, D1Examples) {
  JetVector a = d1(P("x^2"));
  EXPECT_EQ(a.at(MultiIndex{1}, 0), P("2*x"));
  EXPECT_TRUE(a.at(MultiIndex{0}, 0).is_zero());
  JetVector b = d1(P("1"));
  for (const auto& c : b.coords()) EXPECT_TRUE(c.is_zero());
  JetVector c = d1(P("x*y", 2));
  EXPECT_EQ(c.at(MultiIndex({1, 0}), 0), P("y", 2));
  EXPECT_EQ(c.at(MultiIndex({0, 1}), 0), P("x", 2));
}

TEST(Jet, Duality) {
  Sampler rng(19);
  for (int i = 0; i < 20; ++i) {
    std::vector<Poly> u = rng.vector_field(3, 2);
    Poly f = rng.poly(3, 3);
    EXPECT_EQ(contract(u, d1(f)), apply(vector_field(u), f));
  }
}

TEST(Jet, SplitExamples) {
  FirstJetSplit s = split_j1(jet_prolong(1, S("x^2")));
  EXPECT_EQ(s.section, S("x^2"));
  EXPECT_EQ(s.one_form_part, d1(P("x^2")));
  FirstJetSplit c = split_j1(jet_prolong(1, S("7")));
  EXPECT_EQ(c.section, S("7"));
  for (const auto& p : c.one_form_part.coords()) EXPECT_TRUE(p.is_zero());
  JetVector j = jet_prolong(1, S("x*y + y^2, x", 2));
  EXPECT_EQ(reassemble_j1(split_j1(j)), j);
  EXPECT_THROW(split_j1(jet_prolong(2, S("x"))), InvalidInput);
}

TEST(Jet, CovariantDifferentialExamples) {
  ConnectionRepr flat({PolyMatrix(1, 1, 1)});
  EXPECT_EQ(covariant_differential(flat, S("x^2"))[0], S("2*x"));
  ConnectionRepr unit({parse_poly_matrix("[[1]]", 1)});
  EXPECT_EQ(covariant_differential(unit, S("1"))[0], S("1"));
  EXPECT_THROW(covariant_differential(unit, S("1, x")), InvalidInput);
}

TEST(Jet, ConnectionLeibniz) {
  Sampler rng(23);
  for (int i = 0; i < 20; ++i) {
    std::vector<PolyMatrix> g;
    for (int mu = 0; mu < 2; ++mu) g.push_back(rng.matrix(2, 2, 2, 2));
    ConnectionRepr gamma(g);
    Poly f = rng.poly(2, 2);
    FreeModuleElement s = rng.section(2, 2, 2);
    auto lhs = covariant_differential(gamma, f * s);
    auto rhs = covariant_differential(gamma, s);
    for (std::size_t mu = 0; mu < 2; ++mu) EXPECT_EQ(lhs[mu], partial(mu, f) * s + f * rhs[mu]);
  }
}

TEST(Jet, CheckSplitting) {
  EXPECT_TRUE(check_splitting(ConnectionRepr({PolyMatrix(2, 1, 1), PolyMatrix(2, 1, 1)})));
  ConnectionRepr gamma({parse_poly_matrix("[[x, 1], [y^2, 0]]", 2), parse_poly_matrix("[[0, x*y], [1, 2]]", 2)});
  EXPECT_TRUE(check_splitting(gamma));
  JetSplitting corrupted = splitting_from_connection(gamma);
  corrupted.section_part = P("x", 2) * corrupted.section_part;
  EXPECT_FALSE(check_splitting(corrupted));
  ConnectionRepr back = connection_from_splitting(splitting_from_connection(gamma));
  for (std::size_t mu = 0; mu < 2; ++mu) EXPECT_EQ(back[mu], gamma[mu]);
}

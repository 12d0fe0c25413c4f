#pragma once

// Seeded property suite. Each check draws its own random cases from a
// Sampler seeded with (session seed, check index) and compares library
// results against exact identities or the brute-force routes in oracle.hpp.

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "jetcalc/dist.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/oracle.hpp"
#include "jetcalc/parse.hpp"
#include "jetcalc/random.hpp"
#include "jetcalc/recover.hpp"
#include "jetcalc/testspace.hpp"

namespace jetcalc::properties {

struct PropertyResult {
  std::string id;
  std::string description;
  bool passed = false;
  std::string detail;
};

struct Property {
  std::string id;
  std::string description;
  std::function<PropertyResult(Sampler&)> run;
};

/// Relative tolerance for the numeric seminorm checks.
inline constexpr double kSeminormTolerance = 1e-6;

namespace detail {

inline PropertyResult outcome(std::string id, std::string description, std::size_t failures, std::size_t cases,
                              std::string extra = {}) {
  std::ostringstream os;
  os << (cases - failures) << "/" << cases << " cases";
  if (!extra.empty()) os << "; " << extra;
  return {std::move(id), std::move(description), failures == 0, os.str()};
}

inline Box random_box(Sampler& rng, std::size_t n) {
  std::vector<std::pair<Rational, Rational>> bounds;
  for (std::size_t mu = 0; mu < n; ++mu) {
    Rational l(rng.integer(-2, 1));
    Rational width(rng.integer(1, 3), rng.integer(1, 2));
    width.canonicalize();
    bounds.emplace_back(l, l + width);
  }
  return Box(std::move(bounds));
}

inline std::size_t pick(Sampler& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(rng.integer(static_cast<int>(lo), static_cast<int>(hi)));
}

/// Mixture of point functionals (random interior points, |α| ≤ 2) and a
/// plain or embedded density.
inline Distribution random_distribution(Sampler& rng, const Box& box, std::size_t rank) {
  const std::size_t n = box.dim();
  Distribution psi(n, rank);
  std::size_t count = pick(rng, 1, 3);
  for (std::size_t i = 0; i < count; ++i) {
    auto alphas = multi_indices_up_to(n, 2);
    psi.add_point({rng.interior_point(box), alphas[pick(rng, 0, alphas.size() - 1)], pick(rng, 0, rank - 1), rng.nonzero_rational()});
  }
  if (rng.coin(0.7)) {
    std::vector<Poly> dens;
    for (std::size_t i = 0; i < rank; ++i) dens.push_back(rng.poly(n, 2));
    std::optional<RegularDensity::Embedding> emb;
    if (rng.coin(0.3)) emb = RegularDensity::Embedding{box, static_cast<unsigned>(rng.integer(1, 3))};
    psi.add_density(RegularDensity{std::move(dens), emb});
  }
  return psi;
}

/// Flag-stripping operator: Δ' with every embedded density output multiplied
/// out into a plain density.
inline DistOperator strip_embedding(const DistOperator& theta) {
  return DistOperator(theta.dim(), theta.rank_in(), theta.rank_out(), [theta](const Distribution& psi) {
    Distribution out = theta(psi);
    if (!out.regular_part() || !out.regular_part()->embedding) return out;
    Distribution plain(out.dim(), out.rank());
    for (const auto& f : out.point_functionals()) plain.add_point(f);
    plain.add_density(RegularDensity{out.regular_part()->realize(), std::nullopt});
    return plain;
  });
}

inline bool close(double a, double b) { return std::abs(a - b) <= kSeminormTolerance * std::max(1.0, std::abs(b)); }

}  // namespace detail

// -------------------------------------------------------------------------
// Acceptance criteria

inline PropertyResult definition_order_agreement(Sampler& rng, std::size_t cases = 100) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 3);
    std::size_t m_in = detail::pick(rng, 1, 2), m_out = detail::pick(rng, 1, 2);
    NormalOperator op = rng.op(n, m_in, m_out, static_cast<unsigned>(rng.integer(0, 3)), 3);
    auto brute = oracle::definition_order(op, rng, 50, 3, 2);
    if (brute != op.order()) ++failures;
  }
  return detail::outcome("C1", "normal-form order equals the iterated-delta order", failures, cases);
}

inline PropertyResult factorization_round_trip(Sampler& rng, std::size_t cases = 100, std::size_t sections = 10) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 3);
    std::size_t m_in = detail::pick(rng, 1, 2), m_out = detail::pick(rng, 1, 2);
    unsigned k = static_cast<unsigned>(rng.integer(0, 3));
    NormalOperator op = rng.op(n, m_in, m_out, k, 3);
    JetHom h = factorize(op);
    bool ok = operator_from_jet_hom(h) == op && factorize(operator_from_jet_hom(h)) == h;
    for (std::size_t i = 0; ok && i < sections; ++i) {
      FreeModuleElement s = rng.section(n, m_in, 4);
      ok = oracle::apply_termwise(op, s) == h(jet_prolong(k, s));
    }
    if (!ok) ++failures;
  }
  return detail::outcome("C2", "factorize/operator_from_jet_hom round trip and f^D(J^k s) = D(s)", failures, cases);
}

inline PropertyResult jet_rank_enumeration(Sampler&) {
  std::size_t failures = 0, cases = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (unsigned k = 0; k <= 4; ++k)
      for (std::size_t m = 1; m <= 3; ++m) {
        ++cases;
        auto expected = oracle::enumerate_jet_rank(n, k, m);
        if (jet_rank(n, k, m) != expected || JetSpace(n, m, k).basis().size() != expected) ++failures;
      }
  return detail::outcome("C3", "jet_rank matches multi-index enumeration for n<=4, k<=4, m<=3", failures, cases);
}

inline PropertyResult first_order_decomposition(Sampler& rng, std::size_t cases = 100) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 3);
    NormalOperator op = rng.op(n, 1, 1, 1, 3);
    auto [q, d] = decompose_first_order(op);
    bool ok = NormalOperator::multiplication(q) + d == op;
    ok = ok && apply(d, Poly::constant(n, Rational(1))).is_zero();
    for (int i = 0; ok && i < 3; ++i) {
      Poly a = rng.poly(n, 3), b = rng.poly(n, 3);
      ok = apply(d, a * b) == apply(d, a) * b + a * apply(d, b);
    }
    auto u = derivation_components(d);
    ok = ok && u && vector_field(*u) == d;
    if (!ok) ++failures;
  }
  return detail::outcome("C4", "first-order operators split as q + derivation with exact Leibniz", failures, cases);
}

inline PropertyResult duality(Sampler& rng, std::size_t cases = 100) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 4);
    auto u = rng.vector_field(n, 3);
    Poly f = rng.poly(n, 4);
    Poly direct(n);
    for (std::size_t mu = 0; mu < n; ++mu) direct += u[mu] * oracle::iterated_partial(MultiIndex::unit(n, mu), f);
    if (contract(u, d1(f)) != direct) ++failures;
  }
  return detail::outcome("C5", "pairing d1(f) with a vector field reproduces u(f)", failures, cases);
}

inline PropertyResult connection_leibniz(Sampler& rng, std::size_t cases = 50) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 3), m = detail::pick(rng, 1, 3);
    std::vector<PolyMatrix> g;
    for (std::size_t mu = 0; mu < n; ++mu) g.push_back(rng.matrix(n, m, m, 2));
    ConnectionRepr gamma(g);
    auto u = rng.vector_field(n, 2);
    Poly f = rng.poly(n, 3);
    FreeModuleElement s = rng.section(n, m, 3);
    Poly uf(n);
    for (std::size_t mu = 0; mu < n; ++mu) uf += u[mu] * partial(mu, f);
    bool ok = covariant_derivative(gamma, u, f * s) == uf * s + f * covariant_derivative(gamma, u, s);
    ok = ok && check_splitting(gamma);
    JetSplitting corrupted = splitting_from_connection(gamma);
    corrupted.section_part = Poly::variable(n, 0) * corrupted.section_part;
    ok = ok && !check_splitting(corrupted);
    if (!ok) ++failures;
  }
  return detail::outcome("C6", "connection Leibniz rule exact; corrupted splittings rejected", failures, cases);
}

inline PropertyResult adjoint_identity(Sampler& rng, std::size_t cases = 100) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 2);
    std::size_t m_in = detail::pick(rng, 1, 2), m_out = detail::pick(rng, 1, 2);
    unsigned k = static_cast<unsigned>(rng.integer(0, 3));
    NormalOperator op = rng.op(n, m_in, m_out, k, 2);
    Box box = detail::random_box(rng, n);
    TestSection s(box, k + 1, rng.section(n, m_in, 2));
    Distribution psi = detail::random_distribution(rng, box, m_out);
    if (!adjoint_check(op, s, psi)) ++failures;
  }
  return detail::outcome("C7", "<D s, psi> = <s, D' psi> exactly with bump exponent order+1", failures, cases);
}

inline PropertyResult transpose_of_delta(Sampler& rng, std::size_t cases = 20, std::size_t probes = 50) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 2);
    std::size_t m = detail::pick(rng, 1, 2);
    NormalOperator op = rng.op(n, m, m, static_cast<unsigned>(rng.integer(1, 3)), 2);
    Poly f = rng.nonzero_poly(n, 2);
    DistOperator lhs = delta(f, transpose(op));
    DistOperator rhs = transpose(Rational(-1) * delta(f, op));
    Box box = detail::random_box(rng, n);
    bool ok = true;
    for (std::size_t i = 0; ok && i < probes; ++i) {
      Distribution psi = detail::random_distribution(rng, box, m);
      ok = lhs(psi).equivalent(rhs(psi));
    }
    if (!ok) ++failures;
  }
  return detail::outcome("C8", "delta_f(D') equals the transpose of -delta_f D on probes", failures, cases);
}

inline PropertyResult lie_derivative(Sampler& rng, std::size_t cases = 20, std::size_t sections = 20) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 2);
    auto u = rng.vector_field(n, 2);
    Poly density = rng.poly(n, 3);
    Box box = detail::random_box(rng, n);
    Distribution psi = Distribution::density({density});
    Distribution formula = Distribution::density({lie_derivative_density(u, density)});
    Distribution via_transpose = lie_derivative_dist(u, psi);
    NormalOperator field = vector_field(u);
    bool ok = true;
    for (std::size_t i = 0; ok && i < sections; ++i) {
      TestSection s(box, static_cast<unsigned>(rng.integer(1, 3)), rng.section(n, 1, 2));
      Rational expected = pair(s, formula);
      ok = pair(s, via_transpose) == expected && pair(apply_operator(field, s), psi) == expected;
    }
    // L'_u(f psi) = L_{-u}(f) psi + f L'_u(psi)
    Poly f = rng.poly(n, 2);
    Poly minus_uf = -apply(field, f);
    Distribution lhs = lie_derivative_dist(u, mul_dist(f, psi));
    Distribution rhs = mul_dist(minus_uf, psi) + mul_dist(f, via_transpose);
    ok = ok && lhs.equivalent(rhs);
    if (!ok) ++failures;
  }
  return detail::outcome("C9", "density Lie derivative formula matches the transpose; derivation rule exact", failures, cases);
}

inline PropertyResult operator_recovery(Sampler& rng, std::size_t cases = 50) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 2);
    std::size_t m_in = detail::pick(rng, 1, 2), m_out = detail::pick(rng, 1, 2);
    unsigned k = static_cast<unsigned>(rng.integer(0, 2));
    NormalOperator op = rng.op(n, m_in, m_out, k, 2);
    RecoveryConfig cfg{detail::random_box(rng, n), m_in, m_out, k, 2, 2};
    auto blackbox = [&op](const TestSection& t) { return apply_operator(op, t); };
    try {
      if (recover_coefficients(blackbox, cfg) != op) ++failures;
    } catch (const InconsistentProbes&) {
      ++failures;
    }
    // An operator one order above the claim must be reported, not fitted.
    NormalOperator higher = rng.op(n, m_in, m_out, k + 1, 2);
    try {
      recover_coefficients([&higher](const TestSection& t) { return apply_operator(higher, t); }, cfg);
      ++failures;
    } catch (const InconsistentProbes&) {
    }
  }
  return detail::outcome("C10", "operators recovered exactly from their action on test sections; too-small order claims reported", failures, cases);
}

inline PropertyResult restriction_criterion(Sampler& rng, std::size_t cases = 50) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 2);
    std::size_t m_in = detail::pick(rng, 1, 2), m_out = detail::pick(rng, 1, 2);
    NormalOperator op = rng.op(n, m_in, m_out, static_cast<unsigned>(rng.integer(0, 2)), 2);
    RestrictionConfig cfg{detail::random_box(rng, n), 2, 2, 1};
    auto back = restricts_to_test(transpose(op), cfg);
    if (!back || *back != op) ++failures;
  }
  std::size_t stripped_failures = 0;
  for (int c = 0; c < 5; ++c) {
    std::size_t n = detail::pick(rng, 1, 2);
    NormalOperator op = rng.op(n, 1, 1, static_cast<unsigned>(rng.integer(0, 2)), 2);
    RestrictionConfig cfg{detail::random_box(rng, n), 2, 2, 1};
    if (restricts_to_test(detail::strip_embedding(transpose(op)), cfg)) ++stripped_failures;
  }
  return detail::outcome("C11", "restricts_to_test inverts transpose; flag-stripping operator has no restriction",
                         failures + stripped_failures, cases + 5);
}

inline PropertyResult seminorm_estimates(Sampler& rng, std::size_t cases = 10) {
  std::size_t failures = 0;
  Box unit = Box::unit(1);
  TestSection bump(unit, 1, FreeModuleElement({Poly::constant(1, Rational(1))}));
  double sup = seminorm(FiberJetFunction::slot(MultiIndex{0}, 0), bump, 1024).value;
  bool base_ok = std::abs(sup - 0.25) <= 1e-6;
  if (!base_ok) ++failures;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 2), m = detail::pick(rng, 1, 2);
    std::size_t res = n == 1 ? 1024 : 64;
    Box box = detail::random_box(rng, n);
    FiberJetFunction phi(rng.op(n, 1, 1, static_cast<unsigned>(rng.integer(0, 1)), 1));
    TestSection s(box, 3, rng.section(n, m, 2));
    FreeModuleElement sigma = rng.section(n, m, 1);
    double lhs = seminorm(phi, contract_dual(sigma, s), res).value;
    double rhs = seminorm(pullback(phi, sigma), s, res).value;
    NormalOperator op = rng.op(n, m, 1, 1, 1);
    double lhs2 = seminorm(phi, apply_operator(op, s), res).value;
    double rhs2 = seminorm(pullback(phi, op), s, res).value;
    if (!detail::close(lhs, rhs) || !detail::close(lhs2, rhs2)) ++failures;
  }
  std::ostringstream extra;
  extra.precision(12);
  extra << "sup x(1-x) estimate " << sup;
  return detail::outcome("C12", "seminorm grid estimate and seminorm compatibility within 1e-6", failures, cases + 1,
                         extra.str());
}

// -------------------------------------------------------------------------
// Further invariants

inline PropertyResult ring_axioms(Sampler& rng, std::size_t cases = 50) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 4);
    Poly a = rng.poly(n, 3), b = rng.poly(n, 3), d = rng.poly(n, 3);
    bool ok = (a * b) * d == a * (b * d) && a * (b + d) == a * b + a * d && a * b == b * a && a + b == b + a;
    std::size_t mu = detail::pick(rng, 0, n - 1), nu = detail::pick(rng, 0, n - 1);
    ok = ok && partial(mu, partial(nu, a)) == partial(nu, partial(mu, a));
    ok = ok && partial(mu, a * b) == partial(mu, a) * b + a * partial(mu, b);
    ok = ok && parse_poly(to_string(a), n) == a;
    if (!ok) ++failures;
  }
  return detail::outcome("P1", "ring axioms, mixed partials, Leibniz, print/parse round trip", failures, cases);
}

inline PropertyResult delta_calculus(Sampler& rng, std::size_t cases = 50) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 3);
    NormalOperator op = rng.op(n, 1, detail::pick(rng, 1, 2), static_cast<unsigned>(rng.integer(0, 3)), 2);
    Poly a = rng.poly(n, 2), b = rng.poly(n, 2);
    bool ok = delta(a, delta(b, op)) == delta(b, delta(a, op));
    NormalOperator da = delta(a, op);
    ok = ok && (da.is_zero() || *da.order() + 1 <= *op.order());
    FreeModuleElement s = rng.section(n, 1, 3);
    ok = ok && apply(da, s) == a * apply(op, s) - apply(op, a * s);
    ok = ok && parse_operator(to_string(op), n) == op;
    if (!ok) ++failures;
  }
  return detail::outcome("P2", "delta commutes, lowers order, matches its definition; operator round trip", failures, cases);
}

inline PropertyResult transpose_structure(Sampler& rng, std::size_t cases = 20) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 2);
    NormalOperator d1op = rng.op(n, 1, 1, static_cast<unsigned>(rng.integer(0, 2)), 2);
    NormalOperator d2op = rng.op(n, 1, 1, static_cast<unsigned>(rng.integer(0, 2)), 2);
    Box box = detail::random_box(rng, n);
    DistOperator lhs = transpose(compose(d1op, d2op));
    DistOperator rhs = compose(transpose(d2op), transpose(d1op));
    bool ok = true;
    for (int i = 0; ok && i < 10; ++i) {
      Distribution psi = detail::random_distribution(rng, box, 1);
      ok = lhs(psi).equivalent(rhs(psi));
    }
    std::vector<Distribution> probes;
    for (const auto& alpha : multi_indices_up_to(n, 1)) probes.push_back(Distribution::evaluation(rng.interior_point(box), alpha));
    ok = ok && dist_op_order(transpose(d1op), probes, rng, 10, 4) == d1op.order();
    if (!ok) ++failures;
  }
  return detail::outcome("P3", "transpose reverses composition; transpose preserves order", failures, cases);
}

inline PropertyResult test_space_invariants(Sampler& rng, std::size_t cases = 20) {
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t n = detail::pick(rng, 1, 2);
    Box box = detail::random_box(rng, n);
    unsigned p = static_cast<unsigned>(rng.integer(1, 3));
    TestSection t(box, p, rng.section(n, 1, 2));
    FreeModuleElement real = t.realize();
    bool ok = true;
    for (const auto& alpha : multi_indices_up_to(n, p - 1))
      for (std::size_t mu = 0; ok && mu < n; ++mu)
        for (const Rational& edge : {box.lower(mu), box.upper(mu)}) {
          auto x = rng.interior_point(box);
          x[mu] = edge;
          ok = ok && eval(partial(alpha, real[0]), x) == 0;
        }
    std::size_t mu = detail::pick(rng, 0, n - 1);
    ok = ok && integrate(apply_operator(NormalOperator::derivative(n, mu), t), 0) == 0;
    Poly a = rng.poly(n, 2);
    Rational lhs = integrate(partial(mu, a) * real[0], box);
    Rational rhs = -integrate(a * partial(mu, real[0]), box);
    ok = ok && lhs == rhs;
    if (!ok) ++failures;
  }
  return detail::outcome("P4", "boundary vanishing and integration by parts without boundary terms", failures, cases);
}

inline std::vector<Property> acceptance_criteria() {
  return {
      {"C1", "iterated-delta order agreement", [](Sampler& r) { return definition_order_agreement(r); }},
      {"C2", "factorization round trip", [](Sampler& r) { return factorization_round_trip(r); }},
      {"C3", "jet ranks", [](Sampler& r) { return jet_rank_enumeration(r); }},
      {"C4", "first-order decomposition", [](Sampler& r) { return first_order_decomposition(r); }},
      {"C5", "duality", [](Sampler& r) { return duality(r); }},
      {"C6", "connection Leibniz", [](Sampler& r) { return connection_leibniz(r); }},
      {"C7", "adjoint identity", [](Sampler& r) { return adjoint_identity(r); }},
      {"C8", "transpose of delta", [](Sampler& r) { return transpose_of_delta(r); }},
      {"C9", "Lie derivative", [](Sampler& r) { return lie_derivative(r); }},
      {"C10", "operator recovery", [](Sampler& r) { return operator_recovery(r); }},
      {"C11", "restriction criterion", [](Sampler& r) { return restriction_criterion(r); }},
      {"C12", "seminorm", [](Sampler& r) { return seminorm_estimates(r); }},
  };
}

inline std::vector<Property> all_properties() {
  auto out = acceptance_criteria();
  out.push_back({"P1", "ring axioms", [](Sampler& r) { return ring_axioms(r); }});
  out.push_back({"P2", "delta calculus", [](Sampler& r) { return delta_calculus(r); }});
  out.push_back({"P3", "transpose structure", [](Sampler& r) { return transpose_structure(r); }});
  out.push_back({"P4", "test space invariants", [](Sampler& r) { return test_space_invariants(r); }});
  return out;
}

/// Runs each property with its own Sampler seeded from (seed, index).
inline std::vector<PropertyResult> run(const std::vector<Property>& props, std::uint64_t seed) {
  std::vector<PropertyResult> results;
  for (std::size_t i = 0; i < props.size(); ++i) {
    Sampler rng(seed * 1000003ULL + i);
    results.push_back(props[i].run(rng));
  }
  return results;
}

}  // namespace jetcalc::properties

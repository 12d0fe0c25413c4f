#pragma once

#include <cstddef>
#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "jetcalc/dist.hpp"
#include "jetcalc/errors.hpp"
#include "jetcalc/free_module.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/poly.hpp"
#include "jetcalc/testspace.hpp"

namespace jetcalc {

/// The probe responses do not come from a differential operator of the
/// claimed order.
class InconsistentProbes : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

namespace detail {

/// Exact quotient of p by b^e for the box bump b, or empty.
inline std::optional<Poly> divide_by_bump_power(Poly p, const Box& box, unsigned e) {
  // b = Π (x - l)(r - x) = (-1)^n Π (x - l)(x - r)
  for (std::size_t mu = 0; mu < box.dim(); ++mu)
    for (unsigned i = 0; i < e; ++i) {
      for (const Rational& root : {box.lower(mu), box.upper(mu)}) {
        auto q = divide_by_linear(p, mu, root);
        if (!q) return std::nullopt;
        p = std::move(*q);
      }
    }
  if ((box.dim() * e) % 2 == 1) p = -p;
  return p;
}

/// Recovers an operator L of order ≤ k from the realized values
/// L(b^e x^β e_j), |β| ≤ k.
///
/// M = L ∘ (b^e ·) is solved from its action on monomials, which is
/// triangular: M(x^β) = Σ_{α≤β} C^M_α β!/(β-α)! x^{β-α}. Then L is peeled off
/// from the top order down using C^M_α = Σ_{β≥α} C(β,α) C^L_β ∂^{β-α} b^e,
/// dividing exactly by b^e at every step. Returns empty when a division
/// leaves a remainder.
inline std::optional<NormalOperator> solve_bumped_probes(
    std::size_t n, std::size_t m_in, std::size_t m_out, const Box& box, unsigned e, unsigned k,
    const std::function<FreeModuleElement(const MultiIndex&, std::size_t)>& response) {
  auto alphas = multi_indices_up_to(n, k);
  std::map<MultiIndex, PolyMatrix> mcoef;
  for (const auto& beta : alphas) {
    PolyMatrix c(n, m_out, m_in);
    for (std::size_t j = 0; j < m_in; ++j) {
      FreeModuleElement val = response(beta, j);
      require(val.rank() == m_out && val.dim() == n, "probe response has the wrong shape");
      for (const auto& [alpha, ca] : mcoef) {
        if (!alpha.divides(beta)) continue;
        Poly shift = Poly::monomial(n, beta - alpha, Rational(falling_factorial(beta, alpha)));
        for (std::size_t r = 0; r < m_out; ++r) val[r] -= ca(r, j) * shift;
      }
      Rational inv = Rational(1) / Rational(factorial(beta));
      for (std::size_t r = 0; r < m_out; ++r) c(r, j) = val[r] * inv;
    }
    mcoef.emplace(beta, std::move(c));
  }

  Poly be = pow(box.bump(), e);
  std::map<MultiIndex, PolyMatrix> lcoef;
  for (auto it = alphas.rbegin(); it != alphas.rend(); ++it) {
    const MultiIndex& alpha = *it;
    PolyMatrix num = mcoef.at(alpha);
    for (const auto& [beta, cl] : lcoef) {
      if (!alpha.divides(beta) || beta == alpha) continue;
      Poly db = Rational(binomial(beta, alpha)) * partial(beta - alpha, be);
      num -= db * cl;
    }
    PolyMatrix cl(n, m_out, m_in);
    for (std::size_t r = 0; r < m_out; ++r)
      for (std::size_t j = 0; j < m_in; ++j) {
        auto q = divide_by_bump_power(num(r, j), box, e);
        if (!q) return std::nullopt;
        cl(r, j) = std::move(*q);
      }
    lcoef.emplace(alpha, std::move(cl));
  }
  NormalOperator op(n, m_in, m_out);
  for (const auto& [alpha, c] : lcoef) op.add_term(alpha, c);
  return op;
}

inline int max_coefficient_degree(const NormalOperator& op) {
  int d = -1;
  for (const auto& [alpha, c] : op.coefficients())
    for (std::size_t r = 0; r < c.rows(); ++r)
      for (std::size_t j = 0; j < c.cols(); ++j) d = std::max(d, c(r, j).degree());
  return d;
}

}  // namespace detail

struct RecoveryConfig {
  Box box;
  std::size_t m_in = 1;
  std::size_t m_out = 1;
  unsigned order = 1;           // claimed order k
  unsigned degree_bound = 4;    // max coefficient degree accepted
  unsigned check_margin = 2;    // extra probe degrees used for verification
};

/// Reconstructs Δ from its action on test sections b^p x^β e_j only
/// (p = k + 1). Throws InconsistentProbes when no operator of order ≤ k
/// and coefficient degree ≤ the bound reproduces every probe, or when the
/// black box refuses a probe.
inline NormalOperator recover_coefficients(const std::function<TestSection(const TestSection&)>& raw_blackbox,
                                           const RecoveryConfig& cfg) {
  const std::size_t n = cfg.box.dim();
  const unsigned p = cfg.order + 1;
  auto blackbox = [&](const TestSection& t) {
    try {
      return raw_blackbox(t);
    } catch (const InconsistentProbes&) {
      throw;
    } catch (const InvalidInput& e) {
      throw InconsistentProbes(std::string("black box rejected a probe: ") + e.what());
    }
  };
  auto probe = [&](const MultiIndex& beta, std::size_t j) {
    return TestSection(cfg.box, p, Poly::monomial(n, beta) * FreeModuleElement::basis(n, cfg.m_in, j));
  };
  auto op = detail::solve_bumped_probes(n, cfg.m_in, cfg.m_out, cfg.box, p, cfg.order,
                                        [&](const MultiIndex& beta, std::size_t j) { return blackbox(probe(beta, j)).realize(); });
  if (!op) throw InconsistentProbes("probe responses are not divisible by the bump: not an operator of the claimed order");
  if (detail::max_coefficient_degree(*op) > static_cast<int>(cfg.degree_bound))
    throw InconsistentProbes("recovered coefficients exceed the degree bound");
  for (const auto& beta : multi_indices_up_to(n, cfg.order + cfg.check_margin))
    for (std::size_t j = 0; j < cfg.m_in; ++j) {
      TestSection t = probe(beta, j);
      if (apply_operator(*op, t).realize() != blackbox(t).realize())
        throw InconsistentProbes("recovered operator disagrees with the probe response: order claim too small");
    }
  return *op;
}

struct RestrictionConfig {
  Box box;
  unsigned max_order = 2;       // order bound K for the pre-transpose
  unsigned degree_bound = 4;
  unsigned check_margin = 2;
};

/// If Θ maps embedded test sections to embedded test sections on the probing
/// basis b^e x^β e_j (e = K + 1), returns the operator Δ with Δ' = Θ on every
/// probe; otherwise empty.
inline std::optional<NormalOperator> restricts_to_test(const DistOperator& theta, const RestrictionConfig& cfg) {
  const std::size_t n = cfg.box.dim();
  detail::require(theta.dim() == n, "operator dimension does not match the box");
  const unsigned e = cfg.max_order + 1;
  auto probe = [&](const MultiIndex& beta, std::size_t j) {
    return Distribution::embedded(TestSection(cfg.box, e, Poly::monomial(n, beta) * FreeModuleElement::basis(n, theta.rank_in(), j)));
  };
  auto embedded_image = [&](const Distribution& out) -> std::optional<FreeModuleElement> {
    if (!out.points().empty()) return std::nullopt;
    if (!out.regular_part()) return FreeModuleElement(n, theta.rank_out());
    const auto& d = *out.regular_part();
    if (!d.embedding || !(d.embedding->box == cfg.box)) return std::nullopt;
    return FreeModuleElement(d.realize());
  };

  bool escaped = false;
  auto adjoint = detail::solve_bumped_probes(
      n, theta.rank_in(), theta.rank_out(), cfg.box, e, cfg.max_order, [&](const MultiIndex& beta, std::size_t j) {
        auto img = embedded_image(theta(probe(beta, j)));
        if (!img) {
          escaped = true;
          return FreeModuleElement(n, theta.rank_out());
        }
        return *img;
      });
  if (escaped || !adjoint) return std::nullopt;
  NormalOperator recovered = formal_adjoint(*adjoint);
  if (detail::max_coefficient_degree(recovered) > static_cast<int>(cfg.degree_bound)) return std::nullopt;

  DistOperator candidate = transpose(recovered);
  std::vector<Distribution> checks;
  for (const auto& beta : multi_indices_up_to(n, cfg.max_order + cfg.check_margin))
    for (std::size_t j = 0; j < theta.rank_in(); ++j) {
      checks.push_back(probe(beta, j));
      checks.push_back(Distribution::density((Poly::monomial(n, beta) * FreeModuleElement::basis(n, theta.rank_in(), j)).components()));
    }
  std::vector<Rational> centre;
  for (std::size_t mu = 0; mu < n; ++mu) centre.push_back((cfg.box.lower(mu) + 2 * cfg.box.upper(mu)) / 3);
  for (const auto& alpha : multi_indices_up_to(n, 1))
    for (std::size_t j = 0; j < theta.rank_in(); ++j) checks.push_back(Distribution::evaluation(centre, alpha, j, theta.rank_in()));
  for (const auto& psi : checks) {
    Distribution got = theta(psi);
    if (psi.regular_part() && psi.regular_part()->embedding && !embedded_image(got)) return std::nullopt;
    if (!candidate(psi).equivalent(got)) return std::nullopt;
  }
  return recovered;
}

}  // namespace jetcalc

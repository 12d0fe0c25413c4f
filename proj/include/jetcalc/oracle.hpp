#pragma once

// Independent reference computations used by the property suites. Nothing
// here goes through normal-form composition, delta(), or the jet basis code:
// these are the brute-force routes the library results are checked against.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "jetcalc/free_module.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/poly.hpp"
#include "jetcalc/random.hpp"

namespace jetcalc::oracle {

/// Counts exponent vectors in [0, k]^n with sum ≤ k by plain nested counting.
inline unsigned long enumerate_jet_rank(std::size_t n, unsigned k, std::size_t m) {
  unsigned long count = 0;
  std::vector<unsigned> e(n, 0);
  while (true) {
    unsigned sum = 0;
    for (unsigned v : e) sum += v;
    if (sum <= k) ++count;
    std::size_t i = 0;
    while (i < n && ++e[i] > k) e[i++] = 0;
    if (i == n) break;
  }
  return count * m;
}

/// ∂^α p by repeated single-axis differentiation.
inline Poly iterated_partial(const MultiIndex& alpha, Poly p) {
  for (std::size_t mu = 0; mu < alpha.dim(); ++mu)
    for (unsigned i = 0; i < alpha[mu]; ++i) p = partial(mu, p);
  return p;
}

/// Σ C_α ∂^α s evaluated term by term with iterated single-axis partials.
inline FreeModuleElement apply_termwise(const NormalOperator& op, const FreeModuleElement& s) {
  FreeModuleElement out(op.dim(), op.m_out());
  for (const auto& [alpha, c] : op.coefficients())
    for (std::size_t r = 0; r < op.m_out(); ++r)
      for (std::size_t j = 0; j < op.m_in(); ++j) out[r] += c(r, j) * iterated_partial(alpha, s[j]);
  return out;
}

/// Truncated Taylor expansion at a point: coefficients t_β with
/// f(x0 + h) = Σ t_β h^β + O(|h|^{K+1}).
class TaylorJet {
 public:
  TaylorJet(std::size_t dim, unsigned order) : dim_(dim), order_(order) {}

  static TaylorJet of(const Poly& f, const std::vector<Rational>& x0, unsigned order) {
    TaylorJet t(f.dim(), order);
    for (unsigned d = 0; d <= order; ++d)
      for (const auto& beta : multi_indices_of_degree(f.dim(), d)) {
        Rational v = eval(iterated_partial(beta, f), x0) / Rational(factorial(beta));
        if (v != 0) t.coeffs_.emplace(beta, v);
      }
    return t;
  }

  Rational derivative(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? Rational(0) : it->second * Rational(factorial(alpha));
  }

  friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
    TaylorJet r(a.dim_, a.order_);
    for (const auto& [ma, ca] : a.coeffs_)
      for (const auto& [mb, cb] : b.coeffs_) {
        if (ma.total() + mb.total() > a.order_) continue;
        Rational& slot = r.coeffs_[ma + mb];
        slot += ca * cb;
      }
    return r;
  }

  std::map<MultiIndex, Rational>& coefficients() { return coeffs_; }

 private:
  std::size_t dim_;
  unsigned order_;
  std::map<MultiIndex, Rational> coeffs_;
};

/// Brute-force order straight from the iterated-δ definition:
///   (δ_{a_0}∘…∘δ_{a_k}Δ)(s) = Σ_{S ⊆ {0..k}} (-1)^{|S|} (Π_{i∉S} a_i) Δ((Π_{i∈S} a_i) s).
/// For each k the chain is evaluated on `trials` random tuples of
/// multipliers of degree ≤ multiplier_degree, each against random probe jets
/// at random rational points. Returns the smallest k whose chains all vanish
/// (every k-fold chain is then known to fail), empty if Δ itself vanishes on
/// every probe. Only Δ's coefficients C_α and its action on Taylor jets are used.
inline std::optional<unsigned> definition_order(const NormalOperator& op, Sampler& rng, unsigned trials = 50,
                                                unsigned max_order = 4, unsigned multiplier_degree = 2) {
  const std::size_t n = op.dim();
  const unsigned jet_order = max_order;
  auto random_point = [&] {
    std::vector<Rational> x;
    for (std::size_t mu = 0; mu < n; ++mu) x.push_back(Rational(rng.integer(-9, 9)));
    return x;
  };
  // Δ(f)_r at x0 from the jets of the inputs: Σ_α Σ_j C_α(x0)_{rj} ∂^α f_j(x0).
  auto apply_at = [&](const std::vector<Rational>& x0, const std::vector<TaylorJet>& input, std::size_t r) {
    Rational acc(0);
    for (const auto& [alpha, c] : op.coefficients())
      for (std::size_t j = 0; j < op.m_in(); ++j)
        if (!c(r, j).is_zero()) acc += eval(c(r, j), x0) * input[j].derivative(alpha);
    return acc;
  };
  auto chain_vanishes = [&](unsigned k_plus_1) {
    for (unsigned trial = 0; trial < trials; ++trial) {
      std::vector<Poly> a;
      for (unsigned i = 0; i < k_plus_1; ++i) a.push_back(rng.poly(n, multiplier_degree, 0.6));
      auto x0 = random_point();
      std::vector<TaylorJet> probe;
      for (std::size_t j = 0; j < op.m_in(); ++j) {
        TaylorJet t(n, jet_order);
        for (const auto& beta : multi_indices_up_to(n, jet_order)) t.coefficients()[beta] = rng.nonzero_rational();
        probe.push_back(std::move(t));
      }
      std::vector<Rational> a_at;
      std::vector<TaylorJet> a_jet;
      for (const auto& ai : a) {
        a_at.push_back(eval(ai, x0));
        a_jet.push_back(TaylorJet::of(ai, x0, jet_order));
      }
      // Σ_S (-1)^{|S|} a_{S^c}(x0) Δ(a_S p)(x0); the constants a_{S^c}(x0)
      // commute with Δ, so the subset sum is accumulated on the multiplier jet.
      TaylorJet combined(n, jet_order);
      for (unsigned mask = 0; mask < (1U << k_plus_1); ++mask) {
        Rational outside(1);
        TaylorJet inside = TaylorJet::of(Poly::constant(n, Rational(1)), x0, jet_order);
        bool odd = false;
        for (unsigned i = 0; i < k_plus_1; ++i) {
          if (mask & (1U << i)) {
            inside = inside * a_jet[i];
            odd = !odd;
          } else {
            outside *= a_at[i];
          }
        }
        if (odd) outside = -outside;
        for (const auto& [beta, c] : inside.coefficients()) combined.coefficients()[beta] += outside * c;
      }
      std::vector<TaylorJet> input;
      for (const auto& pj : probe) input.push_back(combined * pj);
      for (std::size_t r = 0; r < op.m_out(); ++r)
        if (apply_at(x0, input, r) != 0) return false;
    }
    return true;
  };
  if (chain_vanishes(0)) return std::nullopt;
  for (unsigned k = 0; k <= max_order; ++k)
    if (chain_vanishes(k + 1)) return k;
  return max_order + 1;
}

}  // namespace jetcalc::oracle

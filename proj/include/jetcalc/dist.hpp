#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/free_module.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/poly.hpp"
#include "jetcalc/random.hpp"
#include "jetcalc/testspace.hpp"

namespace jetcalc {

/// c · ev_{x,α,i}, where ev_{x,α,i}(s) = ∂^α s^i(x). Signed delta derivatives
/// δ^{(α)} = (-1)^{|α|} ev are not used.
struct PointFunctional {
  std::vector<Rational> point;
  MultiIndex alpha;
  std::size_t fiber = 0;
  Rational coeff{1};
};

/// Polynomial density, one per fiber component. When `embedding` is set the
/// density is b^p · densities over that box, i.e. the image of a test
/// section under D(Y) ⊂ D(Y)'.
struct RegularDensity {
  struct Embedding {
    Box box;
    unsigned exponent = 0;
    bool operator==(const Embedding&) const = default;
  };

  std::vector<Poly> densities;
  std::optional<Embedding> embedding;

  /// Density as plain polynomials (bump factor multiplied out).
  std::vector<Poly> realize() const {
    if (!embedding) return densities;
    Poly b = pow(embedding->box.bump(), embedding->exponent);
    std::vector<Poly> out;
    for (const auto& d : densities) out.push_back(b * d);
    return out;
  }
};

/// Finite combination of point functionals plus at most one regular density.
/// Functionals with equal (x, α, i) are merged and zero coefficients dropped,
/// so the representation is canonical for a fixed embedding flag.
class Distribution {
 public:
  using PointKey = std::tuple<std::vector<Rational>, MultiIndex, std::size_t>;

  Distribution() = default;
  Distribution(std::size_t dim, std::size_t rank) : dim_(dim), rank_(rank) {}

  static Distribution evaluation(const std::vector<Rational>& x, const MultiIndex& alpha, std::size_t fiber = 0,
                                 std::size_t rank = 1, const Rational& coeff = Rational(1)) {
    Distribution d(alpha.dim(), rank);
    d.add_point({x, alpha, fiber, coeff});
    return d;
  }

  static Distribution density(std::vector<Poly> densities) {
    detail::require(!densities.empty(), "density needs at least one component");
    Distribution d(densities.front().dim(), densities.size());
    d.add_density(RegularDensity{std::move(densities), std::nullopt});
    return d;
  }

  /// The distribution ψ(s) = ∫ s · b^p q: the embedded image of a test section.
  static Distribution embedded(const TestSection& t) {
    Distribution d(t.dim(), t.rank());
    d.add_density(RegularDensity{t.polynomial_part().components(), RegularDensity::Embedding{t.box(), t.bump_exponent()}});
    return d;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return rank_; }
  const std::map<PointKey, Rational>& points() const noexcept { return points_; }
  const std::optional<RegularDensity>& regular_part() const noexcept { return density_; }

  bool is_zero() const { return points_.empty() && !density_; }

  std::vector<PointFunctional> point_functionals() const {
    std::vector<PointFunctional> out;
    for (const auto& [key, c] : points_) out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), c});
    return out;
  }

  void add_point(const PointFunctional& f) {
    detail::require(f.point.size() == dim_ && f.alpha.dim() == dim_, "point functional dimension mismatch");
    detail::require(f.fiber < rank_, "point functional fiber index out of range");
    if (f.coeff == 0) return;
    auto [it, inserted] = points_.try_emplace(PointKey{f.point, f.alpha, f.fiber}, f.coeff);
    if (!inserted) {
      it->second += f.coeff;
      if (it->second == 0) points_.erase(it);
    }
  }

  /// Adds a density. Two embedded densities over the same box are kept
  /// embedded at the smaller exponent; any other mix is multiplied out.
  void add_density(RegularDensity d) {
    detail::require(d.densities.size() == rank_, "density rank mismatch");
    for (const auto& p : d.densities) detail::require(p.dim() == dim_, "density dimension mismatch");
    if (!density_) {
      density_ = std::move(d);
    } else if (density_->embedding && d.embedding && density_->embedding->box == d.embedding->box) {
      unsigned e1 = density_->embedding->exponent, e2 = d.embedding->exponent;
      unsigned e = std::min(e1, e2);
      Poly b = density_->embedding->box.bump();
      for (std::size_t i = 0; i < rank_; ++i)
        density_->densities[i] = pow(b, e1 - e) * density_->densities[i] + pow(b, e2 - e) * d.densities[i];
      density_->embedding->exponent = e;
    } else {
      auto lhs = density_->realize();
      auto rhs = d.realize();
      for (std::size_t i = 0; i < rank_; ++i) lhs[i] += rhs[i];
      density_ = RegularDensity{std::move(lhs), std::nullopt};
    }
    bool all_zero = true;
    for (const auto& p : density_->densities) all_zero = all_zero && p.is_zero();
    if (all_zero) density_.reset();
  }

  Distribution& operator+=(const Distribution& o) {
    check_compatible(o);
    for (const auto& [key, c] : o.points_) add_point({std::get<0>(key), std::get<1>(key), std::get<2>(key), c});
    if (o.density_) add_density(*o.density_);
    return *this;
  }

  friend Distribution operator+(Distribution a, const Distribution& b) { return a += b; }

  friend Distribution operator*(const Rational& c, const Distribution& d) {
    Distribution out(d.dim_, d.rank_);
    if (c == 0) return out;
    for (const auto& [key, v] : d.points_) out.points_.emplace(key, v * c);
    if (d.density_) {
      RegularDensity r = *d.density_;
      for (auto& p : r.densities) p *= c;
      out.density_ = std::move(r);
    }
    return out;
  }

  friend Distribution operator-(const Distribution& a, const Distribution& b) { return a + Rational(-1) * b; }

  /// Equality as functionals: point parts match and realized densities match.
  bool equivalent(const Distribution& o) const {
    if (dim_ != o.dim_ || rank_ != o.rank_ || points_ != o.points_) return false;
    if (!density_ || !o.density_) return !density_ && !o.density_;
    return density_->realize() == o.density_->realize();
  }

  void check_compatible(const Distribution& o) const {
    detail::require(dim_ == o.dim_ && rank_ == o.rank_, "distribution dimension or rank mismatch");
  }

 private:
  std::size_t dim_ = 1;
  std::size_t rank_ = 1;
  std::map<PointKey, Rational> points_;
  std::optional<RegularDensity> density_;
};

/// ⟨s, ψ⟩ = Σ c ∂^α s^i(x) + Σ_i ∫_box s^i ψ̄_i.
inline Rational pair(const TestSection& s, const Distribution& psi) {
  detail::require(s.dim() == psi.dim() && s.rank() == psi.rank(), "test section and distribution do not match");
  FreeModuleElement realized = s.realize();
  Rational total(0);
  for (const auto& [key, c] : psi.points()) {
    const auto& [x, alpha, fiber] = key;
    detail::require(s.box().strictly_contains(x), "point functional lies outside the test section's box");
    total += c * eval(partial(alpha, realized[fiber]), x);
  }
  if (const auto& d = psi.regular_part()) {
    auto dens = d->realize();
    Poly integrand(s.dim());
    for (std::size_t i = 0; i < s.rank(); ++i) integrand += realized[i] * dens[i];
    total += integrate(integrand, s.box());
  }
  return total;
}

/// f·ψ with ⟨f s, ψ⟩ = ⟨s, f ψ⟩. On ev_{x,α,i} this Leibniz-expands to
/// Σ_{β≤α} C(α,β) ∂^{α-β} f(x) ev_{x,β,i}.
inline Distribution mul_dist(const Poly& f, const Distribution& psi) {
  detail::require(f.dim() == psi.dim(), "multiplier dimension does not match distribution");
  Distribution out(psi.dim(), psi.rank());
  for (const auto& [key, c] : psi.points()) {
    const auto& [x, alpha, fiber] = key;
    for (const auto& beta : sub_indices(alpha)) {
      Rational w = c * Rational(binomial(alpha, beta)) * eval(partial(alpha - beta, f), x);
      out.add_point({x, beta, fiber, w});
    }
  }
  if (const auto& d = psi.regular_part()) {
    RegularDensity r = *d;
    for (auto& p : r.densities) p = f * p;
    out.add_density(std::move(r));
  }
  return out;
}

/// Formal adjoint Σ_α (-1)^{|α|} ∂^α ∘ (C_αᵀ ·), rank m_out -> m_in.
inline NormalOperator formal_adjoint(const NormalOperator& op) {
  NormalOperator out(op.dim(), op.m_out(), op.m_in());
  for (const auto& [alpha, c] : op.coefficients()) {
    Rational sign = alpha.total() % 2 == 0 ? Rational(1) : Rational(-1);
    out += sign * compose(NormalOperator::derivative(alpha, op.m_in()), NormalOperator::multiplication(c.transposed()));
  }
  return out;
}

/// Linear operator on distributions D(Y_out)' -> D(Y_in)'.
class DistOperator {
 public:
  using Action = std::function<Distribution(const Distribution&)>;

  DistOperator() = default;
  DistOperator(std::size_t dim, std::size_t rank_in, std::size_t rank_out, Action action)
      : dim_(dim), rank_in_(rank_in), rank_out_(rank_out), action_(std::move(action)) {}

  std::size_t dim() const noexcept { return dim_; }
  /// Rank of the distributions this operator accepts.
  std::size_t rank_in() const noexcept { return rank_in_; }
  std::size_t rank_out() const noexcept { return rank_out_; }

  Distribution operator()(const Distribution& psi) const {
    detail::require(psi.dim() == dim_ && psi.rank() == rank_in_, "distribution does not match operator");
    return action_(psi);
  }

 private:
  std::size_t dim_ = 1;
  std::size_t rank_in_ = 1;
  std::size_t rank_out_ = 1;
  Action action_;
};

/// Δ' with ⟨Δ s, ψ⟩ = ⟨s, Δ' ψ⟩. Point functionals are pulled back through
/// the Leibniz expansion of ∂^α(C_β ∂^β s); densities go through the formal
/// adjoint, staying embedded when the bump exponent covers the order.
inline DistOperator transpose(const NormalOperator& op) {
  NormalOperator adjoint = formal_adjoint(op);
  unsigned k = op.order().value_or(0);
  auto action = [op, adjoint, k](const Distribution& psi) {
    Distribution out(op.dim(), op.m_in());
    for (const auto& [key, c] : psi.points()) {
      const auto& [x, alpha, row] = key;
      for (const auto& [beta, coeff] : op.coefficients())
        for (const auto& gamma : sub_indices(alpha)) {
          Rational w = c * Rational(binomial(alpha, gamma));
          MultiIndex target = alpha - gamma + beta;
          for (std::size_t j = 0; j < op.m_in(); ++j) {
            const Poly& entry = coeff(row, j);
            if (entry.is_zero()) continue;
            out.add_point({x, target, j, w * eval(partial(gamma, entry), x)});
          }
        }
    }
    if (const auto& d = psi.regular_part()) {
      if (d->embedding && d->embedding->exponent >= k) {
        auto q = apply_bumped(adjoint, d->embedding->box, d->embedding->exponent, FreeModuleElement(d->densities));
        out.add_density(RegularDensity{q.components(), RegularDensity::Embedding{d->embedding->box, d->embedding->exponent - k}});
      } else {
        auto q = apply(adjoint, FreeModuleElement(d->realize()));
        out.add_density(RegularDensity{q.components(), std::nullopt});
      }
    }
    return out;
  };
  return DistOperator(op.dim(), op.m_out(), op.m_in(), action);
}

/// ψ ↦ f ψ as an operator.
inline DistOperator multiplication_operator(const Poly& f, std::size_t rank = 1) {
  return DistOperator(f.dim(), rank, rank, [f](const Distribution& psi) { return mul_dist(f, psi); });
}

/// δ_f Θ = f Θ - Θ ∘ (f ·).
inline DistOperator delta(const Poly& f, const DistOperator& theta) {
  return DistOperator(theta.dim(), theta.rank_in(), theta.rank_out(),
                      [f, theta](const Distribution& psi) { return mul_dist(f, theta(psi)) - theta(mul_dist(f, psi)); });
}

/// lhs ∘ rhs
inline DistOperator compose(const DistOperator& lhs, const DistOperator& rhs) {
  detail::require(rhs.rank_out() == lhs.rank_in() && lhs.dim() == rhs.dim(), "distribution operators do not compose");
  return DistOperator(rhs.dim(), rhs.rank_in(), lhs.rank_out(), [lhs, rhs](const Distribution& psi) { return lhs(rhs(psi)); });
}

/// Smallest k such that every sampled (k+1)-fold chain δ_{f_0}∘…∘δ_{f_k}Θ
/// annihilates every probe (multipliers f_i random of degree ≤
/// multiplier_degree, `trials` tuples per level). Empty when no k ≤ max_order
/// qualifies.
inline std::optional<unsigned> dist_op_order(const DistOperator& theta, const std::vector<Distribution>& probes,
                                             Sampler& rng, unsigned trials = 20, unsigned max_order = 4,
                                             unsigned multiplier_degree = 2) {
  detail::require(!probes.empty(), "order test needs at least one probe distribution");
  for (unsigned k = 0; k <= max_order; ++k) {
    bool annihilated = true;
    for (unsigned t = 0; annihilated && t < trials; ++t) {
      DistOperator chain = theta;
      for (unsigned i = 0; i <= k; ++i) chain = delta(rng.poly(theta.dim(), multiplier_degree, 0.6), chain);
      for (const auto& psi : probes)
        if (!chain(psi).is_zero()) {
          annihilated = false;
          break;
        }
    }
    if (annihilated) return k;
  }
  return std::nullopt;
}

/// Adjoint identity ⟨Δ s, ψ⟩ = ⟨s, Θ ψ⟩, checked exactly. Θ defaults to Δ'.
inline bool adjoint_check(const NormalOperator& op, const TestSection& s, const Distribution& psi,
                          const std::optional<DistOperator>& theta = std::nullopt) {
  unsigned k = op.order().value_or(0);
  detail::require(s.bump_exponent() > k || op.is_zero(), "bump budget violated: exponent must exceed the operator order");
  DistOperator t = theta ? *theta : transpose(op);
  return pair(apply_operator(op, s), psi) == pair(s, t(psi));
}

/// L'_u = transpose of the derivation u^μ ∂_μ (scalar case).
inline Distribution lie_derivative_dist(const std::vector<Poly>& u, const Distribution& psi) {
  detail::require(psi.rank() == 1, "Lie derivative of distributions is defined in the scalar case");
  return transpose(vector_field(u))(psi);
}

/// -∂_μ(u^μ ψ̄) computed directly on a plain density.
inline Poly lie_derivative_density(const std::vector<Poly>& u, const Poly& density) {
  detail::require(u.size() == density.dim(), "vector field has wrong number of components");
  Poly out(density.dim());
  for (std::size_t mu = 0; mu < u.size(); ++mu) out -= partial(mu, u[mu] * density);
  return out;
}

}  // namespace jetcalc

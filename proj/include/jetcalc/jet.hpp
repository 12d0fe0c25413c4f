#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/free_module.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/poly.hpp"

namespace jetcalc {

/// One coordinate of a jet: the derivative ∂^α of fiber component i.
struct JetSlot {
  MultiIndex alpha;
  std::size_t fiber;

  bool operator==(const JetSlot&) const = default;
};

/// m · C(n+k, k): the rank of J^k of a rank-m free module over n variables.
inline Integer jet_rank(std::size_t n, unsigned k, std::size_t m) {
  detail::require(n >= 1 && m >= 1, "jet rank needs n >= 1 and m >= 1");
  return Integer(static_cast<unsigned long>(m)) * binomial(static_cast<unsigned>(n) + k, k);
}

/// Coordinate model of J^k(A^m). Basis order: α by degree (axis 0 first within
/// a degree), fiber index varying fastest.
class JetSpace {
 public:
  JetSpace() = default;
  JetSpace(std::size_t n, std::size_t m, unsigned k) : n_(n), m_(m), k_(k), alphas_(multi_indices_up_to(n, k)) {
    detail::require(n >= 1 && m >= 1, "jet space needs n >= 1 and m >= 1");
  }

  std::size_t dim() const noexcept { return n_; }
  std::size_t fiber_rank() const noexcept { return m_; }
  unsigned order() const noexcept { return k_; }
  std::size_t rank() const noexcept { return alphas_.size() * m_; }
  const std::vector<MultiIndex>& multi_indices() const noexcept { return alphas_; }

  std::vector<JetSlot> basis() const {
    std::vector<JetSlot> out;
    out.reserve(rank());
    for (const auto& a : alphas_)
      for (std::size_t i = 0; i < m_; ++i) out.push_back({a, i});
    return out;
  }

  JetSlot slot(std::size_t index) const { return {alphas_.at(index / m_), index % m_}; }

  std::size_t index_of(const MultiIndex& alpha, std::size_t fiber) const {
    detail::require(alpha.total() <= k_ && fiber < m_, "jet slot outside the space");
    auto it = std::lower_bound(alphas_.begin(), alphas_.end(), alpha, [](const MultiIndex& a, const MultiIndex& b) {
      if (a.total() != b.total()) return a.total() < b.total();
      return b < a;  // axis 0 descending within a degree
    });
    return static_cast<std::size_t>(it - alphas_.begin()) * m_ + fiber;
  }

  bool operator==(const JetSpace& o) const { return n_ == o.n_ && m_ == o.m_ && k_ == o.k_; }

 private:
  std::size_t n_ = 1;
  std::size_t m_ = 1;
  unsigned k_ = 0;
  std::vector<MultiIndex> alphas_;
};

class JetVector {
 public:
  JetVector() = default;
  explicit JetVector(JetSpace space) : space_(std::move(space)), coords_(space_.rank(), Poly(space_.dim())) {}
  JetVector(JetSpace space, std::vector<Poly> coords) : space_(std::move(space)), coords_(std::move(coords)) {
    detail::require(coords_.size() == space_.rank(), "jet coordinates do not match the space rank");
  }

  const JetSpace& space() const noexcept { return space_; }
  const std::vector<Poly>& coords() const noexcept { return coords_; }
  const Poly& operator[](std::size_t i) const { return coords_[i]; }
  Poly& operator[](std::size_t i) { return coords_[i]; }
  const Poly& at(const MultiIndex& alpha, std::size_t fiber) const { return coords_[space_.index_of(alpha, fiber)]; }

  JetVector& operator+=(const JetVector& o) {
    detail::require(space_ == o.space_, "jet vectors live in different spaces");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }

  friend JetVector operator+(JetVector a, const JetVector& b) { return a += b; }

  friend JetVector operator*(const Poly& f, JetVector j) {
    for (auto& c : j.coords_) c = f * c;
    return j;
  }

  bool operator==(const JetVector& o) const { return space_ == o.space_ && coords_ == o.coords_; }

 private:
  JetSpace space_;
  std::vector<Poly> coords_;
};

/// J^k s: all ∂^α s^i with |α| ≤ k.
inline JetVector jet_prolong(unsigned k, const FreeModuleElement& s) {
  JetSpace space(s.dim(), s.rank(), k);
  JetVector j(space);
  std::size_t idx = 0;
  for (const auto& alpha : space.multi_indices())
    for (std::size_t i = 0; i < s.rank(); ++i) j[idx++] = partial(alpha, s[i]);
  return j;
}

/// π^k_r: truncation to |α| ≤ r.
inline JetVector project(const JetVector& j, unsigned r) {
  detail::require(r <= j.space().order(), "cannot project a jet to a higher order");
  JetSpace target(j.space().dim(), j.space().fiber_rank(), r);
  std::vector<Poly> coords(j.coords().begin(), j.coords().begin() + static_cast<std::ptrdiff_t>(target.rank()));
  return JetVector(target, std::move(coords));
}

/// Section part of a jet (π^k_0).
inline FreeModuleElement section_part(const JetVector& j) {
  return FreeModuleElement(std::vector<Poly>(j.coords().begin(), j.coords().begin() + static_cast<std::ptrdiff_t>(j.space().fiber_rank())));
}

/// A-linear map J^k(A^m) -> A^e given by an e × rank polynomial matrix.
class JetHom {
 public:
  JetHom() = default;
  JetHom(JetSpace domain, std::size_t codomain_rank)
      : domain_(std::move(domain)), matrix_(domain_.dim(), codomain_rank, domain_.rank()) {}
  JetHom(JetSpace domain, PolyMatrix matrix) : domain_(std::move(domain)), matrix_(std::move(matrix)) {
    detail::require(matrix_.cols() == domain_.rank(), "jet hom matrix width does not match the jet rank");
    detail::require(matrix_.dim() == domain_.dim(), "jet hom dimension mismatch");
  }

  const JetSpace& domain() const noexcept { return domain_; }
  std::size_t codomain_rank() const noexcept { return matrix_.rows(); }
  const PolyMatrix& matrix() const noexcept { return matrix_; }
  PolyMatrix& matrix() noexcept { return matrix_; }

  FreeModuleElement operator()(const JetVector& j) const {
    detail::require(j.space() == domain_, "jet vector is not in the domain of this hom");
    return matrix_ * FreeModuleElement(j.coords());
  }

  bool operator==(const JetHom& o) const { return domain_ == o.domain_ && matrix_ == o.matrix_; }

 private:
  JetSpace domain_;
  PolyMatrix matrix_;
};

/// The jet hom through which Δ factors: Δ = f^Δ ∘ J^k with k = order(Δ).
inline JetHom factorize(const NormalOperator& op) {
  auto k = op.order();
  detail::require(k.has_value(), "the zero operator has no canonical order to factorize through");
  JetHom h(JetSpace(op.dim(), op.m_in(), *k), op.m_out());
  for (const auto& [alpha, c] : op.coefficients())
    for (std::size_t r = 0; r < op.m_out(); ++r)
      for (std::size_t j = 0; j < op.m_in(); ++j) h.matrix()(r, h.domain().index_of(alpha, j)) = c(r, j);
  return h;
}

inline NormalOperator operator_from_jet_hom(const JetHom& h) {
  const JetSpace& space = h.domain();
  NormalOperator op(space.dim(), space.fiber_rank(), h.codomain_rank());
  for (const auto& alpha : space.multi_indices()) {
    PolyMatrix c(space.dim(), h.codomain_rank(), space.fiber_rank());
    for (std::size_t r = 0; r < h.codomain_rank(); ++r)
      for (std::size_t j = 0; j < space.fiber_rank(); ++j) c(r, j) = h.matrix()(r, space.index_of(alpha, j));
    op.add_term(alpha, c);
  }
  return op;
}

// ---------------------------------------------------------------------------
// First jets: the splitting J^1 = A ⊕ O^1 and the differential d^1.

/// d^1 f as a first-order jet whose section slot is zero: (0; ∂_0 f, ..., ∂_{n-1} f).
inline JetVector d1(const Poly& f) {
  JetSpace space(f.dim(), 1, 1);
  JetVector j(space);
  for (std::size_t mu = 0; mu < f.dim(); ++mu) j[space.index_of(MultiIndex::unit(f.dim(), mu), 0)] = partial(mu, f);
  return j;
}

/// Pairs a one-form (the O^1 part of a first jet, rank 1) with a vector field:
/// Σ u^μ ω_μ.
inline Poly contract(const std::vector<Poly>& u, const JetVector& form) {
  const JetSpace& space = form.space();
  detail::require(space.order() >= 1 && space.fiber_rank() == 1, "contraction needs a rank-1 first jet");
  detail::require(u.size() == space.dim(), "vector field has wrong number of components");
  Poly acc(space.dim());
  for (std::size_t mu = 0; mu < u.size(); ++mu) acc += u[mu] * form.at(MultiIndex::unit(space.dim(), mu), 0);
  return acc;
}

struct FirstJetSplit {
  FreeModuleElement section;   // π^1_0 part
  JetVector one_form_part;     // O^1 ⊗ P part, zero on the section slots
};

inline FirstJetSplit split_j1(const JetVector& j) {
  detail::require(j.space().order() == 1, "the canonical splitting is defined on first jets");
  FirstJetSplit out{section_part(j), j};
  for (std::size_t i = 0; i < j.space().fiber_rank(); ++i) out.one_form_part[i] = Poly(j.space().dim());
  return out;
}

inline JetVector reassemble_j1(const FirstJetSplit& split) {
  JetVector j = split.one_form_part;
  for (std::size_t i = 0; i < split.section.rank(); ++i) j[i] += split.section[i];
  return j;
}

// ---------------------------------------------------------------------------
// Connections

/// Linear connection on A^m: one m × m coefficient matrix Γ_μ per axis.
class ConnectionRepr {
 public:
  ConnectionRepr() = default;
  ConnectionRepr(std::size_t n, std::size_t m) : n_(n), m_(m), gamma_(n, PolyMatrix(n, m, m)) {}
  explicit ConnectionRepr(std::vector<PolyMatrix> gamma) : gamma_(std::move(gamma)) {
    detail::require(!gamma_.empty(), "connection needs one matrix per axis");
    n_ = gamma_.front().dim();
    m_ = gamma_.front().rows();
    detail::require(gamma_.size() == n_, "connection needs one matrix per axis");
    for (const auto& g : gamma_)
      detail::require(g.dim() == n_ && g.rows() == m_ && g.cols() == m_, "connection matrices have inconsistent shape");
  }

  std::size_t dim() const noexcept { return n_; }
  std::size_t rank() const noexcept { return m_; }
  const PolyMatrix& operator[](std::size_t mu) const { return gamma_[mu]; }
  PolyMatrix& operator[](std::size_t mu) { return gamma_[mu]; }

 private:
  std::size_t n_ = 1;
  std::size_t m_ = 1;
  std::vector<PolyMatrix> gamma_;
};

/// (∇_μ s)^i = ∂_μ s^i + Γ_μ^i_j s^j for every axis μ.
inline std::vector<FreeModuleElement> covariant_differential(const ConnectionRepr& gamma, const FreeModuleElement& s) {
  detail::require(s.dim() == gamma.dim(), "section dimension does not match connection");
  detail::require(s.rank() == gamma.rank(), "section rank does not match connection");
  std::vector<FreeModuleElement> out;
  out.reserve(gamma.dim());
  for (std::size_t mu = 0; mu < gamma.dim(); ++mu) out.push_back(partial(mu, s) + gamma[mu] * s);
  return out;
}

/// ∇_u s = u^μ ∇_μ s.
inline FreeModuleElement covariant_derivative(const ConnectionRepr& gamma, const std::vector<Poly>& u,
                                              const FreeModuleElement& s) {
  detail::require(u.size() == gamma.dim(), "vector field has wrong number of components");
  auto parts = covariant_differential(gamma, s);
  FreeModuleElement acc(s.dim(), s.rank());
  for (std::size_t mu = 0; mu < u.size(); ++mu) acc += u[mu] * parts[mu];
  return acc;
}

/// ∇_u as a first-order operator on A^m.
inline NormalOperator covariant_operator(const ConnectionRepr& gamma, const std::vector<Poly>& u) {
  std::size_t n = gamma.dim(), m = gamma.rank();
  NormalOperator op(n, m, m);
  PolyMatrix zero_order(n, m, m);
  for (std::size_t mu = 0; mu < n; ++mu) {
    op.add_term(MultiIndex::unit(n, mu), u[mu] * PolyMatrix::identity(n, m));
    zero_order += u[mu] * gamma[mu];
  }
  op.add_term(MultiIndex(n), zero_order);
  return op;
}

/// An A-linear map P -> J^1(P), s ↦ (S s; D_0 s, ..., D_{n-1} s).
struct JetSplitting {
  PolyMatrix section_part;
  std::vector<PolyMatrix> derivative_part;

  JetVector operator()(const FreeModuleElement& s) const {
    std::size_t n = s.dim();
    JetSpace space(n, s.rank(), 1);
    JetVector j(space);
    FreeModuleElement base = section_part * s;
    for (std::size_t i = 0; i < s.rank(); ++i) j[space.index_of(MultiIndex(n), i)] = base[i];
    for (std::size_t mu = 0; mu < n; ++mu) {
      FreeModuleElement d = derivative_part[mu] * s;
      for (std::size_t i = 0; i < s.rank(); ++i) j[space.index_of(MultiIndex::unit(n, mu), i)] = d[i];
    }
    return j;
  }
};

/// Γ(s) = J^1 s - ∇s, i.e. section part the identity and derivative part -Γ_μ.
inline JetSplitting splitting_from_connection(const ConnectionRepr& gamma) {
  JetSplitting out{PolyMatrix::identity(gamma.dim(), gamma.rank()), {}};
  for (std::size_t mu = 0; mu < gamma.dim(); ++mu) out.derivative_part.push_back(Rational(-1) * gamma[mu]);
  return out;
}

/// ∇ = J^1 - Γ read back as connection coefficients.
inline ConnectionRepr connection_from_splitting(const JetSplitting& split) {
  std::vector<PolyMatrix> gamma;
  for (const auto& d : split.derivative_part) gamma.push_back(Rational(-1) * d);
  return ConnectionRepr(std::move(gamma));
}

/// Executable witness of π^1_0 ∘ Γ = id: probes Γ on e_i and x_μ e_i and
/// compares section parts exactly.
inline bool check_splitting(const JetSplitting& split) {
  std::size_t n = split.section_part.dim(), m = split.section_part.rows();
  if (split.section_part.cols() != m || split.derivative_part.size() != n) return false;
  std::vector<Poly> multipliers{Poly::constant(n, Rational(1))};
  for (std::size_t mu = 0; mu < n; ++mu) multipliers.push_back(Poly::variable(n, mu));
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& f : multipliers) {
      FreeModuleElement probe = f * FreeModuleElement::basis(n, m, i);
      if (section_part(split(probe)) != probe) return false;
    }
  return true;
}

inline bool check_splitting(const ConnectionRepr& gamma) { return check_splitting(splitting_from_connection(gamma)); }

}  // namespace jetcalc

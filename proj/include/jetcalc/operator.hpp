#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/free_module.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/poly.hpp"

namespace jetcalc {

/// Differential operator A^{m_in} -> A^{m_out} in normal form
/// Σ_α C_α(x) ∂^α with (m_out × m_in) polynomial coefficient matrices.
/// Zero matrices are never stored, so two operators are equal iff they act
/// identically on every section.
class NormalOperator {
 public:
  using CoefficientMap = std::map<MultiIndex, PolyMatrix>;

  NormalOperator() = default;
  NormalOperator(std::size_t dim, std::size_t m_in, std::size_t m_out) : dim_(dim), m_in_(m_in), m_out_(m_out) {
    detail::require(dim <= kMaxDimension, "dimension too large");
  }

  static NormalOperator zero(std::size_t dim, std::size_t m_in, std::size_t m_out) {
    return NormalOperator(dim, m_in, m_out);
  }

  static NormalOperator identity(std::size_t dim, std::size_t m = 1) {
    return multiplication(PolyMatrix::identity(dim, m));
  }

  static NormalOperator multiplication(const PolyMatrix& c) {
    NormalOperator op(c.dim(), c.cols(), c.rows());
    op.add_term(MultiIndex(c.dim()), c);
    return op;
  }

  static NormalOperator multiplication(const Poly& f, std::size_t m = 1) {
    return multiplication(f * PolyMatrix::identity(f.dim(), m));
  }

  /// ∂^α acting diagonally on rank-m sections.
  static NormalOperator derivative(const MultiIndex& alpha, std::size_t m = 1) {
    NormalOperator op(alpha.dim(), m, m);
    op.add_term(alpha, PolyMatrix::identity(alpha.dim(), m));
    return op;
  }

  static NormalOperator derivative(std::size_t dim, std::size_t axis, std::size_t m = 1) {
    return derivative(MultiIndex::unit(dim, axis), m);
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t m_in() const noexcept { return m_in_; }
  std::size_t m_out() const noexcept { return m_out_; }
  const CoefficientMap& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Highest |α| carrying a nonzero coefficient; empty for the zero operator.
  std::optional<unsigned> order() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.rbegin()->first.total();
  }

  PolyMatrix coefficient(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? PolyMatrix(dim_, m_out_, m_in_) : it->second;
  }

  void add_term(const MultiIndex& alpha, const PolyMatrix& c) {
    detail::require(alpha.dim() == dim_ && c.dim() == dim_, "operator term dimension mismatch");
    detail::require(c.rows() == m_out_ && c.cols() == m_in_, "operator term has wrong matrix shape");
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  NormalOperator& operator+=(const NormalOperator& o) {
    check_same_type(o);
    for (const auto& [a, c] : o.coeffs_) add_term(a, c);
    return *this;
  }

  NormalOperator& operator-=(const NormalOperator& o) {
    check_same_type(o);
    for (const auto& [a, c] : o.coeffs_) add_term(a, Rational(-1) * c);
    return *this;
  }

  friend NormalOperator operator+(NormalOperator a, const NormalOperator& b) { return a += b; }
  friend NormalOperator operator-(NormalOperator a, const NormalOperator& b) { return a -= b; }

  friend NormalOperator operator*(const Rational& s, const NormalOperator& op) {
    NormalOperator r(op.dim_, op.m_in_, op.m_out_);
    for (const auto& [a, c] : op.coeffs_) r.add_term(a, s * c);
    return r;
  }

  /// Left multiplication (f·Δ)(s) = f·Δ(s).
  friend NormalOperator operator*(const Poly& f, const NormalOperator& op) {
    NormalOperator r(op.dim_, op.m_in_, op.m_out_);
    for (const auto& [a, c] : op.coeffs_) r.add_term(a, f * c);
    return r;
  }

  bool operator==(const NormalOperator& o) const = default;

  void check_same_type(const NormalOperator& o) const {
    detail::require(dim_ == o.dim_, "operator dimension mismatch");
    detail::require(m_in_ == o.m_in_ && m_out_ == o.m_out_, "operator rank mismatch");
  }

 private:
  std::size_t dim_ = 0;
  std::size_t m_in_ = 1;
  std::size_t m_out_ = 1;
  CoefficientMap coeffs_;
};

/// Σ_α C_α ∂^α s.
inline FreeModuleElement apply(const NormalOperator& op, const FreeModuleElement& s) {
  detail::require(s.dim() == op.dim(), "section dimension does not match operator");
  detail::require(s.rank() == op.m_in(), "section rank does not match operator input rank");
  FreeModuleElement out(op.dim(), op.m_out());
  for (const auto& [alpha, c] : op.coefficients()) out += c * partial(alpha, s);
  return out;
}

inline Poly apply(const NormalOperator& op, const Poly& f) {
  detail::require(op.m_in() == 1 && op.m_out() == 1, "scalar application needs a rank-1 operator");
  return apply(op, FreeModuleElement({f}))[0];
}

/// Normal form of lhs ∘ rhs, using ∂^α(C s) = Σ_{γ≤α} C(α,γ) (∂^γ C)(∂^{α-γ} s).
inline NormalOperator compose(const NormalOperator& lhs, const NormalOperator& rhs) {
  detail::require(lhs.dim() == rhs.dim(), "operator dimension mismatch");
  detail::require(rhs.m_out() == lhs.m_in(), "rank mismatch in composition");
  NormalOperator out(lhs.dim(), rhs.m_in(), lhs.m_out());
  for (const auto& [alpha, c1] : lhs.coefficients()) {
    for (const auto& gamma : sub_indices(alpha)) {
      Rational weight(binomial(alpha, gamma));
      MultiIndex rest = alpha - gamma;
      for (const auto& [beta, c2] : rhs.coefficients()) {
        PolyMatrix d = c2.map([&](const Poly& p) { return partial(gamma, p); });
        if (d.is_zero()) continue;
        out.add_term(rest + beta, weight * (c1 * d));
      }
    }
  }
  return out;
}

/// δ_a Δ = a·Δ - Δ∘(a·).
inline NormalOperator delta(const Poly& a, const NormalOperator& op) {
  detail::require(a.dim() == op.dim(), "multiplier dimension does not match operator");
  return a * op - compose(op, NormalOperator::multiplication(a, op.m_in()));
}

/// Vector field u^μ ∂_μ as a scalar operator.
inline NormalOperator vector_field(const std::vector<Poly>& u) {
  detail::require(!u.empty(), "vector field needs at least one component");
  std::size_t n = u.front().dim();
  detail::require(u.size() == n, "vector field must have one component per axis");
  NormalOperator op(n, 1, 1);
  for (std::size_t mu = 0; mu < n; ++mu) op.add_term(MultiIndex::unit(n, mu), PolyMatrix::scalar(u[mu]));
  return op;
}

inline NormalOperator vector_field(const FreeModuleElement& u) { return vector_field(u.components()); }

/// Components u^μ when Δ is a scalar derivation (first order, Δ(1) = 0).
inline std::optional<std::vector<Poly>> derivation_components(const NormalOperator& op) {
  if (op.m_in() != 1 || op.m_out() != 1) return std::nullopt;
  if (auto k = op.order(); k && *k > 1) return std::nullopt;
  std::vector<Poly> u(op.dim(), Poly(op.dim()));
  for (const auto& [alpha, c] : op.coefficients()) {
    if (alpha.is_zero()) return std::nullopt;
    for (std::size_t mu = 0; mu < op.dim(); ++mu)
      if (alpha[mu] == 1) u[mu] = c(0, 0);
  }
  return u;
}

struct FirstOrderSplit {
  Poly zero_order;             // q = Δ(1)
  NormalOperator derivation;   // Δ - q·(·)
};

/// Splits a first-order scalar operator into multiplication by Δ(1) plus a
/// derivation.
inline FirstOrderSplit decompose_first_order(const NormalOperator& op) {
  detail::require(op.m_in() == 1 && op.m_out() == 1, "decomposition is defined for operators on A");
  auto k = op.order();
  detail::require(!k || *k <= 1, "decomposition requires an operator of order at most 1");
  Poly q = apply(op, Poly::constant(op.dim(), Rational(1)));
  return {q, op - NormalOperator::multiplication(q)};
}

/// φ_Δ(p): the scalar operator a ↦ Δ(a·p), landing in rank m_out.
inline NormalOperator curry(const NormalOperator& op, const FreeModuleElement& p) {
  detail::require(p.dim() == op.dim(), "section dimension does not match operator");
  detail::require(p.rank() == op.m_in(), "section rank does not match operator input rank");
  PolyMatrix column(op.dim(), op.m_in(), 1);
  for (std::size_t i = 0; i < p.rank(); ++i) column(i, 0) = p[i];
  return compose(op, NormalOperator::multiplication(column));
}

// ---------------------------------------------------------------------------
// Operator expressions (input syntax before normalization)

class OperatorExpr {
 public:
  enum class Kind { multiply, derivative, sum, compose, scale, block };

  static OperatorExpr multiply(PolyMatrix m) {
    OperatorExpr e(Kind::multiply, m.dim(), m.cols(), m.rows());
    e.matrix_ = std::move(m);
    return e;
  }

  static OperatorExpr multiply(const Poly& f) { return multiply(PolyMatrix::scalar(f)); }

  static OperatorExpr derivative(std::size_t dim, std::size_t axis, std::size_t rank = 1) {
    detail::require(axis < dim, "derivative axis out of range");
    OperatorExpr e(Kind::derivative, dim, rank, rank);
    e.axis_ = axis;
    return e;
  }

  static OperatorExpr sum(OperatorExpr a, OperatorExpr b) {
    detail::require(a.dim_ == b.dim_, "dimension mismatch in sum");
    detail::require(a.m_in_ == b.m_in_ && a.m_out_ == b.m_out_, "rank mismatch in sum");
    OperatorExpr e(Kind::sum, a.dim_, a.m_in_, a.m_out_);
    e.children_ = {std::make_shared<const OperatorExpr>(std::move(a)), std::make_shared<const OperatorExpr>(std::move(b))};
    return e;
  }

  /// lhs ∘ rhs
  static OperatorExpr compose(OperatorExpr lhs, OperatorExpr rhs) {
    detail::require(lhs.dim_ == rhs.dim_, "dimension mismatch in composition");
    detail::require(rhs.m_out_ == lhs.m_in_, "rank mismatch in composition");
    OperatorExpr e(Kind::compose, lhs.dim_, rhs.m_in_, lhs.m_out_);
    e.children_ = {std::make_shared<const OperatorExpr>(std::move(lhs)), std::make_shared<const OperatorExpr>(std::move(rhs))};
    return e;
  }

  static OperatorExpr scale(const Rational& factor, OperatorExpr a) {
    OperatorExpr e(Kind::scale, a.dim_, a.m_in_, a.m_out_);
    e.factor_ = factor;
    e.children_ = {std::make_shared<const OperatorExpr>(std::move(a))};
    return e;
  }

  /// Matrix of scalar operator expressions, row-major.
  static OperatorExpr block(std::size_t rows, std::size_t cols, std::vector<OperatorExpr> entries) {
    detail::require(rows > 0 && cols > 0 && entries.size() == rows * cols, "operator matrix has wrong entry count");
    std::size_t dim = entries.front().dim_;
    OperatorExpr e(Kind::block, dim, cols, rows);
    for (auto& entry : entries) {
      detail::require(entry.dim_ == dim, "dimension mismatch in operator matrix");
      detail::require(entry.m_in_ == 1 && entry.m_out_ == 1, "operator matrix entries must be scalar");
      e.children_.push_back(std::make_shared<const OperatorExpr>(std::move(entry)));
    }
    return e;
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t m_in() const noexcept { return m_in_; }
  std::size_t m_out() const noexcept { return m_out_; }

  friend NormalOperator normalize(const OperatorExpr& e);

 private:
  OperatorExpr(Kind kind, std::size_t dim, std::size_t m_in, std::size_t m_out)
      : kind_(kind), dim_(dim), m_in_(m_in), m_out_(m_out) {}

  Kind kind_;
  std::size_t dim_;
  std::size_t m_in_;
  std::size_t m_out_;
  PolyMatrix matrix_;
  std::size_t axis_ = 0;
  Rational factor_{1};
  std::vector<std::shared_ptr<const OperatorExpr>> children_;
};

/// Canonical normal form of an operator expression.
inline NormalOperator normalize(const OperatorExpr& e) {
  using Kind = OperatorExpr::Kind;
  switch (e.kind_) {
    case Kind::multiply:
      return NormalOperator::multiplication(e.matrix_);
    case Kind::derivative:
      return NormalOperator::derivative(e.dim_, e.axis_, e.m_in_);
    case Kind::sum:
      return normalize(*e.children_[0]) + normalize(*e.children_[1]);
    case Kind::compose:
      return compose(normalize(*e.children_[0]), normalize(*e.children_[1]));
    case Kind::scale:
      return e.factor_ * normalize(*e.children_[0]);
    case Kind::block: {
      NormalOperator out(e.dim_, e.m_in_, e.m_out_);
      for (std::size_t r = 0; r < e.m_out_; ++r)
        for (std::size_t c = 0; c < e.m_in_; ++c) {
          NormalOperator entry = normalize(*e.children_[r * e.m_in_ + c]);
          for (const auto& [alpha, coeff] : entry.coefficients()) {
            PolyMatrix placed(e.dim_, e.m_out_, e.m_in_);
            placed(r, c) = coeff(0, 0);
            out.add_term(alpha, placed);
          }
        }
      return out;
    }
  }
  return NormalOperator(e.dim_, e.m_in_, e.m_out_);
}

}  // namespace jetcalc

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/rational.hpp"

namespace jetcalc {

/// Element of Q[x_0..x_{n-1}]. Terms are kept in a graded-lex ordered map
/// with no zero coefficients, so equality is structural.
class Poly {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  Poly() = default;
  explicit Poly(std::size_t dim) : dim_(dim) { detail::require(dim <= kMaxDimension, "dimension too large"); }

  static Poly constant(std::size_t dim, const Rational& c) { return monomial(dim, MultiIndex(dim), c); }

  static Poly variable(std::size_t dim, std::size_t axis) {
    return monomial(dim, MultiIndex::unit(dim, axis), Rational(1));
  }

  static Poly monomial(std::size_t dim, const MultiIndex& exponent, const Rational& c = Rational(1)) {
    detail::require(exponent.dim() == dim, "monomial dimension mismatch");
    Poly p(dim);
    if (c != 0) p.terms_.emplace(exponent, c);
    return p;
  }

  std::size_t dim() const noexcept { return dim_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const noexcept { return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.total()); }

  Rational coefficient(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero()); }

  Rational constant_term() const { return coefficient(MultiIndex(dim_)); }

  /// Adds c·x^m in place.
  void add_term(const MultiIndex& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    check_same_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Poly& operator-=(const Poly& o) {
    check_same_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Poly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= s;
    }
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  Poly operator-() const { return *this * Rational(-1); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_same_dim(b);
    Poly r(a.dim_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma + mb, ca * cb);
    return r;
  }

  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  bool operator==(const Poly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

  void check_same_dim(const Poly& o) const {
    detail::require(dim_ == o.dim_, "polynomial dimension mismatch");
  }

 private:
  std::size_t dim_ = 0;
  TermMap terms_;
};

inline Poly pow(const Poly& base, unsigned exponent) {
  Poly result = Poly::constant(base.dim(), Rational(1));
  Poly b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

/// Formal partial derivative ∂_axis p.
inline Poly partial(std::size_t axis, const Poly& p) {
  detail::require(axis < p.dim(), "axis out of range");
  Poly r(p.dim());
  for (const auto& [m, c] : p.terms()) {
    if (m[axis] == 0) continue;
    MultiIndex d = m;
    d.set(axis, m[axis] - 1);
    r.add_term(d, c * m[axis]);
  }
  return r;
}

/// ∂^α p.
inline Poly partial(const MultiIndex& alpha, const Poly& p) {
  detail::require(alpha.dim() == p.dim(), "multi-index dimension mismatch");
  Poly r(p.dim());
  for (const auto& [m, c] : p.terms()) {
    if (!alpha.divides(m)) continue;
    r.add_term(m - alpha, c * Rational(falling_factorial(m, alpha)));
  }
  return r;
}

inline Rational eval(const Poly& p, std::span<const Rational> point) {
  detail::require(point.size() == p.dim(), "evaluation point has wrong length");
  Rational acc(0);
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (std::size_t i = 0; i < p.dim(); ++i)
      if (m[i] != 0) t *= rational_pow(point[i], m[i]);
    acc += t;
  }
  return acc;
}

inline Rational eval(const Poly& p, const std::vector<Rational>& point) {
  return eval(p, std::span<const Rational>(point));
}

/// Exact quotient of p by (x_axis - root); empty when the division leaves a
/// remainder.
inline std::optional<Poly> divide_by_linear(const Poly& p, std::size_t axis, const Rational& root) {
  detail::require(axis < p.dim(), "axis out of range");
  // Group by the exponents of the other axes; each group is univariate in x_axis.
  std::map<MultiIndex, std::map<unsigned, Rational>> groups;
  for (const auto& [m, c] : p.terms()) {
    MultiIndex rest = m;
    rest.set(axis, 0);
    groups[rest][m[axis]] = c;
  }
  Poly q(p.dim());
  for (const auto& [rest, uni] : groups) {
    unsigned top = uni.rbegin()->first;
    // Synthetic division, highest degree first.
    Rational carry(0);
    for (unsigned d = top + 1; d-- > 0;) {
      auto it = uni.find(d);
      Rational coeff = (it == uni.end() ? Rational(0) : it->second) + carry;
      if (d == 0) {
        if (coeff != 0) return std::nullopt;
        break;
      }
      MultiIndex m = rest;
      m.set(axis, d - 1);
      q.add_term(m, coeff);
      carry = coeff * root;
    }
  }
  return q;
}

}  // namespace jetcalc

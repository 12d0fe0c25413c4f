#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/rational.hpp"

namespace jetcalc {

/// Hard upper bound on the ambient dimension. Sessions normally stay at or
/// below `kDefaultDimensionLimit`.
inline constexpr std::size_t kMaxDimension = 8;
inline constexpr std::size_t kDefaultDimensionLimit = 4;

/// Exponent vector α = (α_0, ..., α_{n-1}). Ordered graded-lexicographically:
/// total degree first, then lexicographic with axis 0 most significant.
class MultiIndex {
 public:
  MultiIndex() = default;

  explicit MultiIndex(std::size_t dim) : dim_(check_dim(dim)) {}

  MultiIndex(std::initializer_list<unsigned> exponents) : dim_(check_dim(exponents.size())) {
    std::size_t i = 0;
    for (unsigned e : exponents) exps_[i++] = static_cast<std::uint16_t>(e);
  }

  explicit MultiIndex(const std::vector<unsigned>& exponents) : dim_(check_dim(exponents.size())) {
    for (std::size_t i = 0; i < exponents.size(); ++i) exps_[i] = static_cast<std::uint16_t>(exponents[i]);
  }

  static MultiIndex unit(std::size_t dim, std::size_t axis) {
    detail::require(axis < dim, "axis out of range");
    MultiIndex m(dim);
    m.exps_[axis] = 1;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  unsigned operator[](std::size_t i) const noexcept { return exps_[i]; }
  void set(std::size_t i, unsigned value) { exps_[i] = static_cast<std::uint16_t>(value); }

  unsigned total() const noexcept {
    unsigned s = 0;
    for (std::size_t i = 0; i < dim_; ++i) s += exps_[i];
    return s;
  }

  bool is_zero() const noexcept { return total() == 0; }

  /// Componentwise β ≤ α.
  bool divides(const MultiIndex& other) const noexcept {
    for (std::size_t i = 0; i < dim_; ++i)
      if (exps_[i] > other.exps_[i]) return false;
    return true;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r.exps_[i] = static_cast<std::uint16_t>(exps_[i] + o.exps_[i]);
    return r;
  }

  /// Requires o ≤ *this componentwise.
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r.exps_[i] = static_cast<std::uint16_t>(exps_[i] - o.exps_[i]);
    return r;
  }

  MultiIndex with_increment(std::size_t axis) const {
    MultiIndex r = *this;
    ++r.exps_[axis];
    return r;
  }

  std::vector<unsigned> to_vector() const {
    return std::vector<unsigned>(exps_.begin(), exps_.begin() + static_cast<std::ptrdiff_t>(dim_));
  }

  std::strong_ordering operator<=>(const MultiIndex& o) const noexcept {
    if (auto c = total() <=> o.total(); c != 0) return c;
    for (std::size_t i = 0; i < std::max(dim_, o.dim_); ++i)
      if (auto c = exps_[i] <=> o.exps_[i]; c != 0) return c;
    return dim_ <=> o.dim_;
  }

  bool operator==(const MultiIndex& o) const noexcept { return dim_ == o.dim_ && exps_ == o.exps_; }

 private:
  static std::size_t check_dim(std::size_t dim) {
    detail::require(dim <= kMaxDimension, "dimension exceeds the supported maximum");
    return dim;
  }

  std::size_t dim_ = 0;
  std::array<std::uint16_t, kMaxDimension> exps_{};
};

/// α! = Π α_i!
inline Integer factorial(const MultiIndex& a) {
  Integer r = 1;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), a[i]);
    r *= f;
  }
  return r;
}

/// Multinomial binomial C(α, β) = Π C(α_i, β_i); zero unless β ≤ α.
inline Integer binomial(const MultiIndex& a, const MultiIndex& b) {
  if (!b.divides(a)) return 0;
  Integer r = 1;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Integer c;
    mpz_bin_uiui(c.get_mpz_t(), a[i], b[i]);
    r *= c;
  }
  return r;
}

/// α!/(α-β)!, the coefficient produced by ∂^β on x^α.
inline Integer falling_factorial(const MultiIndex& a, const MultiIndex& b) {
  if (!b.divides(a)) return 0;
  Integer r = 1;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (unsigned j = 0; j < b[i]; ++j) r *= a[i] - j;
  return r;
}

inline Integer binomial(unsigned n, unsigned k) {
  Integer c;
  mpz_bin_uiui(c.get_mpz_t(), n, k);
  return c;
}

/// All multi-indices of total degree exactly `degree`, axis 0 descending
/// first (x^2, xy, y^2 for n = 2).
inline std::vector<MultiIndex> multi_indices_of_degree(std::size_t dim, unsigned degree) {
  std::vector<MultiIndex> out;
  if (dim == 0) {
    if (degree == 0) out.emplace_back(0);
    return out;
  }
  MultiIndex cur(dim);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t axis, unsigned remaining) {
    if (axis + 1 == dim) {
      cur.set(axis, remaining);
      out.push_back(cur);
      return;
    }
    for (unsigned e = remaining + 1; e-- > 0;) {
      cur.set(axis, e);
      rec(axis + 1, remaining - e);
    }
  };
  rec(0, degree);
  return out;
}

/// All multi-indices with |α| ≤ max_degree in jet basis order: by degree,
/// then axis 0 descending within a degree.
inline std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, unsigned max_degree) {
  std::vector<MultiIndex> out;
  for (unsigned d = 0; d <= max_degree; ++d) {
    auto level = multi_indices_of_degree(dim, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// All β ≤ α componentwise.
inline std::vector<MultiIndex> sub_indices(const MultiIndex& a) {
  std::vector<MultiIndex> out;
  MultiIndex cur(a.dim());
  std::function<void(std::size_t)> rec = [&](std::size_t axis) {
    if (axis == a.dim()) {
      out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= a[axis]; ++e) {
      cur.set(axis, e);
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace jetcalc

#pragma once

#include <cstddef>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/poly.hpp"

namespace jetcalc {

/// Element of the free module A^m: a section with m polynomial components.
class FreeModuleElement {
 public:
  FreeModuleElement() = default;

  FreeModuleElement(std::size_t dim, std::size_t rank) : dim_(dim), components_(rank, Poly(dim)) {}

  explicit FreeModuleElement(std::vector<Poly> components) : components_(std::move(components)) {
    detail::require(!components_.empty(), "module element needs at least one component");
    dim_ = components_.front().dim();
    for (const auto& c : components_) detail::require(c.dim() == dim_, "module components differ in dimension");
  }

  static FreeModuleElement basis(std::size_t dim, std::size_t rank, std::size_t i) {
    FreeModuleElement e(dim, rank);
    e.components_.at(i) = Poly::constant(dim, Rational(1));
    return e;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return components_.size(); }
  const Poly& operator[](std::size_t i) const { return components_[i]; }
  Poly& operator[](std::size_t i) { return components_[i]; }
  const std::vector<Poly>& components() const noexcept { return components_; }

  bool is_zero() const {
    for (const auto& c : components_)
      if (!c.is_zero()) return false;
    return true;
  }

  FreeModuleElement& operator+=(const FreeModuleElement& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < rank(); ++i) components_[i] += o.components_[i];
    return *this;
  }

  FreeModuleElement& operator-=(const FreeModuleElement& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < rank(); ++i) components_[i] -= o.components_[i];
    return *this;
  }

  friend FreeModuleElement operator+(FreeModuleElement a, const FreeModuleElement& b) { return a += b; }
  friend FreeModuleElement operator-(FreeModuleElement a, const FreeModuleElement& b) { return a -= b; }

  friend FreeModuleElement operator*(const Poly& f, FreeModuleElement s) {
    for (auto& c : s.components_) c = f * c;
    return s;
  }

  friend FreeModuleElement operator*(const Rational& f, FreeModuleElement s) {
    for (auto& c : s.components_) c *= f;
    return s;
  }

  bool operator==(const FreeModuleElement& o) const = default;

  void check_compatible(const FreeModuleElement& o) const {
    detail::require(dim_ == o.dim_, "module element dimension mismatch");
    detail::require(rank() == o.rank(), "module element rank mismatch");
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Poly> components_;
};

/// Row-major matrix of polynomials.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t dim, std::size_t rows, std::size_t cols)
      : dim_(dim), rows_(rows), cols_(cols), entries_(rows * cols, Poly(dim)) {}

  static PolyMatrix identity(std::size_t dim, std::size_t size) {
    PolyMatrix m(dim, size, size);
    for (std::size_t i = 0; i < size; ++i) m(i, i) = Poly::constant(dim, Rational(1));
    return m;
  }

  static PolyMatrix scalar(const Poly& p) {
    PolyMatrix m(p.dim(), 1, 1);
    m(0, 0) = p;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Poly& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Poly& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  PolyMatrix& operator+=(const PolyMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }

  PolyMatrix& operator-=(const PolyMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }

  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }

  friend PolyMatrix operator*(const Poly& f, PolyMatrix m) {
    for (auto& e : m.entries_) e = f * e;
    return m;
  }

  friend PolyMatrix operator*(const Rational& f, PolyMatrix m) {
    for (auto& e : m.entries_) e *= f;
    return m;
  }

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    detail::require(a.cols_ == b.rows_, "matrix shapes do not compose");
    detail::require(a.dim_ == b.dim_, "matrix dimension mismatch");
    PolyMatrix r(a.dim_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Poly& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend FreeModuleElement operator*(const PolyMatrix& a, const FreeModuleElement& s) {
    detail::require(a.cols_ == s.rank(), "matrix does not act on a section of this rank");
    FreeModuleElement r(a.dim_, a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (!a(i, j).is_zero() && !s[j].is_zero()) r[i] += a(i, j) * s[j];
    return r;
  }

  PolyMatrix transposed() const {
    PolyMatrix t(dim_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  PolyMatrix map(auto&& fn) const {
    PolyMatrix r = *this;
    for (auto& e : r.entries_) e = fn(e);
    return r;
  }

  bool operator==(const PolyMatrix& o) const = default;

  void check_same_shape(const PolyMatrix& o) const {
    detail::require(rows_ == o.rows_ && cols_ == o.cols_ && dim_ == o.dim_, "matrix shape mismatch");
  }

 private:
  std::size_t dim_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Poly> entries_;
};

inline FreeModuleElement partial(std::size_t axis, const FreeModuleElement& s) {
  FreeModuleElement r(s.dim(), s.rank());
  for (std::size_t i = 0; i < s.rank(); ++i) r[i] = partial(axis, s[i]);
  return r;
}

inline FreeModuleElement partial(const MultiIndex& alpha, const FreeModuleElement& s) {
  FreeModuleElement r(s.dim(), s.rank());
  for (std::size_t i = 0; i < s.rank(); ++i) r[i] = partial(alpha, s[i]);
  return r;
}

}  // namespace jetcalc

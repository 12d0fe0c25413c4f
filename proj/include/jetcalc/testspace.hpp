#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/free_module.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/poly.hpp"

namespace jetcalc {

/// Axis-aligned rational box Π [lower_μ, upper_μ] standing in for a compact
/// support.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<std::pair<Rational, Rational>> bounds) : bounds_(std::move(bounds)) {
    detail::require(!bounds_.empty() && bounds_.size() <= kMaxDimension, "box needs between 1 and 8 axes");
    for (const auto& [l, r] : bounds_) detail::require(l < r, "box needs lower < upper on every axis");
  }

  static Box unit(std::size_t dim) { return Box(std::vector<std::pair<Rational, Rational>>(dim, {Rational(0), Rational(1)})); }

  std::size_t dim() const noexcept { return bounds_.size(); }
  const Rational& lower(std::size_t mu) const { return bounds_[mu].first; }
  const Rational& upper(std::size_t mu) const { return bounds_[mu].second; }
  const std::vector<std::pair<Rational, Rational>>& bounds() const noexcept { return bounds_; }

  bool strictly_contains(const std::vector<Rational>& x) const {
    if (x.size() != dim()) return false;
    for (std::size_t mu = 0; mu < dim(); ++mu)
      if (!(lower(mu) < x[mu] && x[mu] < upper(mu))) return false;
    return true;
  }

  /// b(x) = Π_μ (x_μ - l_μ)(r_μ - x_μ).
  Poly bump() const {
    Poly b = Poly::constant(dim(), Rational(1));
    for (std::size_t mu = 0; mu < dim(); ++mu) {
      Poly x = Poly::variable(dim(), mu);
      b *= (x - Poly::constant(dim(), lower(mu))) * (Poly::constant(dim(), upper(mu)) - x);
    }
    return b;
  }

  bool operator==(const Box&) const = default;

 private:
  std::vector<std::pair<Rational, Rational>> bounds_;
};

/// Exact ∫_box p dx.
inline Rational integrate(const Poly& p, const Box& box) {
  detail::require(p.dim() == box.dim(), "integrand dimension does not match box");
  Rational total(0);
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (std::size_t mu = 0; mu < box.dim(); ++mu) {
      unsigned e = m[mu] + 1;
      t *= (rational_pow(box.upper(mu), e) - rational_pow(box.lower(mu), e)) / Rational(e);
    }
    total += t;
  }
  return total;
}

/// Section b^p · q over a box: polynomial components q times the boundary
/// bump to the power p. Every ∂^α with |α| < p of the realized section
/// vanishes on the boundary.
class TestSection {
 public:
  TestSection() = default;
  TestSection(Box box, unsigned p, FreeModuleElement q) : box_(std::move(box)), p_(p), q_(std::move(q)) {
    detail::require(q_.dim() == box_.dim(), "test section dimension does not match box");
  }

  const Box& box() const noexcept { return box_; }
  unsigned bump_exponent() const noexcept { return p_; }
  const FreeModuleElement& polynomial_part() const noexcept { return q_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  std::size_t rank() const noexcept { return q_.rank(); }

  /// b^p q as plain polynomials.
  FreeModuleElement realize() const { return pow(box_.bump(), p_) * q_; }

  bool operator==(const TestSection&) const = default;

 private:
  Box box_;
  unsigned p_ = 1;
  FreeModuleElement q_;
};

namespace detail {

/// ∂^α (b^e g) kept in the form b^{e-|α|} h, |α| ≤ e. Memoised over α.
class BumpDerivatives {
 public:
  BumpDerivatives(const Box& box, unsigned exponent, Poly g)
      : bump_(box.bump()), exponent_(exponent), dim_(box.dim()) {
    for (std::size_t mu = 0; mu < dim_; ++mu) bump_partials_.push_back(partial(mu, bump_));
    cache_.emplace(MultiIndex(dim_), std::move(g));
  }

  /// h with ∂^α(b^e g) = b^{e-|α|} h.
  const Poly& get(const MultiIndex& alpha) {
    if (auto it = cache_.find(alpha); it != cache_.end()) return it->second;
    std::size_t axis = 0;
    while (alpha[axis] == 0) ++axis;
    MultiIndex prev = alpha;
    prev.set(axis, alpha[axis] - 1);
    Poly h = get(prev);
    unsigned e = exponent_ - prev.total();
    // ∂(b^e h) = b^{e-1} (e ∂b h + b ∂h)
    Poly next = Rational(e) * (bump_partials_[axis] * h) + bump_ * partial(axis, h);
    return cache_.emplace(alpha, std::move(next)).first->second;
  }

  const Poly& bump() const noexcept { return bump_; }

 private:
  Poly bump_;
  std::vector<Poly> bump_partials_;
  unsigned exponent_;
  std::size_t dim_;
  std::map<MultiIndex, Poly> cache_;
};

}  // namespace detail

/// Applies Δ to b^e q and returns q' with Δ(b^e q) = b^{e-k} q', k = order(Δ).
/// Requires e ≥ k.
inline FreeModuleElement apply_bumped(const NormalOperator& op, const Box& box, unsigned exponent,
                                      const FreeModuleElement& q) {
  detail::require(op.dim() == box.dim() && q.dim() == box.dim(), "dimension mismatch between operator and box");
  detail::require(q.rank() == op.m_in(), "section rank does not match operator input rank");
  unsigned k = op.order().value_or(0);
  detail::require(exponent >= k, "bump exponent does not cover the operator order");
  std::vector<detail::BumpDerivatives> derivs;
  derivs.reserve(q.rank());
  for (std::size_t j = 0; j < q.rank(); ++j) derivs.emplace_back(box, exponent, q[j]);
  const Poly& b = derivs.empty() ? box.bump() : derivs.front().bump();
  std::vector<Poly> lift(k + 1, Poly::constant(box.dim(), Rational(1)));
  for (unsigned d = 1; d <= k; ++d) lift[d] = lift[d - 1] * b;
  FreeModuleElement out(box.dim(), op.m_out());
  for (const auto& [alpha, c] : op.coefficients()) {
    FreeModuleElement column(box.dim(), op.m_in());
    for (std::size_t j = 0; j < q.rank(); ++j)
      if (!q[j].is_zero()) column[j] = lift[k - alpha.total()] * derivs[j].get(alpha);
    out += c * column;
  }
  return out;
}

inline TestSection mul_scalar(const Poly& f, const TestSection& s) {
  detail::require(f.dim() == s.dim(), "multiplier dimension does not match test section");
  return TestSection(s.box(), s.bump_exponent(), f * s.polynomial_part());
}

/// Δ(s) as a test section with bump exponent p - order(Δ). Requires p ≥ order(Δ).
inline TestSection apply_operator(const NormalOperator& op, const TestSection& s) {
  unsigned k = op.order().value_or(0);
  detail::require(s.bump_exponent() >= k, "bump budget exhausted: exponent is below the operator order");
  return TestSection(s.box(), s.bump_exponent() - k, apply_bumped(op, s.box(), s.bump_exponent(), s.polynomial_part()));
}

inline Rational integrate(const TestSection& s, std::size_t component) {
  detail::require(component < s.rank(), "component index out of range");
  return integrate(pow(s.box().bump(), s.bump_exponent()) * s.polynomial_part()[component], s.box());
}

/// Σ_i σ_i s^i as a rank-1 test section.
inline TestSection contract_dual(const FreeModuleElement& sigma, const TestSection& s) {
  detail::require(sigma.rank() == s.rank(), "covector rank does not match test section");
  detail::require(sigma.dim() == s.dim(), "covector dimension does not match test section");
  Poly acc(s.dim());
  for (std::size_t i = 0; i < s.rank(); ++i) acc += sigma[i] * s.polynomial_part()[i];
  return TestSection(s.box(), s.bump_exponent(), FreeModuleElement({acc}));
}

// ---------------------------------------------------------------------------
// Fiber-linear jet functions and seminorms

/// φ(J^r s) = Σ c^{α,i}(x) ∂^α s^i: a function on jets, linear on fibers.
/// Stored as a 1 × m normal operator.
class FiberJetFunction {
 public:
  FiberJetFunction() = default;
  explicit FiberJetFunction(NormalOperator op) : op_(std::move(op)) {
    detail::require(op_.m_out() == 1, "fiber jet function must be scalar valued");
  }

  /// The function picking the single slot (α, i).
  static FiberJetFunction slot(const MultiIndex& alpha, std::size_t fiber, std::size_t m = 1) {
    NormalOperator op(alpha.dim(), m, 1);
    PolyMatrix c(alpha.dim(), 1, m);
    c(0, fiber) = Poly::constant(alpha.dim(), Rational(1));
    op.add_term(alpha, c);
    return FiberJetFunction(std::move(op));
  }

  const NormalOperator& as_operator() const noexcept { return op_; }
  unsigned order() const { return op_.order().value_or(0); }
  std::size_t fiber_rank() const noexcept { return op_.m_in(); }

  /// The scalar polynomial x ↦ φ(J^r s(x)).
  Poly evaluate(const FreeModuleElement& s) const { return apply(op_, s)[0]; }

 private:
  NormalOperator op_;
};

/// φ_σ with φ_σ(J s) = φ(J(σ·s)): pulls a scalar φ back along contraction with σ.
inline FiberJetFunction pullback(const FiberJetFunction& phi, const FreeModuleElement& sigma) {
  detail::require(phi.fiber_rank() == 1, "contraction pullback needs a scalar jet function");
  PolyMatrix row(sigma.dim(), 1, sigma.rank());
  for (std::size_t i = 0; i < sigma.rank(); ++i) row(0, i) = sigma[i];
  return FiberJetFunction(compose(phi.as_operator(), NormalOperator::multiplication(row)));
}

/// φ_Δ with φ_Δ(J s) = φ(J(Δ s)).
inline FiberJetFunction pullback(const FiberJetFunction& phi, const NormalOperator& op) {
  return FiberJetFunction(compose(phi.as_operator(), op));
}

struct SeminormEstimate {
  double value = 0.0;
  std::vector<double> grid_spacing;  // per axis
  std::size_t resolution = 0;        // grid cells per axis
};

namespace detail {

struct DoubleTerm {
  double coeff;
  std::vector<unsigned> exps;
};

inline std::vector<DoubleTerm> to_double_terms(const Poly& p) {
  std::vector<DoubleTerm> out;
  for (const auto& [m, c] : p.terms()) out.push_back({c.get_d(), m.to_vector()});
  return out;
}

inline double eval_double(const std::vector<DoubleTerm>& terms, const std::vector<double>& x) {
  double acc = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (unsigned e = 0; e < t.exps[i]; ++e) v *= x[i];
    acc += v;
  }
  return acc;
}

}  // namespace detail

/// Lower-bound estimate of sup_box |φ(J s)|: maximum over a uniform grid with
/// `resolution` cells per axis, followed by one local bisection refinement
/// around the grid argmax. The grid is split across `workers` threads along
/// axis 0; the max reduction makes the result independent of the split.
inline SeminormEstimate seminorm(const FiberJetFunction& phi, const TestSection& s, std::size_t resolution = 1024,
                                 std::size_t workers = 1) {
  detail::require(resolution >= 1, "seminorm grid needs at least one cell");
  detail::require(phi.fiber_rank() == s.rank(), "jet function rank does not match test section");
  const std::size_t n = s.dim();
  SeminormEstimate est;
  est.resolution = resolution;
  std::vector<double> lo(n), hi(n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    lo[mu] = s.box().lower(mu).get_d();
    hi[mu] = s.box().upper(mu).get_d();
    est.grid_spacing.push_back((hi[mu] - lo[mu]) / static_cast<double>(resolution));
  }
  Poly f = phi.evaluate(s.realize());
  if (f.is_zero()) return est;
  auto terms = detail::to_double_terms(f);
  auto value_at = [&](const std::vector<double>& x) { return std::abs(detail::eval_double(terms, x)); };

  struct Best {
    double value = -1.0;
    std::vector<std::size_t> index;
  };
  const std::size_t points_per_axis = resolution + 1;
  auto scan = [&](std::size_t first, std::size_t last) {
    Best best;
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    idx[0] = first;
    while (idx[0] < last) {
      for (std::size_t mu = 0; mu < n; ++mu) x[mu] = lo[mu] + est.grid_spacing[mu] * static_cast<double>(idx[mu]);
      double v = value_at(x);
      if (v > best.value) best = {v, idx};
      for (std::size_t mu = n; mu-- > 0;) {
        if (++idx[mu] < points_per_axis || mu == 0) break;
        idx[mu] = 0;
      }
    }
    return best;
  };

  workers = std::clamp<std::size_t>(workers, 1, points_per_axis);
  std::vector<Best> partial_best(workers);
  if (workers == 1) {
    partial_best[0] = scan(0, points_per_axis);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      std::size_t first = points_per_axis * w / workers, last = points_per_axis * (w + 1) / workers;
      pool.emplace_back([&, w, first, last] { partial_best[w] = scan(first, last); });
    }
    for (auto& t : pool) t.join();
  }
  // Earliest index wins ties so the argmax does not depend on the split.
  Best best = partial_best[0];
  for (std::size_t w = 1; w < workers; ++w)
    if (partial_best[w].value > best.value) best = partial_best[w];

  std::vector<double> x(n);
  for (std::size_t mu = 0; mu < n; ++mu) x[mu] = lo[mu] + est.grid_spacing[mu] * static_cast<double>(best.index[mu]);
  double value = best.value;
  std::vector<double> step = est.grid_spacing;
  for (int iter = 0; iter < 60; ++iter) {
    for (std::size_t mu = 0; mu < n; ++mu) {
      step[mu] *= 0.5;
      for (double dir : {-1.0, 1.0}) {
        std::vector<double> y = x;
        y[mu] = std::clamp(x[mu] + dir * step[mu], lo[mu], hi[mu]);
        double v = value_at(y);
        if (v > value) {
          value = v;
          x = y;
        }
      }
    }
  }
  est.value = value;
  return est;
}

}  // namespace jetcalc

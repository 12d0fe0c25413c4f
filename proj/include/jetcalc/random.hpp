#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "jetcalc/free_module.hpp"
#include "jetcalc/multi_index.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/poly.hpp"
#include "jetcalc/testspace.hpp"

namespace jetcalc {

/// Seeded generator of random algebraic objects with small rational
/// coefficients. A fixed seed reproduces the same sequence.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& engine() noexcept { return rng_; }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// Nonzero a/b with |a| ≤ 5, 1 ≤ b ≤ 4.
  Rational nonzero_rational() {
    int a = 0;
    while (a == 0) a = integer(-5, 5);
    Rational q(a, integer(1, 4));
    q.canonicalize();
    return q;
  }

  /// Point with coordinates drawn from a fine rational grid strictly inside the box.
  std::vector<Rational> interior_point(const Box& box) {
    std::vector<Rational> x;
    for (std::size_t mu = 0; mu < box.dim(); ++mu) {
      Rational t(integer(1, 15), 16);
      t.canonicalize();
      x.push_back(box.lower(mu) + t * (box.upper(mu) - box.lower(mu)));
    }
    return x;
  }

  /// Random polynomial of total degree ≤ max_degree; each monomial present
  /// with probability `density`.
  Poly poly(std::size_t dim, unsigned max_degree, double density = 0.5) {
    Poly p(dim);
    for (const auto& m : multi_indices_up_to(dim, max_degree))
      if (coin(density)) p.add_term(m, nonzero_rational());
    return p;
  }

  Poly nonzero_poly(std::size_t dim, unsigned max_degree, double density = 0.5) {
    Poly p(dim);
    while (p.is_zero()) p = poly(dim, max_degree, density);
    return p;
  }

  FreeModuleElement section(std::size_t dim, std::size_t rank, unsigned max_degree, double density = 0.5) {
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < rank; ++i) comps.push_back(poly(dim, max_degree, density));
    return FreeModuleElement(std::move(comps));
  }

  PolyMatrix matrix(std::size_t dim, std::size_t rows, std::size_t cols, unsigned max_degree, double density = 0.5) {
    PolyMatrix m(dim, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = poly(dim, max_degree, density);
    return m;
  }

  /// Operator of exact order `order` (nonzero top-order part) with coefficient
  /// degree ≤ coeff_degree.
  NormalOperator op(std::size_t dim, std::size_t m_in, std::size_t m_out, unsigned order, unsigned coeff_degree) {
    NormalOperator out(dim, m_in, m_out);
    for (const auto& alpha : multi_indices_up_to(dim, order))
      if (coin(0.5)) out.add_term(alpha, matrix(dim, m_out, m_in, coeff_degree, 0.4));
    while (out.order() != order) {
      auto top = multi_indices_of_degree(dim, order);
      const auto& alpha = top[static_cast<std::size_t>(integer(0, static_cast<int>(top.size()) - 1))];
      PolyMatrix c(dim, m_out, m_in);
      c(static_cast<std::size_t>(integer(0, static_cast<int>(m_out) - 1)), static_cast<std::size_t>(integer(0, static_cast<int>(m_in) - 1))) =
          nonzero_poly(dim, coeff_degree, 0.4);
      out.add_term(alpha, c);
    }
    return out;
  }

  std::vector<Poly> vector_field(std::size_t dim, unsigned max_degree) {
    std::vector<Poly> u;
    for (std::size_t mu = 0; mu < dim; ++mu) u.push_back(poly(dim, max_degree));
    return u;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace jetcalc

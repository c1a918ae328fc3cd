#pragma once

// Seeded instance generators shared by the CLI campaigns and the test suite.

#include <cstdint>
#include <random>
#include <vector>

#include "hlat/lattice_forms.hpp"

namespace hlat {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// A small nonzero integer prime to p, possibly divided by a small denominator prime to p.
inline Rational random_unit(Rng& rng, const Prime& p, long bound = 12) {
  for (;;) {
    long num = uniform(rng, -bound, bound);
    long den = uniform(rng, 1, 3);
    if (num == 0 || num % p.value() == 0 || den % p.value() == 0) continue;
    return make_rational(num, den);
  }
}

inline Rational random_with_valuation(Rng& rng, const Prime& p, long v) {
  return random_unit(rng, p) * prime_power(p, v);
}

/// An element of Z_(p): zero with probability ~1/6, otherwise valuation in [0, max_val].
inline Rational random_integral(Rng& rng, const Prime& p, long max_val = 2) {
  if (uniform(rng, 0, 5) == 0) return 0;
  return random_with_valuation(rng, p, uniform(rng, 0, max_val));
}

inline QMatrix random_integral_matrix(Rng& rng, const Prime& p, std::size_t rows, std::size_t cols, long max_val = 2) {
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_integral(rng, p, max_val);
  return m;
}

/// A uniformly-ish random element of GL_n(Z_(p)) with small entries.
inline QMatrix random_gl(Rng& rng, const Prime& p, std::size_t n) {
  for (;;) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = make_rational(uniform(rng, -3, 3), uniform(rng, 1, 2));
    if (is_invertible_over(m, p)) return m;
  }
}

/// Diagonal form with entries unit·p^s, s drawn from {0, ..., max_scale}.
inline GramForm random_diagonal_form(Rng& rng, const Prime& p, std::size_t n, long max_scale) {
  std::vector<Rational> d(n);
  for (auto& x : d) x = random_with_valuation(rng, p, uniform(rng, 0, max_scale));
  return GramForm::diagonal(p, d);
}

/// A nearly unimodular form disguised by a random integral change of basis.
inline GramForm random_nearly_unimodular(Rng& rng, const Prime& p, std::size_t n) {
  return random_diagonal_form(rng, p, n, 1).congruent(random_gl(rng, p, n));
}

/// A unimodular form disguised by a random integral change of basis.
inline GramForm random_unimodular(Rng& rng, const Prime& p, std::size_t n) {
  return random_diagonal_form(rng, p, n, 0).congruent(random_gl(rng, p, n));
}

}  // namespace hlat

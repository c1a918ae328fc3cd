#pragma once

// Smith normal form over the discrete valuation ring Z_(p).
//
// Every nonzero element of Z_(p) is a unit times a power of p, so the pivot is
// simply the entry of least valuation; it divides everything remaining. Unit
// factors are absorbed into the left transform, leaving a diagonal of pure
// prime powers. The same procedure accepts entries in Q (negative exponents).

#include <algorithm>
#include <vector>

#include "hlat/matrix.hpp"

namespace hlat {

/// Elementary-divisor exponents, non-decreasing. kInfinity marks a zero slot.
struct SmithProfile {
  std::vector<long> exponents;

  std::size_t infinite_count() const {
    return static_cast<std::size_t>(std::count(exponents.begin(), exponents.end(), kInfinity));
  }
  /// Sum of the finite exponents: the length of the torsion cokernel when all are >= 0.
  long finite_sum() const {
    long s = 0;
    for (long e : exponents)
      if (e != kInfinity) s += e;
    return s;
  }
  long max_finite() const {
    long m = 0;
    for (long e : exponents)
      if (e != kInfinity) m = std::max(m, e);
    return m;
  }

  friend bool operator==(const SmithProfile&, const SmithProfile&) = default;
};

/// left · M · right = diag(p^{e_0}, p^{e_1}, ...), left and right in GL(Z_(p)).
struct SmithDecomposition {
  SmithProfile profile;
  QMatrix left;
  QMatrix right;
};

inline SmithDecomposition smith_normal_form(const QMatrix& m, const Prime& p) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t slots = std::min(rows, cols);
  QMatrix a = m;
  QMatrix u = QMatrix::identity(rows);
  QMatrix v = QMatrix::identity(cols);
  std::vector<long> exps;
  exps.reserve(slots);

  for (std::size_t t = 0; t < slots; ++t) {
    long best = kInfinity;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        long val = valuation(a(i, j), p);
        if (val < best) {
          best = val;
          bi = i;
          bj = j;
        }
      }
    if (best == kInfinity) {
      exps.resize(slots, kInfinity);
      break;
    }
    a.swap_rows(t, bi);
    u.swap_rows(t, bi);
    a.swap_cols(t, bj);
    v.swap_cols(t, bj);

    Rational scale = prime_power(p, best) / a(t, t);  // a unit
    for (std::size_t j = 0; j < cols; ++j) a(t, j) *= scale;
    for (std::size_t j = 0; j < rows; ++j) u(t, j) *= scale;
    const Rational& pivot = a(t, t);

    for (std::size_t r = t + 1; r < rows; ++r) {
      if (a(r, t) == 0) continue;
      Rational f = a(r, t) / pivot;
      for (std::size_t j = t; j < cols; ++j) a(r, j) -= f * a(t, j);
      for (std::size_t j = 0; j < rows; ++j) u(r, j) -= f * u(t, j);
    }
    for (std::size_t c = t + 1; c < cols; ++c) {
      if (a(t, c) == 0) continue;
      Rational f = a(t, c) / pivot;
      a(t, c) = 0;
      for (std::size_t i = 0; i < cols; ++i) v(i, c) -= f * v(i, t);
    }
    exps.push_back(best);
  }
  return {SmithProfile{std::move(exps)}, std::move(u), std::move(v)};
}

/// The diagonal matrix diag(p^{e_i}) of shape rows × cols described by a profile.
inline QMatrix smith_diagonal(const SmithProfile& profile, std::size_t rows, std::size_t cols, const Prime& p) {
  QMatrix d(rows, cols);
  for (std::size_t i = 0; i < profile.exponents.size(); ++i) {
    if (profile.exponents[i] != kInfinity) d(i, i) = prime_power(p, profile.exponents[i]);
  }
  return d;
}

}  // namespace hlat

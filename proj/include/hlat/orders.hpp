#pragma once

// Tiled orders in M_N(Z_(p)) and their two-sided lattices, all encoded as
// matrices of valuation lower bounds. Ideal products are min-plus products.

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "hlat/matrix.hpp"

namespace hlat {

using Bounds = DenseMatrix<long>;

/// A Z_(p)-lattice {X : ν(X_ij) ≥ bounds(i,j)} in M_N(Q).
struct ValuationIdeal {
  Bounds bounds;

  std::size_t size() const { return bounds.rows(); }
  long operator()(std::size_t i, std::size_t j) const { return bounds(i, j); }

  friend bool operator==(const ValuationIdeal&, const ValuationIdeal&) = default;
};

/// a ⊆ b.
inline bool ideal_contained(const ValuationIdeal& a, const ValuationIdeal& b) {
  if (a.size() != b.size()) throw InputError("ideal size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a(i, j) < b(i, j)) return false;
  return true;
}

/// Min-plus product: (IJ)(i,k) = min_j I(i,j) + J(j,k).
inline ValuationIdeal ideal_multiply(const ValuationIdeal& a, const ValuationIdeal& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw InputError("ideal size mismatch");
  Bounds out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      long m = a(i, 0) + b(0, k);
      for (std::size_t j = 1; j < n; ++j) m = std::min(m, a(i, j) + b(j, k));
      out(i, k) = m;
    }
  return {std::move(out)};
}

/// A tiled order: zero diagonal, non-negative bounds, closed under multiplication.
/// Covers the hereditary block orders and the non-hereditary patterns used by
/// the star-property checker.
class TiledOrder {
 public:
  explicit TiledOrder(Bounds b) : pattern_{std::move(b)} {
    const std::size_t n = pattern_.size();
    if (!pattern_.bounds.is_square() || n == 0) throw InputError("order pattern must be square and nonempty");
    for (std::size_t i = 0; i < n; ++i) {
      if (pattern_(i, i) != 0) throw InputError("order pattern needs a zero diagonal");
      for (std::size_t j = 0; j < n; ++j) {
        if (pattern_(i, j) < 0) throw InputError("order pattern must lie in M_N(R)");
        for (std::size_t k = 0; k < n; ++k)
          if (pattern_(i, k) > pattern_(i, j) + pattern_(j, k)) throw InputError("order pattern is not multiplicatively closed");
      }
    }
  }

  std::size_t size() const { return pattern_.size(); }
  const ValuationIdeal& ideal() const { return pattern_; }

  /// Jacobson radical: the diagonal blocks {i,j : A(i,j) + A(j,i) = 0} gain one power of p.
  ValuationIdeal radical() const {
    Bounds j = pattern_.bounds;
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b)
        if (pattern_(a, b) + pattern_(b, a) == 0) j(a, b) += 1;
    return {std::move(j)};
  }

  /// {X : X·J ⊆ A}, the left inverse of an ideal J.
  ValuationIdeal left_inverse(const ValuationIdeal& j) const {
    const std::size_t n = size();
    Bounds x(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        long m = pattern_(a, 0) - j(b, 0);
        for (std::size_t k = 1; k < n; ++k) m = std::max(m, pattern_(a, k) - j(b, k));
        x(a, b) = m;
      }
    return {std::move(x)};
  }

  /// L is a two-sided lattice: A·L ⊆ L and L·A ⊆ L.
  bool is_two_sided(const ValuationIdeal& l) const {
    return left_closed_column(l, std::nullopt) && right_closed(l);
  }

  /// Hereditary iff J⁻¹J = A.
  bool is_hereditary() const { return ideal_multiply(left_inverse(radical()), radical()) == pattern_; }

  /// Blocks of the block-order shape, or nullopt if the pattern is not O^[n_1..n_r].
  std::optional<std::vector<std::size_t>> block_sizes() const {
    const std::size_t n = size();
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> block(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && pattern_(i - 1, i) + pattern_(i, i - 1) == 0) {
        ++sizes.back();
        block[i] = block[i - 1];
      } else {
        sizes.push_back(1);
        block[i] = sizes.size() - 1;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (pattern_(i, j) != (block[i] < block[j] ? 1 : 0)) return std::nullopt;
    return sizes;
  }

  // Left closure restricted to one column (all columns when col is empty).
  bool left_closed_column(const ValuationIdeal& l, std::optional<std::size_t> col) const {
    const std::size_t n = size();
    for (std::size_t k = col.value_or(0); k < (col ? *col + 1 : n); ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (pattern_(i, j) + l(j, k) < l(i, k)) return false;
    return true;
  }

  bool right_closed(const ValuationIdeal& l) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (l(i, j) + pattern_(j, k) < l(i, k)) return false;
    return true;
  }

 private:
  ValuationIdeal pattern_;
};

/// The hereditary order O^[n_1..n_r]: entries in block (a,b) lie in p·R when a < b.
class BlockOrder {
 public:
  BlockOrder(Prime p, std::vector<std::size_t> sizes) : p_(p), sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw InputError("block order needs at least one block");
    for (auto s : sizes_)
      if (s == 0) throw InputError("block sizes must be positive");
    for (std::size_t b = 0; b < sizes_.size(); ++b)
      for (std::size_t k = 0; k < sizes_[b]; ++k) block_of_.push_back(b);
  }

  const Prime& prime() const { return p_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t dimension() const { return block_of_.size(); }
  std::size_t block_of(std::size_t i) const { return block_of_.at(i); }

  TiledOrder tiled() const {
    const std::size_t n = dimension();
    Bounds b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = block_of_[i] < block_of_[j] ? 1 : 0;
    return TiledOrder(std::move(b));
  }

  /// The r × r basic order with the same lattice combinatorics.
  BlockOrder basic() const { return BlockOrder(p_, std::vector<std::size_t>(sizes_.size(), 1)); }

 private:
  Prime p_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> block_of_;
};

inline bool contains(const ValuationIdeal& ideal, const QMatrix& m, const Prime& p) {
  if (m.rows() != ideal.size() || m.cols() != ideal.size()) throw InputError("matrix size does not match the order");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (valuation(m(i, j), p) < ideal(i, j)) return false;
  return true;
}

inline bool contains(const BlockOrder& o, const QMatrix& m) { return contains(o.tiled().ideal(), m, o.prime()); }

inline ValuationIdeal radical(const BlockOrder& o) { return o.tiled().radical(); }

/// Jⁿ for any integer n; negative powers iterate J⁻¹ = {x : xJ ⊆ A}.
inline ValuationIdeal radical_power(const TiledOrder& a, long n) {
  if (n < 0 && !a.is_hereditary()) throw PreconditionError("negative radical powers need a hereditary order");
  ValuationIdeal step = n >= 0 ? a.radical() : a.left_inverse(a.radical());
  ValuationIdeal out = a.ideal();
  for (long k = 0; k < (n >= 0 ? n : -n); ++k) out = ideal_multiply(out, step);
  return out;
}

inline ValuationIdeal radical_power(const BlockOrder& o, long n) { return radical_power(o.tiled(), n); }

/// {x : Jⁿ x Jⁿ ⊆ Jⁿ} for n ≥ 0; equals J^{-n} on hereditary orders.
inline ValuationIdeal stabilizer_of_power(const TiledOrder& a, long n) {
  if (n < 0) throw InputError("stabilizer_of_power takes n >= 0");
  ValuationIdeal jn = radical_power(a, n);
  const std::size_t size = a.size();
  Bounds x(size, size);
  for (std::size_t j = 0; j < size; ++j)
    for (std::size_t k = 0; k < size; ++k) {
      long m = std::numeric_limits<long>::min();
      for (std::size_t i = 0; i < size; ++i)
        for (std::size_t l = 0; l < size; ++l) m = std::max(m, jn(i, l) - jn(i, j) - jn(k, l));
      x(j, k) = m;
    }
  return {std::move(x)};
}

// ---------------------------------------------------------------------------
// Star property: J^{n+1} L ⊆ A implies Jⁿ L Jⁿ ⊆ A

struct StarCheck {
  bool premise = false;
  bool conclusion = false;
  bool holds() const { return !premise || conclusion; }
};

inline StarCheck check_star_property(const TiledOrder& a, const ValuationIdeal& l, long n = 1) {
  if (l.size() != a.size()) throw InputError("lattice size does not match the order");
  if (!a.is_two_sided(l)) throw InputError("L is not a two-sided lattice over the order");
  if (n < 0) throw InputError("n must be non-negative");
  ValuationIdeal jn = radical_power(a, n);
  ValuationIdeal premise = ideal_multiply(ideal_multiply(jn, a.radical()), l);
  ValuationIdeal conclusion = ideal_multiply(ideal_multiply(jn, l), jn);
  return {ideal_contained(premise, a.ideal()), ideal_contained(conclusion, a.ideal())};
}

struct StarScan {
  long lattices = 0;    // two-sided lattices examined
  long premises = 0;    // of which satisfy the premise
  long violations = 0;  // premise true, conclusion false
  std::optional<ValuationIdeal> first_violation;
};

/// Every two-sided lattice with bounds in [lo, hi], checked at the given n.
inline StarScan scan_star_property(const TiledOrder& a, long n = 1, long lo = -3, long hi = 3) {
  const std::size_t size = a.size();
  // columns satisfying the left condition on their own
  std::vector<std::vector<long>> columns;
  std::vector<long> col(size, lo);
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < size && ok; ++i)
      for (std::size_t j = 0; j < size && ok; ++j)
        if (a.ideal()(i, j) + col[j] < col[i]) ok = false;
    if (ok) columns.push_back(col);
    std::size_t k = 0;
    while (k < size && ++col[k] > hi) col[k++] = lo;
    if (k == size) break;
  }

  StarScan scan;
  std::vector<std::size_t> pick(size, 0);
  ValuationIdeal l{Bounds(size, size)};
  for (;;) {
    for (std::size_t c = 0; c < size; ++c)
      for (std::size_t i = 0; i < size; ++i) l.bounds(i, c) = columns[pick[c]][i];
    if (a.right_closed(l)) {
      ++scan.lattices;
      auto r = check_star_property(a, l, n);
      scan.premises += r.premise;
      if (!r.holds()) {
        ++scan.violations;
        if (!scan.first_violation) scan.first_violation = l;
      }
    }
    std::size_t k = 0;
    while (k < size && ++pick[k] == columns.size()) pick[k++] = 0;
    if (k == size || columns.empty()) break;
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Projective modules and the residue algebra

/// Multiplicity of each simple module V_i in eA, read from the ranks of the
/// diagonal blocks of e mod p.
inline std::vector<std::size_t> decompose_projective(const BlockOrder& o, const QMatrix& e) {
  if (e.rows() != o.dimension() || e.cols() != o.dimension()) throw InputError("idempotent size mismatch");
  if (!contains(o, e)) throw InputError("element is not in the order");
  if (e * e != e) throw InputError("element is not idempotent");
  const long p = o.prime().value();
  std::vector<std::size_t> mult;
  std::size_t start = 0;
  for (std::size_t s : o.sizes()) {
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), start);
    mult.push_back(modp::rank(to_residue(e.submatrix(idx, idx), o.prime()), p));
    start += s;
  }
  return mult;
}

/// dim_k A/Jac(A) from the bound gaps, and Σ n_i² from the block sizes.
inline std::pair<long, long> residue_algebra_dimension(const BlockOrder& o) {
  auto t = o.tiled();
  auto j = t.radical();
  long gaps = 0;
  for (std::size_t a = 0; a < o.dimension(); ++a)
    for (std::size_t b = 0; b < o.dimension(); ++b) gaps += j(a, b) - t.ideal()(a, b);
  long squares = 0;
  for (auto s : o.sizes()) squares += static_cast<long>(s * s);
  return {gaps, squares};
}

// ---------------------------------------------------------------------------
// Unitary groups of the residue algebra of [[R, pR], [R, R]]

/// The two involutions of [[a, πb], [c, d]]:
///   swap_offdiagonal: ↦ [[a, πc], [b, d]];  swap_diagonal: ↦ [[d, πb], [c, a]].
enum class ResidueInvolution { swap_offdiagonal, swap_diagonal };

struct UnitaryCount {
  long identity_component = 0;
  long total = 0;
};

/// Enumerates x = (a, b, c, d) ∈ k⁴ with σ(x)·x = 1 in A/pA. The identity
/// component is {[[1, πb], [−b, 1]]} ≅ G_a for the first involution and the
/// diagonal torus {diag(a, a⁻¹)} ≅ G_m for the second.
inline UnitaryCount residue_unitary_enumerate(long p, ResidueInvolution inv) {
  if (p < 3 || p > 7) throw InputError("residue enumeration supports p in {3, 5, 7}");
  (void)Prime(p);
  struct E {
    long a, b, c, d;
  };
  // [[a, πb], [c, d]]·[[x, πy], [z, w]] ≡ [[ax, π(ay + bw)], [cx + dz, dw]] mod p
  auto mul = [p](E u, E v) {
    return E{(u.a * v.a) % p, (u.a * v.b + u.b * v.d) % p, (u.c * v.a + u.d * v.c) % p, (u.d * v.d) % p};
  };
  auto sigma = [inv](E u) {
    return inv == ResidueInvolution::swap_offdiagonal ? E{u.a, u.c, u.b, u.d} : E{u.d, u.b, u.c, u.a};
  };
  UnitaryCount out;
  for (long a = 0; a < p; ++a)
    for (long b = 0; b < p; ++b)
      for (long c = 0; c < p; ++c)
        for (long d = 0; d < p; ++d) {
          E x{a, b, c, d};
          E y = mul(sigma(x), x);
          if (!(y.a == 1 && y.b == 0 && y.c == 0 && y.d == 1)) continue;
          ++out.total;
          bool identity = inv == ResidueInvolution::swap_offdiagonal ? (a == 1 && d == 1 && (b + c) % p == 0) : true;
          out.identity_component += identity;
        }
  return out;
}

}  // namespace hlat

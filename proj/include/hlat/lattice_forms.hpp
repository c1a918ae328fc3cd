#pragma once

// Quadratic and alternating lattices over Z_(p), p odd.
//
// Two independent routes to integral classification live here:
//  * the Jordan splitting (valuation-pivoted diagonalization) and its invariant
//    list, a complete invariant for p odd;
//  * the nearly unimodular decision: rational class (Lagrange diagonalization
//    over Q plus Hilbert symbols) together with the coradical profile (Smith
//    normal form). For nearly unimodular forms these two agree.

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "hlat/matrix.hpp"
#include "hlat/smith.hpp"
#include "hlat/symbols.hpp"

namespace hlat {

/// A lattice (Z_(p)^n, f) given by its Gram matrix, with gramᵀ = ε·gram.
class GramForm {
 public:
  GramForm(Prime p, int epsilon, QMatrix gram) : p_(p), epsilon_(epsilon), gram_(std::move(gram)) {
    if (epsilon_ != 1 && epsilon_ != -1) throw InputError("epsilon must be +1 or -1");
    if (!gram_.is_square()) throw InputError("Gram matrix must be square");
    QMatrix t = gram_.transpose();
    if (!(epsilon_ == 1 ? t == gram_ : t == -gram_)) {
      throw InputError(epsilon_ == 1 ? "Gram matrix is not symmetric" : "Gram matrix is not alternating");
    }
    if (!hlat::is_integral(gram_, p_)) throw InputError("Gram matrix has entries outside Z_(p)");
  }

  static GramForm diagonal(Prime p, const std::vector<Rational>& entries) {
    return GramForm(p, 1, diagonal_matrix(entries));
  }
  static GramForm diagonal(Prime p, std::initializer_list<long> entries) {
    std::vector<Rational> e;
    for (long x : entries) e.emplace_back(x);
    return diagonal(p, e);
  }

  const Prime& prime() const { return p_; }
  int epsilon() const { return epsilon_; }
  const QMatrix& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows(); }

  Rational determinant() const { return hlat::determinant(gram_); }
  bool is_nonsingular() const { return determinant() != 0; }
  bool is_unimodular() const {
    Rational d = determinant();
    return d != 0 && valuation(d, p_) == 0;
  }

  /// The same form in another basis: Xᵀ·gram·X.
  GramForm congruent(const QMatrix& x) const { return GramForm(p_, epsilon_, x.transpose() * gram_ * x); }

  friend bool operator==(const GramForm&, const GramForm&) = default;

 private:
  Prime p_;
  int epsilon_;
  QMatrix gram_;
};

inline GramForm orthogonal_sum(const GramForm& f, const GramForm& g) {
  if (!(f.prime() == g.prime()) || f.epsilon() != g.epsilon()) throw InputError("orthogonal sum of incompatible forms");
  std::vector<QMatrix> blocks{f.gram(), g.gram()};
  return GramForm(f.prime(), f.epsilon(), block_diagonal(blocks));
}

/// rank-2n form blockdiag([[0,1],[ε,0]], ...).
inline GramForm hyperbolic(const Prime& p, std::size_t n, int epsilon) {
  QMatrix g(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    g(2 * i, 2 * i + 1) = 1;
    g(2 * i + 1, 2 * i) = epsilon;
  }
  return GramForm(p, epsilon, std::move(g));
}

// ---------------------------------------------------------------------------
// Coradical

/// Exponents of coker(gram: P → P*) ≅ ⊕ Z_(p)/p^e, plus the count of free summands.
struct CoradicalProfile {
  std::vector<long> exponents;  // each >= 1, non-decreasing
  std::size_t rank_defect = 0;

  friend bool operator==(const CoradicalProfile&, const CoradicalProfile&) = default;
};

inline CoradicalProfile coradical(const GramForm& f) {
  auto snf = smith_normal_form(f.gram(), f.prime());
  CoradicalProfile c;
  for (long e : snf.profile.exponents) {
    if (e == kInfinity)
      ++c.rank_defect;
    else if (e > 0)
      c.exponents.push_back(e);
  }
  return c;
}

/// Coradical semisimple: killed by p and f_ℓ injective.
inline bool is_nearly_unimodular(const GramForm& f) {
  auto c = coradical(f);
  return c.rank_defect == 0 && std::all_of(c.exponents.begin(), c.exponents.end(), [](long e) { return e <= 1; });
}

// ---------------------------------------------------------------------------
// Diagonalization

/// basisᵀ · gram · basis = diag(entries).
struct Diagonalization {
  QMatrix basis;
  std::vector<Rational> entries;
};

namespace detail {

// Congruence by the elementary column operation col_target += factor * col_source.
inline void add_multiple(QMatrix& a, QMatrix& w, std::size_t target, std::size_t source, const Rational& factor) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) a(k, target) += factor * a(k, source);
  for (std::size_t k = 0; k < n; ++k) a(target, k) += factor * a(source, k);
  for (std::size_t k = 0; k < n; ++k) w(k, target) += factor * w(k, source);
}

inline void swap_basis(QMatrix& a, QMatrix& w, std::size_t i, std::size_t j) {
  a.swap_rows(i, j);
  a.swap_cols(i, j);
  w.swap_cols(i, j);
}

inline Diagonalization finish(QMatrix& a, QMatrix& w) {
  std::vector<Rational> d(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) d[i] = a(i, i);
  return {std::move(w), std::move(d)};
}

}  // namespace detail

/// Diagonalizes a nonsingular symmetric matrix over Z_(p) (entries may lie in Q),
/// pivoting on the entry of least valuation so that the basis change is in GL_n(Z_(p)).
/// Ties: a diagonal entry of least valuation (smallest index) wins; otherwise the
/// lexicographically first off-diagonal pair (i, j) and e_i ← e_i + e_j.
inline Diagonalization diagonalize_by_valuation(const QMatrix& gram, const Prime& p) {
  if (!is_symmetric(gram)) throw InputError("diagonalization requires a symmetric matrix");
  const std::size_t n = gram.rows();
  QMatrix a = gram;
  QMatrix w = QMatrix::identity(n);
  for (std::size_t t = 0; t < n; ++t) {
    long best = kInfinity;
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) best = std::min(best, valuation(a(i, j), p));
    if (best == kInfinity) throw SingularForm("form is singular");

    std::size_t pivot = n;
    for (std::size_t i = t; i < n && pivot == n; ++i)
      if (valuation(a(i, i), p) == best) pivot = i;
    if (pivot == n) {
      for (std::size_t i = t; i < n && pivot == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (valuation(a(i, j), p) == best) {
            detail::add_multiple(a, w, i, j, 1);
            pivot = i;
            break;
          }
    }
    detail::swap_basis(a, w, t, pivot);
    for (std::size_t k = t + 1; k < n; ++k) {
      if (a(k, t) == 0) continue;
      detail::add_multiple(a, w, k, t, -a(k, t) / a(t, t));
    }
  }
  return detail::finish(a, w);
}

/// Lagrange diagonalization over Q, ignoring valuations entirely.
inline Diagonalization diagonalize_rational(const QMatrix& gram) {
  if (!is_symmetric(gram)) throw InputError("diagonalization requires a symmetric matrix");
  const std::size_t n = gram.rows();
  QMatrix a = gram;
  QMatrix w = QMatrix::identity(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t pivot = n;
    for (std::size_t i = t; i < n && pivot == n; ++i)
      if (a(i, i) != 0) pivot = i;
    if (pivot == n) {
      for (std::size_t i = t; i < n && pivot == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a(i, j) != 0) {
            detail::add_multiple(a, w, i, j, 1);
            pivot = i;
            break;
          }
    }
    if (pivot == n) throw SingularForm("form is singular");
    detail::swap_basis(a, w, t, pivot);
    for (std::size_t k = t + 1; k < n; ++k) {
      if (a(k, t) == 0) continue;
      detail::add_multiple(a, w, k, t, -a(k, t) / a(t, t));
    }
  }
  return detail::finish(a, w);
}

// ---------------------------------------------------------------------------
// Rational classification over Q_p

enum class SquareClass { square, nonsquare };

inline SquareClass square_class_of_unit(const Rational& u, const Prime& p) {
  return legendre(u, p) == 1 ? SquareClass::square : SquareClass::nonsquare;
}

inline const char* to_string(SquareClass c) { return c == SquareClass::square ? "square" : "nonsquare"; }

/// Rank, discriminant square class, Hasse invariant.
struct RationalClass {
  std::size_t rank = 0;
  int disc_parity = 0;                       // ν(det) mod 2
  SquareClass disc_unit = SquareClass::square;  // Legendre symbol of the unit part of det
  int hasse = 1;                             // ∏_{i<j} (a_i, a_j)

  friend bool operator==(const RationalClass&, const RationalClass&) = default;
};

/// Q_p-invariants of a nonsingular symmetric matrix with entries in Q.
inline RationalClass rational_class(const QMatrix& gram, const Prime& p) {
  auto diag = diagonalize_rational(gram);
  RationalClass c;
  c.rank = diag.entries.size();
  Rational det = 1;
  for (const auto& a : diag.entries) det *= a;
  if (det == 0) throw SingularForm("form is singular");
  c.disc_parity = static_cast<int>(((valuation(det, p) % 2) + 2) % 2);
  c.disc_unit = square_class_of_unit(unit_part(det, p), p);
  for (std::size_t i = 0; i < diag.entries.size(); ++i)
    for (std::size_t j = i + 1; j < diag.entries.size(); ++j)
      c.hasse *= hilbert_symbol(diag.entries[i], diag.entries[j], p);
  return c;
}

inline RationalClass rational_class(const GramForm& f) {
  if (f.epsilon() != 1) throw InputError("rational_class needs a symmetric form");
  return rational_class(f.gram(), f.prime());
}

// ---------------------------------------------------------------------------
// Jordan splitting

struct JordanConstituent {
  long scale;      // the block is p^scale · form
  GramForm form;   // unimodular, diagonal
};

/// witnessᵀ · gram · witness = blockdiag(p^{s_0} f_0, p^{s_1} f_1, ...), scales strictly increasing.
struct JordanSplit {
  std::vector<JordanConstituent> constituents;
  QMatrix witness;
};

inline JordanSplit jordan_split(const GramForm& f) {
  if (f.epsilon() != 1) throw InputError("jordan_split needs a symmetric form");
  const Prime& p = f.prime();
  auto diag = diagonalize_by_valuation(f.gram(), p);
  const std::size_t n = diag.entries.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return valuation(diag.entries[a], p) < valuation(diag.entries[b], p);
  });

  JordanSplit split{{}, QMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) split.witness(r, c) = diag.basis(r, order[c]);

  std::size_t k = 0;
  while (k < n) {
    long s = valuation(diag.entries[order[k]], p);
    std::vector<Rational> units;
    while (k < n && valuation(diag.entries[order[k]], p) == s) {
      units.push_back(unit_part(diag.entries[order[k]], p));
      ++k;
    }
    split.constituents.push_back({s, GramForm::diagonal(p, units)});
  }
  return split;
}

struct JordanInvariant {
  long scale;
  std::size_t rank;
  SquareClass disc;

  friend bool operator==(const JordanInvariant&, const JordanInvariant&) = default;
};

/// (scale, rank, discriminant class) per Jordan constituent. Complete for p odd.
using JordanSignature = std::vector<JordanInvariant>;

inline JordanSignature jordan_invariant_oracle(const GramForm& f) {
  JordanSignature sig;
  for (const auto& c : jordan_split(f).constituents) {
    sig.push_back({c.scale, c.form.rank(), square_class_of_unit(c.form.determinant(), f.prime())});
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Isometry decisions

namespace detail {
inline void require_comparable(const GramForm& f, const GramForm& g) {
  if (!(f.prime() == g.prime())) throw InputError("forms over different primes");
  if (f.epsilon() != g.epsilon()) throw InputError("forms with different epsilon");
  if (!f.is_nonsingular() || !g.is_nonsingular()) throw SingularForm("isometry test on a singular form");
}
}  // namespace detail

/// Isometry over Q_p. Alternating forms are classified by rank alone.
inline bool isometric_rational(const GramForm& f, const GramForm& g) {
  detail::require_comparable(f, g);
  if (f.epsilon() == -1) return f.rank() == g.rank();
  return rational_class(f) == rational_class(g);
}

/// Integral isometry of nearly unimodular forms: equal rational class and equal coradical.
/// Throws NotNearlyUnimodular when either input has a non-semisimple coradical.
inline bool isometric_integral_nearly_unimodular(const GramForm& f, const GramForm& g) {
  detail::require_comparable(f, g);
  if (!is_nearly_unimodular(f) || !is_nearly_unimodular(g)) {
    throw NotNearlyUnimodular("integral decision needs nearly unimodular forms; refine first or use the Jordan oracle");
  }
  if (f.rank() != g.rank()) return false;
  if (coradical(f) != coradical(g)) return false;
  if (f.epsilon() == -1) return true;
  return rational_class(f) == rational_class(g);
}

// ---------------------------------------------------------------------------
// Finiteness of nearly unimodular lifts

/// Smallest quadratic nonresidue mod p.
inline long smallest_nonsquare(const Prime& p) {
  for (long x = 2;; ++x)
    if (legendre_residue(x, p.value()) == -1) return x;
}

/// Diagonal representative ⟨1,...,1,d0⟩ ⊥ p⟨1,...,1,d1⟩ of a Jordan signature.
inline GramForm representative(const Prime& p, const JordanSignature& sig) {
  std::vector<Rational> entries;
  const long n = smallest_nonsquare(p);
  for (const auto& inv : sig) {
    Rational scale = prime_power(p, inv.scale);
    for (std::size_t i = 0; i < inv.rank; ++i) {
      bool last = i + 1 == inv.rank;
      entries.push_back(scale * ((last && inv.disc == SquareClass::nonsquare) ? Rational(n) : Rational(1)));
    }
  }
  return GramForm::diagonal(p, entries);
}

/// All integral classes of nearly unimodular forms with the given rational class,
/// as Jordan signatures. Enumerates split ranks r0 + r1 = rank and the two
/// discriminant classes per nonempty constituent.
inline std::vector<JordanSignature> count_nearly_unimodular_classes(const Prime& p, const RationalClass& c) {
  std::vector<JordanSignature> out;
  if (c.rank == 0) return out;
  const SquareClass classes[] = {SquareClass::square, SquareClass::nonsquare};
  for (std::size_t r1 = 0; r1 <= c.rank; ++r1) {
    const std::size_t r0 = c.rank - r1;
    for (auto d0 : classes) {
      if (r0 == 0 && d0 == SquareClass::nonsquare) continue;
      for (auto d1 : classes) {
        if (r1 == 0 && d1 == SquareClass::nonsquare) continue;
        JordanSignature sig;
        if (r0 > 0) sig.push_back({0, r0, d0});
        if (r1 > 0) sig.push_back({1, r1, d1});
        GramForm rep = representative(p, sig);
        if (rational_class(rep) != c) continue;
        auto canonical = jordan_invariant_oracle(rep);
        if (std::find(out.begin(), out.end(), canonical) == out.end()) out.push_back(canonical);
      }
    }
  }
  return out;
}

}  // namespace hlat

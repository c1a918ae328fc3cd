#pragma once

// Lattices in a nonsingular rational quadratic space, their duals, and the
// refinement loop that walks a full lattice towards a nearly unimodular one.
//
// A lattice is the Z_(p)-span of the columns of a square basis matrix B. In the
// coordinates where the restricted Gram matrix Bᵀ G B is Smith-diagonal,
// diag(p^{e_i}), the lattice is ⊕ Z_(p) and its dual is ⊕ p^{-e_i} Z_(p),
// so intersections and sums become exponent arithmetic.

#include <algorithm>
#include <vector>

#include "hlat/lattice_forms.hpp"

namespace hlat {

/// A nonsingular symmetric Gram matrix over Q together with a full lattice.
class AmbientForm {
 public:
  AmbientForm(Prime p, QMatrix gram, QMatrix basis) : p_(p), gram_(std::move(gram)), basis_(std::move(basis)) {
    if (!gram_.is_square() || !is_symmetric(gram_)) throw InputError("ambient Gram matrix must be symmetric");
    if (determinant(gram_) == 0) throw SingularForm("ambient form is singular");
    if (basis_.rows() != gram_.rows() || !basis_.is_square() || determinant(basis_) == 0)
      throw InputError("lattice basis must be square and invertible");
  }

  /// The default start: the standard lattice scaled by p^c, c the least making the Gram integral.
  static AmbientForm with_default_lattice(Prime p, QMatrix gram) {
    const std::size_t n = gram.rows();
    long v = gram.is_square() && !gram.is_zero() ? min_valuation(gram, p) : 0;
    long c = v < 0 ? (-v + 1) / 2 : 0;
    return AmbientForm(p, std::move(gram), prime_power(p, c) * QMatrix::identity(n));
  }

  const Prime& prime() const { return p_; }
  const QMatrix& gram() const { return gram_; }
  const QMatrix& basis() const { return basis_; }
  std::size_t rank() const { return gram_.rows(); }

  /// Bᵀ G B.
  QMatrix lattice_gram() const { return basis_.transpose() * gram_ * basis_; }
  AmbientForm with_basis(QMatrix basis) const { return AmbientForm(p_, gram_, std::move(basis)); }

 private:
  Prime p_;
  QMatrix gram_;
  QMatrix basis_;
};

/// outer ⊇ inner as Z_(p)-lattices.
inline bool lattice_contains(const QMatrix& outer, const QMatrix& inner, const Prime& p) {
  return is_integral(inverse(outer) * inner, p);
}

inline bool lattice_equal(const QMatrix& a, const QMatrix& b, const Prime& p) {
  return lattice_contains(a, b, p) && lattice_contains(b, a, p);
}

struct DualPair {
  QMatrix basis;
  QMatrix dual_basis;
  SmithProfile quotient;  // elementary divisors of the restricted Gram matrix
};

/// P̃ = {x : g(P, x) ⊆ Z_(p)}, basis B·(BᵀGB)⁻¹.
inline DualPair dual_lattice(const AmbientForm& a) {
  QMatrix lg = a.lattice_gram();
  return {a.basis(), a.basis() * inverse(lg), smith_normal_form(lg, a.prime()).profile};
}

namespace detail {

// Basis of the lattice B·V·diag(p^{shift(e_i)}), V from the Smith form of BᵀGB.
template <class Shift>
QMatrix smith_rescaled(const AmbientForm& a, Shift shift) {
  auto snf = smith_normal_form(a.lattice_gram(), a.prime());
  QMatrix out = a.basis() * snf.right;
  for (std::size_t j = 0; j < out.cols(); ++j) {
    Rational s = prime_power(a.prime(), shift(snf.profile.exponents[j]));
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, j) *= s;
  }
  return out;
}

}  // namespace detail

/// P ∩ P̃. The restricted Gram matrix of the result is integral.
inline AmbientForm intersect_with_dual(const AmbientForm& a) {
  return a.with_basis(detail::smith_rescaled(a, [](long e) { return std::max(0L, -e); }));
}

/// P + p^n P̃.
inline AmbientForm add_scaled_dual(const AmbientForm& a, long n) {
  return a.with_basis(detail::smith_rescaled(a, [n](long e) { return std::min(0L, n - e); }));
}

struct RefineStep {
  std::vector<long> profile;  // exponents of P̃/P at the start of the step
  long colength = 0;          // length of P̃/P
  long n = 0;                 // P ← P + p^n P̃
  bool chain_holds = true;    // P ⊊ P₁ ⊆ P̃₁ ⊊ P̃
};

struct RefineResult {
  AmbientForm lattice;
  std::vector<RefineStep> trace;
  long initial_colength = 0;
  bool normalized_start = false;  // P ⊄ P̃ initially, replaced by P ∩ P̃
};

/// Normalize to P ∩ P̃, then repeat P ← P + p^n P̃ with n = max exponent − 1
/// until every exponent is at most 1.
inline RefineResult refine_to_nearly_unimodular(const AmbientForm& start) {
  const Prime& p = start.prime();
  AmbientForm cur = start;
  bool normalized = !is_integral(cur.lattice_gram(), p);
  if (normalized) cur = intersect_with_dual(cur);

  std::vector<RefineStep> trace;
  long initial = -1;
  for (;;) {
    auto prof = smith_normal_form(cur.lattice_gram(), p).profile;
    long colength = prof.finite_sum();
    if (initial < 0) initial = colength;
    long emax = prof.max_finite();
    if (emax <= 1) break;
    RefineStep step{prof.exponents, colength, emax - 1, true};
    AmbientForm next = add_scaled_dual(cur, step.n);
    QMatrix dual_cur = dual_lattice(cur).dual_basis;
    QMatrix dual_next = dual_lattice(next).dual_basis;
    step.chain_holds = lattice_contains(next.basis(), cur.basis(), p) && !lattice_equal(next.basis(), cur.basis(), p) &&
                       lattice_contains(dual_next, next.basis(), p) && lattice_contains(dual_cur, dual_next, p) &&
                       !lattice_equal(dual_cur, dual_next, p);
    trace.push_back(std::move(step));
    cur = std::move(next);
  }
  return {std::move(cur), std::move(trace), initial, normalized};
}

}  // namespace hlat

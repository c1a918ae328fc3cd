#pragma once

// Forms on P ↔ τ-symmetric elements of E = End(P), with τ(X) = G⁻¹XᵀG.
// Also the morphism-triple model of non-unimodular forms and the valuation
// descent experiment for anisotropic residue forms.

#include <optional>
#include <string>
#include <vector>

#include "hlat/lattice_forms.hpp"
#include "hlat/orders.hpp"
#include "hlat/random.hpp"

namespace hlat {

/// (P, f, Q): an R-linear map between free modules, as a q_rank × p_rank matrix.
struct MorphismTriple {
  Prime p;
  QMatrix map;

  MorphismTriple(Prime prime, QMatrix m) : p(prime), map(std::move(m)) {
    if (!is_integral(map, p)) throw InputError("morphism must have entries in Z_(p)");
  }
  std::size_t p_rank() const { return map.cols(); }
  std::size_t q_rank() const { return map.rows(); }
};

inline bool morphism_iso_test(const MorphismTriple& a, const MorphismTriple& b) {
  if (!(a.p == b.p)) throw InputError("morphisms over different primes");
  if (a.p_rank() != b.p_rank() || a.q_rank() != b.q_rank()) return false;
  return smith_normal_form(a.map, a.p).profile == smith_normal_form(b.map, b.p).profile;
}

/// φ ∈ GL(P), ψ ∈ GL(Q) with ψ·f = f'·φ.
struct MorphismIsomorphism {
  QMatrix phi;
  QMatrix psi;
};

/// From U f V = S = U' f' V': ψ = U'⁻¹U, φ = V'V⁻¹.
inline std::optional<MorphismIsomorphism> morphism_isomorphism(const MorphismTriple& a, const MorphismTriple& b) {
  if (!morphism_iso_test(a, b)) return std::nullopt;
  auto sa = smith_normal_form(a.map, a.p);
  auto sb = smith_normal_form(b.map, b.p);
  return MorphismIsomorphism{sb.right * inverse(sa.right), inverse(sb.left) * sa.left};
}

// ---------------------------------------------------------------------------

class TransferContext {
 public:
  /// f diagonal with entries unit·p^{0 or 1}, unit entries first.
  explicit TransferContext(const GramForm& f) : f_(f) {
    const std::size_t n = f.rank();
    if (f.epsilon() != 1) throw InputError("transfer context needs a symmetric form");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && f.gram()(i, j) != 0) throw InputError("transfer context needs a diagonal form");
    for (std::size_t i = 0; i < n; ++i) {
      long v = valuation(f.gram()(i, i), f.prime());
      if (v != 0 && v != 1) throw InputError("diagonal entries must have valuation 0 or 1");
      if (!scale_.empty() && v < scale_.back()) throw InputError("diagonal entries must be sorted by valuation");
      scale_.push_back(v);
    }
    n0_ = static_cast<std::size_t>(std::count(scale_.begin(), scale_.end(), 0L));
    std::vector<std::size_t> sizes;
    if (n0_ > 0) sizes.push_back(n0_);
    if (n - n0_ > 0) sizes.push_back(n - n0_);
    order_.emplace(f.prime(), sizes);
    gram_inv_ = inverse(f.gram());
    verify();
  }

  const GramForm& form() const { return f_; }
  const Prime& prime() const { return f_.prime(); }
  std::size_t rank() const { return f_.rank(); }
  const BlockOrder& order() const { return *order_; }
  std::size_t unit_block() const { return n0_; }
  long scale(std::size_t i) const { return scale_[i]; }
  /// Number of distinct scales (block groups).
  std::size_t block_groups() const { return order_->sizes().size(); }

  QMatrix tau(const QMatrix& x) const { return gram_inv_ * x.transpose() * f_.gram(); }
  bool in_order(const QMatrix& x) const { return contains(*order_, x); }
  bool is_unit(const QMatrix& x) const {
    if (!in_order(x)) return false;
    auto inv = try_inverse(x);
    return inv && in_order(*inv);
  }
  bool is_symmetric_unit(const QMatrix& a) const { return tau(a) == a && is_unit(a); }

  /// Each residue constituent of f is anisotropic over F_p.
  bool residue_anisotropic() const {
    const long p = prime().value();
    for (auto [lo, hi] : {std::pair{std::size_t{0}, n0_}, std::pair{n0_, rank()}}) {
      const std::size_t dim = hi - lo;
      if (dim >= 3) return false;
      if (dim == 2) {
        long u1 = residue(unit_part(f_.gram()(lo, lo), prime()), prime());
        long u2 = residue(unit_part(f_.gram()(lo + 1, lo + 1), prime()), prime());
        if (legendre_residue(modp::normalize(-u1 * u2, p), p) == 1) return false;
      }
    }
    return true;
  }

 private:
  void verify() const {
    // τ maps E to E iff E(i,j) + ν(a_i) − ν(a_j) ≥ E(j,i); e_ii is τ-fixed since G is diagonal.
    auto e = order_->tiled().ideal();
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j)
        if (e(i, j) + scale_[i] - scale_[j] < e(j, i)) throw std::logic_error("involution does not preserve the order");
    if (!order_->tiled().block_sizes()) throw std::logic_error("endomorphism order is not a block order");
  }

  GramForm f_;
  std::vector<long> scale_;
  std::size_t n0_ = 0;
  std::optional<BlockOrder> order_;
  QMatrix gram_inv_;
};

/// a = G_f⁻¹ G_h.
inline QMatrix transfer_form(const TransferContext& ctx, const GramForm& h) {
  if (h.rank() != ctx.rank()) throw InputError("rank mismatch");
  if (!(h.prime() == ctx.prime()) || h.epsilon() != 1) throw InputError("incompatible form");
  return inverse(ctx.form().gram()) * h.gram();
}

enum class CongruenceVerdict { integral_witness, rational_only_witness, not_witness };

inline const char* to_string(CongruenceVerdict v) {
  switch (v) {
    case CongruenceVerdict::integral_witness: return "integral";
    case CongruenceVerdict::rational_only_witness: return "rational_only";
    default: return "not_witness";
  }
}

/// Does τ(x)·x = a, and if so is x a unit of E?
inline CongruenceVerdict congruence_verify(const TransferContext& ctx, const QMatrix& a, const QMatrix& x) {
  if (ctx.tau(x) * x != a) return CongruenceVerdict::not_witness;
  return ctx.is_unit(x) ? CongruenceVerdict::integral_witness : CongruenceVerdict::rational_only_witness;
}

/// Cayley transform u = (1 − z)(1 + z)⁻¹ of z = G⁻¹S, S a random skew matrix with
/// entry valuations in [min_valuation, 2]; τ(u)·u = 1 exactly.
inline QMatrix random_unitary(const TransferContext& ctx, Rng& rng, long min_valuation = -3, int max_attempts = 100) {
  const std::size_t n = ctx.rank();
  const QMatrix& g = ctx.form().gram();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    QMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (uniform(rng, 0, 3) == 0) continue;
        Rational x = random_with_valuation(rng, ctx.prime(), uniform(rng, min_valuation, 2));
        s(i, j) = x;
        s(j, i) = -x;
      }
    QMatrix z = inverse(g) * s;
    QMatrix id = QMatrix::identity(n);
    auto inv = try_inverse(id + z);
    if (!inv) continue;
    return (id - z) * *inv;
  }
  throw PreconditionError("random_unitary: 1 + z stayed singular");
}

/// A random unit of E: entries respect the order's bounds and the diagonal
/// residue blocks are invertible.
inline QMatrix random_order_unit(const TransferContext& ctx, Rng& rng) {
  const std::size_t n = ctx.rank();
  auto e = ctx.order().tiled().ideal();
  for (;;) {
    QMatrix x(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (uniform(rng, 0, 4) != 0)
          x(i, j) = random_with_valuation(rng, ctx.prime(), e(i, j) + uniform(rng, 0, 1));
    if (ctx.is_unit(x)) return x;
  }
}

struct DescentReport {
  long trials = 0;
  long integral_witness_count = 0;
  long symmetric_unit_failures = 0;
  long shift_law_violations = 0;      // ν(τ(x)_ji) ≠ ν(x_ij) + ν(a_i) − ν(a_j)
  long column_sum_cancellations = 0;  // cancellation inside a block group of a column sum of τ(x)·x
  bool anisotropic = true;
  std::vector<std::string> log;

  bool clean() const {
    return integral_witness_count == trials && symmetric_unit_failures == 0 && shift_law_violations == 0 &&
           column_sum_cancellations == 0;
  }
};

/// For each trial: x = u·x₀ with u unitary and x₀ ∈ E^×, a = τ(x)·x. Checks that
/// a ∈ Sym^×(E, τ), that x is an integral witness, and the valuation laws for
/// the entries of τ(x) and the column sums of τ(x)·x. With an isotropic residue
/// form the run is a control: violations are counted and logged, not an error.
inline DescentReport descent_experiment(const TransferContext& ctx, long trials, std::uint64_t seed,
                                        bool allow_isotropic = false, long min_valuation = -3) {
  DescentReport rep;
  rep.anisotropic = ctx.residue_anisotropic();
  if (!rep.anisotropic && !allow_isotropic)
    throw PreconditionError("descent experiment needs an anisotropic residue form");
  const Prime& p = ctx.prime();
  const std::size_t n = ctx.rank();
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    ++rep.trials;
    QMatrix x0 = random_order_unit(ctx, rng);
    QMatrix u = random_unitary(ctx, rng, min_valuation);
    QMatrix x = u * x0;
    QMatrix tx = ctx.tau(x);
    QMatrix a = tx * x;
    if (!ctx.is_symmetric_unit(a)) {
      ++rep.symmetric_unit_failures;
      rep.log.push_back("trial " + std::to_string(t) + ": a not in Sym^x(E)");
    }
    auto verdict = congruence_verify(ctx, a, x);
    if (verdict == CongruenceVerdict::integral_witness)
      ++rep.integral_witness_count;
    else
      rep.log.push_back("trial " + std::to_string(t) + ": witness " + to_string(verdict));

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        long lhs = valuation(tx(j, i), p);
        long rhs = add_valuations(valuation(x(i, j), p), ctx.scale(i) - ctx.scale(j));
        if (lhs != rhs) ++rep.shift_law_violations;
      }
    for (std::size_t j = 0; j < n; ++j)
      for (auto [lo, hi] : {std::pair{std::size_t{0}, ctx.unit_block()}, std::pair{ctx.unit_block(), n}}) {
        if (lo == hi) continue;
        Rational sum = 0;
        long least = kInfinity;
        for (std::size_t i = lo; i < hi; ++i) {
          Rational term = tx(j, i) * x(i, j);
          sum += term;
          least = std::min(least, valuation(term, p));
        }
        if (valuation(sum, p) != least) {
          ++rep.column_sum_cancellations;
          rep.log.push_back("trial " + std::to_string(t) + ": column " + std::to_string(j) + " cancels");
        }
      }
  }
  return rep;
}

/// Label of a ∈ Sym^×(E, τ): the Jordan signature of the form G_f·a.
inline JordanSignature congruence_class_label(const TransferContext& ctx, const QMatrix& a) {
  if (!ctx.is_symmetric_unit(a)) throw InputError("element is not a symmetric unit of the order");
  return jordan_invariant_oracle(GramForm(ctx.prime(), 1, ctx.form().gram() * a));
}

}  // namespace hlat

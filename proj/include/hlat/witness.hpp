#pragma once

// Explicit isometries. Decisions are exact; witnesses between integral forms
// live in the completion, so they are delivered modulo p^k.

#include <optional>
#include <vector>

#include "hlat/lattice_forms.hpp"

namespace hlat {

inline constexpr long kDefaultPrecision = 8;

// ---------------------------------------------------------------------------
// Residue field

namespace detail {

struct ModDiagonalization {
  ModMatrix basis;
  std::vector<long> entries;
};

// basisᵀ a basis = diag(entries) over F_p; a symmetric and nonsingular.
inline std::optional<ModDiagonalization> diagonalize_mod(ModMatrix a, long p) {
  const std::size_t n = a.rows();
  ModMatrix w = ModMatrix::identity(n);
  auto add = [&](std::size_t target, std::size_t source, long f) {
    for (std::size_t k = 0; k < n; ++k) a(k, target) = modp::normalize(a(k, target) + modp::mul(f, a(k, source), p), p);
    for (std::size_t k = 0; k < n; ++k) a(target, k) = modp::normalize(a(target, k) + modp::mul(f, a(source, k), p), p);
    for (std::size_t k = 0; k < n; ++k) w(k, target) = modp::normalize(w(k, target) + modp::mul(f, w(k, source), p), p);
  };
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t pivot = n;
    for (std::size_t i = t; i < n && pivot == n; ++i)
      if (a(i, i) != 0) pivot = i;
    if (pivot == n) {
      for (std::size_t i = t; i < n && pivot == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a(i, j) != 0) {
            add(i, j, 1);
            pivot = i;
            break;
          }
    }
    if (pivot == n) return std::nullopt;
    a.swap_rows(t, pivot);
    a.swap_cols(t, pivot);
    w.swap_cols(t, pivot);
    long inv = modp::inverse(a(t, t), p);
    for (std::size_t k = t + 1; k < n; ++k) {
      if (a(k, t) == 0) continue;
      add(k, t, modp::normalize(-modp::mul(a(k, t), inv, p), p));
    }
  }
  std::vector<long> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  return ModDiagonalization{std::move(w), std::move(d)};
}

// Yᵀ diag(a) Y = diag(b) over F_p, by representing b_0 with the first two
// coordinates and recursing on the orthogonal complement.
inline std::optional<ModMatrix> diagonal_isometry_mod(std::vector<long> a, const std::vector<long>& b, long p) {
  const std::size_t n = a.size();
  ModMatrix y(n, n);
  if (n == 0) return y;
  if (n == 1) {
    auto r = sqrt_mod(modp::mul(b[0], modp::inverse(a[0], p), p), p);
    if (!r) return std::nullopt;
    y(0, 0) = *r;
    return y;
  }
  long x0 = -1, y0 = -1;
  for (long x = 0; x < p && x0 < 0; ++x) {
    long rest = modp::normalize(b[0] - modp::mul(a[0], modp::mul(x, x, p), p), p);
    if (auto r = sqrt_mod(modp::mul(rest, modp::inverse(a[1], p), p), p)) {
      x0 = x;
      y0 = *r;
    }
  }
  if (x0 < 0) return std::nullopt;
  // v = x0 e0 + y0 e1 has norm b0; u = (-a1 y0, a0 x0) spans its complement in <e0,e1>.
  std::vector<long> sub_a(a.begin() + 1, a.end());
  sub_a[0] = modp::mul(modp::mul(a[0], a[1], p), b[0], p);
  std::vector<long> sub_b(b.begin() + 1, b.end());
  auto sub = diagonal_isometry_mod(sub_a, sub_b, p);
  if (!sub) return std::nullopt;
  // complement basis C (n × (n-1)): first column u, then e2..e_{n-1}
  ModMatrix c(n, n - 1);
  c(0, 0) = modp::normalize(-modp::mul(a[1], y0, p), p);
  c(1, 0) = modp::mul(a[0], x0, p);
  for (std::size_t k = 2; k < n; ++k) c(k, k - 1) = 1;
  ModMatrix rest = modp::multiply(c, *sub, p);
  y(0, 0) = x0;
  y(1, 0) = y0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) y(i, j) = rest(i, j - 1);
  return y;
}

}  // namespace detail

/// X with Xᵀ·a·X = b over F_p, for nonsingular symmetric a, b; nullopt if none exists
/// (rank or discriminant class differ).
inline std::optional<ModMatrix> residue_isometry(const ModMatrix& a, const ModMatrix& b, long p) {
  if (a.rows() != b.rows()) return std::nullopt;
  auto da = detail::diagonalize_mod(a, p);
  auto db = detail::diagonalize_mod(b, p);
  if (!da || !db) throw SingularForm("residue form is singular");
  auto y = detail::diagonal_isometry_mod(da->entries, db->entries, p);
  if (!y) return std::nullopt;
  auto qinv = modp::inverse(db->basis, p);
  return modp::multiply(modp::multiply(da->basis, *y, p), *qinv, p);
}

// ---------------------------------------------------------------------------
// Hensel lifting

struct LiftResult {
  QMatrix witness;                     // integer entries in [0, p^k)
  std::vector<long> defect_valuations;  // ν(XᵀGX − G') before each step and at the end
  int steps = 0;
};

/// Newton iteration X ← X(I + p^m C), C = −½ G'^{-1} D, where XᵀGX = G' + p^m D.
/// The defect valuation at least doubles per step. Works for ε = ±1.
inline LiftResult lift_isometry(const GramForm& g, const GramForm& target, const QMatrix& seed,
                                long precision = kDefaultPrecision) {
  if (!(g.prime() == target.prime()) || g.epsilon() != target.epsilon()) throw InputError("incompatible forms");
  if (!g.is_unimodular() || !target.is_unimodular()) throw PreconditionError("lift_isometry needs unimodular forms");
  if (seed.rows() != g.rank() || seed.cols() != target.rank()) throw InputError("seed has the wrong shape");
  if (precision < 1) throw InputError("precision must be positive");
  const Prime& p = g.prime();
  const Integer modulus = prime_power(p, precision).get_num();
  const QMatrix target_inv = inverse(target.gram());

  LiftResult out;
  QMatrix x = reduce_mod(seed, modulus);
  auto defect = [&](const QMatrix& m) { return m.transpose() * g.gram() * m - target.gram(); };
  QMatrix d = defect(x);
  long m = min_valuation(d, p);
  if (m < 1) throw PreconditionError("seed is not an isometry mod p");
  out.defect_valuations.push_back(m);
  while (m < precision) {
    QMatrix scaled = prime_power(p, -m) * d;
    QMatrix c = make_rational(-1, 2) * (target_inv * scaled);
    x = reduce_mod(x + prime_power(p, m) * (x * c), modulus);
    d = defect(x);
    long next = min_valuation(d, p);
    ++out.steps;
    out.defect_valuations.push_back(next);
    if (next < std::min(2 * m, precision)) throw std::logic_error("Newton step failed to double precision");
    m = next;
  }
  out.witness = std::move(x);
  return out;
}

// ---------------------------------------------------------------------------
// Integral witnesses between nearly unimodular forms

/// X invertible over Z_(p) with Xᵀ·gram(f)·X ≡ gram(g) mod p^k.
/// Splits both forms into Jordan constituents, builds a residue isometry per
/// scale, lifts it, and conjugates back through the splitting bases.
inline QMatrix build_isometry_witness(const GramForm& f, const GramForm& g, long precision = kDefaultPrecision) {
  if (!isometric_integral_nearly_unimodular(f, g)) throw NotIsometric("forms are not integrally isometric");
  if (f.epsilon() != 1) throw InputError("build_isometry_witness handles symmetric forms; use alternating_congruence");
  const Prime& p = f.prime();
  auto sf = jordan_split(f);
  auto sg = jordan_split(g);
  if (sf.constituents.size() != sg.constituents.size()) throw NotIsometric("Jordan scales differ");

  std::vector<QMatrix> blocks;
  for (std::size_t i = 0; i < sf.constituents.size(); ++i) {
    const auto& cf = sf.constituents[i];
    const auto& cg = sg.constituents[i];
    if (cf.scale != cg.scale || cf.form.rank() != cg.form.rank()) throw NotIsometric("Jordan scales differ");
    auto seed = residue_isometry(to_residue(cf.form.gram(), p), to_residue(cg.form.gram(), p), p.value());
    if (!seed) throw NotIsometric("Jordan constituents differ in discriminant");
    blocks.push_back(lift_isometry(cf.form, cg.form, lift_residue(*seed), precision).witness);
  }
  QMatrix y = block_diagonal(blocks);
  QMatrix x = sf.witness * y * inverse(sg.witness);
  return reduce_mod(x, prime_power(p, precision).get_num());
}

// ---------------------------------------------------------------------------
// Alternating forms

/// basisᵀ·gram·basis = ⊥_i [[0, p^{s_i}], [−p^{s_i}, 0]].
struct SymplecticReduction {
  QMatrix basis;
  std::vector<long> scales;
};

inline SymplecticReduction symplectic_reduction(const GramForm& f) {
  if (f.epsilon() != -1) throw InputError("symplectic reduction needs an alternating form");
  const Prime& p = f.prime();
  const std::size_t n = f.rank();
  if (n % 2 != 0) throw SingularForm("alternating form of odd rank is singular");
  QMatrix a = f.gram();
  QMatrix w = QMatrix::identity(n);
  SymplecticReduction out;
  auto add = [&](std::size_t target, std::size_t source, const Rational& factor) {
    for (std::size_t k = 0; k < n; ++k) a(k, target) += factor * a(k, source);
    for (std::size_t k = 0; k < n; ++k) a(target, k) += factor * a(source, k);
    for (std::size_t k = 0; k < n; ++k) w(k, target) += factor * w(k, source);
  };
  auto swap = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
    w.swap_cols(i, j);
  };
  for (std::size_t t = 0; t < n; t += 2) {
    long best = kInfinity;
    std::size_t bi = t, bj = t + 1;
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        long v = valuation(a(i, j), p);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best == kInfinity) throw SingularForm("alternating form is singular");
    swap(t, bi);
    swap(t + 1, bj == t ? bi : bj);
    // scale the partner so that a(t, t+1) = p^best
    Rational s = prime_power(p, best) / a(t, t + 1);
    for (std::size_t k = 0; k < n; ++k) a(k, t + 1) *= s;
    for (std::size_t k = 0; k < n; ++k) a(t + 1, k) *= s;
    for (std::size_t k = 0; k < n; ++k) w(k, t + 1) *= s;
    const Rational pivot = a(t, t + 1);
    for (std::size_t k = t + 2; k < n; ++k) {
      // z ← z + α e_t + β e_{t+1} with α = −g(z, e_{t+1})/p^s, β = g(z, e_t)/p^s
      Rational alpha = -a(k, t + 1) / pivot;
      Rational beta = a(k, t) / pivot;
      if (alpha != 0) add(k, t, alpha);
      if (beta != 0) add(k, t + 1, beta);
    }
    out.scales.push_back(best);
  }
  out.basis = std::move(w);
  return out;
}

struct AlternatingWitness {
  QMatrix witness;  // witnessᵀ·gram(f)·witness = gram(g) exactly
  bool integral;    // witness ∈ GL_n(Z_(p))
};

/// Congruence between nonsingular alternating forms of equal rank. Always exists
/// over Q; over Z_(p) whenever both forms are unimodular.
inline AlternatingWitness alternating_congruence(const GramForm& f, const GramForm& g) {
  if (f.rank() != g.rank()) throw NotIsometric("alternating forms of different rank");
  const Prime& p = f.prime();
  auto normalize = [&](const SymplecticReduction& r) {
    QMatrix b = r.basis;
    for (std::size_t i = 0; i < r.scales.size(); ++i) {
      Rational s = prime_power(p, -r.scales[i]);
      for (std::size_t k = 0; k < b.rows(); ++k) b(k, 2 * i + 1) *= s;
    }
    return b;  // bᵀ gram b = hyperbolic(n, -1)
  };
  QMatrix bf = normalize(symplectic_reduction(f));
  QMatrix bg = normalize(symplectic_reduction(g));
  QMatrix x = bf * inverse(bg);
  return {x, is_invertible_over(x, p)};
}

}  // namespace hlat

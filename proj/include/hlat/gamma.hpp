#pragma once

// Forms invariant under a finite group Γ with |Γ| prime to p, viewed as
// hermitian forms over the group ring RΓ with involution g ↦ g⁻¹.
//
// Conventions: ρ(g) acts on column vectors and is a homomorphism; the right
// RΓ-module structure is x·g = ρ(g)⁻¹x. Invariance is ρ(g)ᵀ G ρ(g) = G.

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hlat/lattice_forms.hpp"
#include "hlat/random.hpp"
#include "hlat/witness.hpp"

namespace hlat {

class FiniteGroup {
 public:
  /// table[a][b] = index of a·b. Validated: identity, inverses, associativity.
  explicit FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
    const int n = static_cast<int>(table_.size());
    if (n == 0) throw InputError("group table is empty");
    for (const auto& row : table_) {
      if (static_cast<int>(row.size()) != n) throw InputError("group table must be square");
      for (int v : row)
        if (v < 0 || v >= n) throw InputError("group table entry out of range");
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
      bool ok = true;
      for (int g = 0; g < n && ok; ++g) ok = table_[e][g] == g && table_[g][e] == g;
      if (ok) identity_ = e;
    }
    if (identity_ < 0) throw InputError("group table has no identity");
    inverse_.assign(n, -1);
    for (int g = 0; g < n; ++g) {
      for (int h = 0; h < n; ++h)
        if (table_[g][h] == identity_ && table_[h][g] == identity_) inverse_[g] = h;
      if (inverse_[g] < 0) throw InputError("group table: element without inverse");
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) throw InputError("group table is not associative");
  }

  static FiniteGroup cyclic(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup(std::move(t));
  }

  static FiniteGroup klein_four() {
    std::vector<std::vector<int>> t(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) t[a][b] = a ^ b;
    return FiniteGroup(std::move(t));
  }

  /// S₃ as permutations of {0,1,2}, index order: id, (01), (02), (12), (012), (021).
  static FiniteGroup symmetric3() {
    const std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        std::array<int, 3> c{};
        for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];  // a∘b
        t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
      }
    return FiniteGroup(std::move(t));
  }

  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inverse(int g) const { return inverse_[g]; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  bool is_abelian() const {
    for (int a = 0; a < order(); ++a)
      for (int b = 0; b < order(); ++b)
        if (table_[a][b] != table_[b][a]) return false;
    return true;
  }

  int exponent() const {
    int e = 1;
    for (int g = 0; g < order(); ++g) {
      int k = 1, x = g;
      while (x != identity_) {
        x = mul(x, g);
        ++k;
      }
      e = std::lcm(e, k);
    }
    return e;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

// ---------------------------------------------------------------------------
// The group ring

/// Σ a_g g, one coefficient per group element.
struct GroupRingElement {
  std::vector<Rational> coeff;

  static GroupRingElement zero(const FiniteGroup& g) { return {std::vector<Rational>(g.order())}; }
  static GroupRingElement basis(const FiniteGroup& g, int k) {
    auto x = zero(g);
    x.coeff[k] = 1;
    return x;
  }
  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;
};

inline GroupRingElement add(const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement out = a;
  for (std::size_t i = 0; i < out.coeff.size(); ++i) out.coeff[i] += b.coeff[i];
  return out;
}

inline GroupRingElement multiply(const FiniteGroup& g, const GroupRingElement& a, const GroupRingElement& b) {
  auto out = GroupRingElement::zero(g);
  for (int x = 0; x < g.order(); ++x) {
    if (a.coeff[x] == 0) continue;
    for (int y = 0; y < g.order(); ++y)
      if (b.coeff[y] != 0) out.coeff[g.mul(x, y)] += a.coeff[x] * b.coeff[y];
  }
  return out;
}

/// (Σ a_g g)^σ = Σ a_g g⁻¹.
inline GroupRingElement sigma(const FiniteGroup& g, const GroupRingElement& a) {
  auto out = GroupRingElement::zero(g);
  for (int x = 0; x < g.order(); ++x) out.coeff[g.inverse(x)] = a.coeff[x];
  return out;
}

/// 𝒯(Σ a_g g) = a_1.
inline Rational trace_T(const FiniteGroup& g, const GroupRingElement& a) { return a.coeff[g.identity()]; }

// ---------------------------------------------------------------------------

class GammaLattice {
 public:
  GammaLattice(Prime p, FiniteGroup group, std::vector<QMatrix> action, QMatrix gram)
      : p_(p), group_(std::move(group)), action_(std::move(action)), gram_(std::move(gram)) {
    const std::size_t n = gram_.rows();
    if (group_.order() % p_.value() == 0) throw InputError("p divides the group order");
    if (static_cast<int>(action_.size()) != group_.order()) throw InputError("one action matrix per group element");
    if (!is_symmetric(gram_) || !is_integral(gram_, p_)) throw InputError("Gram matrix must be symmetric and integral");
    for (const auto& m : action_) {
      if (m.rows() != n || m.cols() != n) throw InputError("action matrix has the wrong size");
      if (!is_invertible_over(m, p_)) throw InputError("action matrix is not invertible over Z_(p)");
      if (m.transpose() * gram_ * m != gram_) throw InputError("form is not invariant under the action");
    }
    for (int a = 0; a < group_.order(); ++a)
      for (int b = 0; b < group_.order(); ++b)
        if (action_[a] * action_[b] != action_[group_.mul(a, b)]) throw InputError("action is not a homomorphism");
  }

  const Prime& prime() const { return p_; }
  const FiniteGroup& group() const { return group_; }
  const std::vector<QMatrix>& action() const { return action_; }
  const QMatrix& rho(int g) const { return action_[g]; }
  const QMatrix& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows(); }
  GramForm form() const { return GramForm(p_, 1, gram_); }

  /// x·g = ρ(g⁻¹)x.
  QMatrix right_act(const QMatrix& x, int g) const { return action_[group_.inverse(g)] * x; }

  /// ρ' = X⁻¹ρX, G' = XᵀGX: the pullback along X, which is then an equivariant isometry P' → P.
  GammaLattice twisted(const QMatrix& x) const {
    QMatrix xinv = inverse(x);
    std::vector<QMatrix> act;
    for (const auto& m : action_) act.push_back(xinv * m * x);
    return GammaLattice(p_, group_, std::move(act), x.transpose() * gram_ * x);
  }

 private:
  Prime p_;
  FiniteGroup group_;
  std::vector<QMatrix> action_;
  QMatrix gram_;
};

/// ĥ(e_i, e_j) = Σ_g h(e_i·g, e_j) g, as an n × n table of group ring elements.
inline std::vector<std::vector<GroupRingElement>> hermitianize(const GammaLattice& l) {
  const std::size_t n = l.rank();
  const auto& g = l.group();
  std::vector<std::vector<GroupRingElement>> out(n, std::vector<GroupRingElement>(n, GroupRingElement::zero(g)));
  for (int k = 0; k < g.order(); ++k) {
    // column i of ρ(k⁻¹) is e_i·k
    QMatrix moved = l.rho(g.inverse(k)).transpose() * l.gram();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i][j].coeff[k] = moved(i, j);
  }
  return out;
}

/// ĥ(x, y) for arbitrary column vectors, used to test sesquilinearity.
inline GroupRingElement hhat(const GammaLattice& l, const QMatrix& x, const QMatrix& y) {
  const auto& g = l.group();
  auto out = GroupRingElement::zero(g);
  for (int k = 0; k < g.order(); ++k) out.coeff[k] = (l.right_act(x, k).transpose() * l.gram() * y)(0, 0);
  return out;
}

/// x·a = Σ a_g x·g.
inline QMatrix act_by_ring(const GammaLattice& l, const QMatrix& x, const GroupRingElement& a) {
  QMatrix out(x.rows(), x.cols());
  for (int k = 0; k < l.group().order(); ++k)
    if (a.coeff[k] != 0) out = out + a.coeff[k] * l.right_act(x, k);
  return out;
}

// ---------------------------------------------------------------------------
// kΓ-modules

/// A k-vector space with Γ acting on column vectors: action[g] mod p.
struct ResidueModule {
  long p = 0;
  std::size_t dim = 0;
  std::vector<ModMatrix> action;
};

/// P/pP.
inline ResidueModule lattice_mod_p(const GammaLattice& l) {
  ResidueModule m{l.prime().value(), l.rank(), {}};
  for (const auto& r : l.action()) m.action.push_back(to_residue(r, l.prime()));
  return m;
}

struct CoradicalWithAction {
  CoradicalProfile profile;
  ResidueModule module;
};

/// coker(G: P → P*) with the contragredient action ρ(g)^{-T}, in the coordinates
/// where U·G·V is Smith-diagonal; the torsion coordinates carry a k-space.
inline CoradicalWithAction corad_with_action(const GammaLattice& l) {
  GramForm f = l.form();
  if (!is_nearly_unimodular(f)) throw NotNearlyUnimodular("coradical action needs a nearly unimodular form");
  auto snf = smith_normal_form(l.gram(), l.prime());
  std::vector<std::size_t> torsion;
  for (std::size_t i = 0; i < snf.profile.exponents.size(); ++i)
    if (snf.profile.exponents[i] == 1) torsion.push_back(i);
  QMatrix uinv = inverse(snf.left);
  ResidueModule m{l.prime().value(), torsion.size(), {}};
  for (const auto& r : l.action()) {
    QMatrix b = snf.left * inverse(r).transpose() * uinv;
    m.action.push_back(to_residue(b.submatrix(torsion, torsion), l.prime()));
  }
  return {coradical(f), std::move(m)};
}

/// Basis of Hom_kΓ(M, N): matrices X (dim N × dim M) with N_g X = X M_g.
inline std::vector<ModMatrix> kgamma_hom_basis(const ResidueModule& m, const ResidueModule& n) {
  const long p = m.p;
  const std::size_t rows = n.dim, cols = m.dim, vars = rows * cols;
  if (vars == 0) return {};
  ModMatrix sys(m.action.size() * vars, vars);
  for (std::size_t g = 0; g < m.action.size(); ++g)
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        const std::size_t eq = g * vars + i * cols + j;
        // (N_g X)_ij − (X M_g)_ij
        for (std::size_t k = 0; k < rows; ++k) sys(eq, k * cols + j) = modp::normalize(sys(eq, k * cols + j) + n.action[g](i, k), p);
        for (std::size_t k = 0; k < cols; ++k) sys(eq, i * cols + k) = modp::normalize(sys(eq, i * cols + k) - m.action[g](k, j), p);
      }
  std::vector<ModMatrix> out;
  for (const auto& v : modp::nullspace(sys, p)) {
    ModMatrix x(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) x(i, j) = v[i * cols + j];
    out.push_back(std::move(x));
  }
  return out;
}

/// An invertible Γ-equivariant map M → N, if one exists. Random combinations of
/// a Hom basis first, then exhaustive search when p^{dim Hom} ≤ 10⁴.
inline std::optional<ModMatrix> kgamma_isomorphism(const ResidueModule& m, const ResidueModule& n, std::uint64_t seed = 1) {
  if (m.p != n.p || m.action.size() != n.action.size()) throw InputError("modules over different groups or primes");
  if (m.dim != n.dim) return std::nullopt;
  if (m.dim == 0) return ModMatrix(0, 0);
  const long p = m.p;
  auto basis = kgamma_hom_basis(m, n);
  if (basis.empty()) return std::nullopt;
  auto combine = [&](const std::vector<long>& c) {
    ModMatrix x(n.dim, m.dim);
    for (std::size_t b = 0; b < basis.size(); ++b)
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = modp::normalize(x(i, j) + c[b] * basis[b](i, j), p);
    return x;
  };
  Rng rng(seed);
  std::vector<long> c(basis.size());
  for (int attempt = 0; attempt < 200; ++attempt) {
    for (auto& v : c) v = uniform(rng, 0, p - 1);
    ModMatrix x = combine(c);
    if (modp::determinant(x, p) != 0) return x;
  }
  long space = 1;
  for (std::size_t i = 0; i < basis.size() && space <= 10000; ++i) space *= p;
  if (space > 10000) return std::nullopt;
  std::fill(c.begin(), c.end(), 0);
  for (;;) {
    ModMatrix x = combine(c);
    if (modp::determinant(x, p) != 0) return x;
    std::size_t k = 0;
    while (k < c.size() && ++c[k] == p) c[k++] = 0;
    if (k == c.size()) return std::nullopt;
  }
}

inline bool kgamma_iso_test(const ResidueModule& m, const ResidueModule& n) { return kgamma_isomorphism(m, n).has_value(); }

// ---------------------------------------------------------------------------
// Split abelian decision

/// All homomorphisms Γ → F_p^×, as value tables.
inline std::vector<std::vector<long>> characters(const FiniteGroup& g, long p) {
  std::vector<std::vector<long>> out;
  std::vector<long> chi(g.order(), 0);
  const int n = g.order();
  std::function<void(int)> extend = [&](int k) {
    if (k == n) {
      out.push_back(chi);
      return;
    }
    for (long v = 1; v < p; ++v) {
      chi[k] = v;
      bool ok = true;
      for (int a = 0; a <= k && ok; ++a)
        for (int b = 0; b <= k && ok; ++b) {
          int c = g.mul(a, b);
          if (c <= k && chi[c] != modp::mul(chi[a], chi[b], p)) ok = false;
        }
      if (ok) extend(k + 1);
    }
    chi[k] = 0;
  };
  extend(0);
  return out;
}

/// dim of the χ-eigenspace: rank of e_χ = |Γ|⁻¹ Σ χ(g)⁻¹ M_g over F_p.
inline std::size_t eigenspace_dimension(const ResidueModule& m, const std::vector<long>& chi) {
  const long p = m.p;
  ModMatrix e(m.dim, m.dim);
  for (std::size_t g = 0; g < m.action.size(); ++g) {
    long w = modp::inverse(chi[g], p);
    for (std::size_t i = 0; i < m.dim; ++i)
      for (std::size_t j = 0; j < m.dim; ++j) e(i, j) = modp::normalize(e(i, j) + modp::mul(w, m.action[g](i, j), p), p);
  }
  return modp::rank(e, p);
}

inline bool split_abelian_applies(const FiniteGroup& g, const Prime& p) {
  return g.is_abelian() && (p.value() - 1) % g.exponent() == 0;
}

/// Columns of m spanning its column space over Q.
inline QMatrix column_basis(const QMatrix& m) {
  std::vector<std::size_t> keep;
  std::vector<std::size_t> rows(m.rows());
  std::iota(rows.begin(), rows.end(), 0);
  std::size_t r = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    keep.push_back(j);
    std::size_t next = rank(m.submatrix(rows, keep));
    if (next == r)
      keep.pop_back();
    else
      r = next;
  }
  return m.submatrix(rows, keep);
}

struct GammaVerdict {
  bool lattice_modules = false;    // P/pP ≅ P'/pP' as kΓ-modules
  bool coradical_modules = false;  // coradicals isomorphic as kΓ-modules
  bool rational = false;           // self-dual isotypic parts rationally isometric
  bool isometric() const { return lattice_modules && coradical_modules && rational; }
};

/// Integral isometry of nearly unimodular Γ-forms for abelian Γ of exponent dividing p − 1.
inline GammaVerdict gamma_isometric_split_abelian(const GammaLattice& a, const GammaLattice& b) {
  if (!(a.prime() == b.prime()) || !(a.group() == b.group())) throw InputError("Γ-forms over different data");
  if (!split_abelian_applies(a.group(), a.prime())) throw PreconditionError("group is not split abelian at p");
  if (!is_nearly_unimodular(a.form()) || !is_nearly_unimodular(b.form()))
    throw NotNearlyUnimodular("Γ-form decision needs nearly unimodular forms");
  GammaVerdict v;
  if (a.rank() != b.rank()) return v;
  v.lattice_modules = kgamma_iso_test(lattice_mod_p(a), lattice_mod_p(b));
  v.coradical_modules = kgamma_iso_test(corad_with_action(a).module, corad_with_action(b).module);

  const long p = a.prime().value();
  const auto& g = a.group();
  v.rational = v.lattice_modules;
  for (const auto& chi : characters(g, p)) {
    if (!v.rational) break;
    bool real = std::all_of(chi.begin(), chi.end(), [p](long x) { return x == 1 || x == p - 1; });
    if (!real) continue;  // paired with χ⁻¹: hyperbolic, fixed by the rank already compared
    auto isotypic = [&](const GammaLattice& l) {
      QMatrix e(l.rank(), l.rank());
      for (int k = 0; k < g.order(); ++k) e = e + Rational(chi[k] == 1 ? 1 : -1) * l.rho(k);
      QMatrix basis = column_basis(e);
      return basis.transpose() * l.gram() * basis;
    };
    QMatrix fa = isotypic(a), fb = isotypic(b);
    if (fa.rows() != fb.rows()) v.rational = false;
    else if (fa.rows() > 0) v.rational = rational_class(fa, a.prime()) == rational_class(fb, b.prime());
  }
  return v;
}

// ---------------------------------------------------------------------------
// Equivariant Hensel lifting

/// X ← |Γ|⁻¹ Σ_g ρ(g)·X·ρ'(g)⁻¹; fixes every equivariant X.
inline QMatrix equivariant_average(const GammaLattice& target, const GammaLattice& source, const QMatrix& x) {
  QMatrix sum(x.rows(), x.cols());
  for (int k = 0; k < target.group().order(); ++k) sum = sum + target.rho(k) * x * inverse(source.rho(k));
  return make_rational(1, target.group().order()) * sum;
}

inline bool is_equivariant_mod(const GammaLattice& target, const GammaLattice& source, const QMatrix& x, long k) {
  for (int g = 0; g < target.group().order(); ++g)
    if (min_valuation(target.rho(g) * x - x * source.rho(g), target.prime()) < k) return false;
  return true;
}

/// X: P' → P with XᵀGX ≡ G' and ρ(g)X ≡ Xρ'(g) mod p^k, from a seed that is both mod p.
/// Each Newton step is followed by the averaging projection and reduction mod p^k.
inline LiftResult equivariant_lift_isometry(const GammaLattice& l, const GammaLattice& lp, const QMatrix& seed,
                                            long precision = kDefaultPrecision) {
  if (!(l.group() == lp.group()) || !(l.prime() == lp.prime())) throw InputError("Γ-forms over different data");
  GramForm g = l.form(), gp = lp.form();
  if (!g.is_unimodular() || !gp.is_unimodular()) throw PreconditionError("equivariant lift needs unimodular forms");
  if (!is_equivariant_mod(l, lp, seed, 1)) throw PreconditionError("seed is not equivariant mod p");
  const Prime& p = l.prime();
  const Integer modulus = prime_power(p, precision).get_num();
  const QMatrix gp_inv = inverse(gp.gram());
  auto defect = [&](const QMatrix& x) { return x.transpose() * g.gram() * x - gp.gram(); };

  LiftResult out;
  QMatrix x = reduce_mod(equivariant_average(l, lp, seed), modulus);
  long m = min_valuation(defect(x), p);
  if (m < 1) throw PreconditionError("seed is not an isometry mod p");
  out.defect_valuations.push_back(m);
  while (m < precision) {
    QMatrix c = make_rational(-1, 2) * (gp_inv * (prime_power(p, -m) * defect(x)));
    x = reduce_mod(x + prime_power(p, m) * (x * c), modulus);
    x = reduce_mod(equivariant_average(l, lp, x), modulus);
    long next = min_valuation(defect(x), p);
    ++out.steps;
    out.defect_valuations.push_back(next);
    if (next < std::min(2 * m, precision)) throw std::logic_error("equivariant Newton step failed to double precision");
    m = next;
  }
  if (!is_invertible_over(x, p)) throw std::logic_error("lifted witness is not invertible");
  out.witness = std::move(x);
  return out;
}

// ---------------------------------------------------------------------------
// Instance builders

/// Permutation matrices of the regular representation: ρ(g)e_h = e_{gh}.
inline std::vector<QMatrix> regular_representation(const FiniteGroup& g) {
  std::vector<QMatrix> out;
  for (int a = 0; a < g.order(); ++a) {
    QMatrix m(g.order(), g.order());
    for (int h = 0; h < g.order(); ++h) m(g.mul(a, h), h) = 1;
    out.push_back(std::move(m));
  }
  return out;
}

/// Block-diagonal representation from per-block representations.
inline std::vector<QMatrix> direct_sum(const std::vector<std::vector<QMatrix>>& blocks, int order) {
  std::vector<QMatrix> out;
  for (int g = 0; g < order; ++g) {
    std::vector<QMatrix> parts;
    for (const auto& b : blocks) parts.push_back(b[g]);
    out.push_back(block_diagonal(parts));
  }
  return out;
}

/// A nearly unimodular Γ-form: a sum of regular, trivial and (for real
/// characters) one-dimensional blocks with Gram c·I, c = unit or p·unit,
/// disguised by a random change of basis.
inline GammaLattice random_gamma_lattice(Rng& rng, const Prime& p, const FiniteGroup& g, std::size_t blocks,
                                         bool nearly_unimodular = true) {
  std::vector<std::vector<QMatrix>> reps;
  std::vector<QMatrix> grams;
  const auto chars = split_abelian_applies(g, p) ? characters(g, p.value()) : std::vector<std::vector<long>>{};
  for (std::size_t b = 0; b < blocks; ++b) {
    Rational c = random_with_valuation(rng, p, nearly_unimodular ? uniform(rng, 0, 1) : uniform(rng, 0, 2));
    long kind = uniform(rng, 0, 2);
    if (kind == 0) {
      reps.push_back(regular_representation(g));
    } else {
      std::vector<long> chi(g.order(), 1);
      if (kind == 2 && !chars.empty()) {
        const auto& pick = chars[uniform(rng, 0, static_cast<long>(chars.size()) - 1)];
        if (std::all_of(pick.begin(), pick.end(), [&](long x) { return x == 1 || x == p.value() - 1; })) chi = pick;
      }
      std::vector<QMatrix> one;
      for (int k = 0; k < g.order(); ++k) one.push_back(QMatrix{{Rational(chi[k] == 1 ? 1 : -1)}});
      reps.push_back(std::move(one));
    }
    grams.push_back(c * QMatrix::identity(reps.back()[0].rows()));
  }
  GammaLattice base(p, g, direct_sum(reps, g.order()), block_diagonal(grams));
  return base.twisted(random_gl(rng, p, base.rank()));
}

}  // namespace hlat

#pragma once

// Isomorphism of semisimple kΓ-modules by Hom dimensions: M ≅ N iff
// dim Hom(M,M) = dim Hom(M,N) = dim Hom(N,N). Hom dimensions are ranks of the
// averaging projector X ↦ |Γ|⁻¹ Σ N_g X M_g⁻¹ on all k-linear maps.

#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<long>>;

inline long md(long x, long p) { return ((x % p) + p) % p; }

inline long pw(long a, long e, long p) {
  long r = 1;
  a = md(a, p);
  for (; e; e >>= 1, a = a * a % p)
    if (e & 1) r = r * a % p;
  return r;
}

inline std::size_t rank_mod(Mat a, long p) {
  std::size_t r = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && md(a[piv][c], p) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    long inv = pw(a[r][c], p - 2, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || md(a[i][c], p) == 0) continue;
      long f = md(a[i][c] * inv, p);
      for (std::size_t j = c; j < cols; ++j) a[i][j] = md(a[i][j] - f * a[r][j], p);
    }
    ++r;
  }
  return r;
}

// inverse_action[g] must be M_g⁻¹ (the caller passes M_{g⁻¹}).
inline std::size_t hom_dimension(const std::vector<Mat>& m_inverse, const std::vector<Mat>& n_action, long p) {
  const std::size_t dm = m_inverse.empty() ? 0 : m_inverse[0].size();
  const std::size_t dn = n_action.empty() ? 0 : n_action[0].size();
  const std::size_t vars = dm * dn;
  if (vars == 0) return 0;
  const long inv_order = pw(static_cast<long>(n_action.size()), p - 2, p);
  Mat proj(vars, std::vector<long>(vars, 0));
  // column (k,l) of the projector is the image of the unit matrix E_kl
  for (std::size_t g = 0; g < n_action.size(); ++g)
    for (std::size_t i = 0; i < dn; ++i)
      for (std::size_t j = 0; j < dm; ++j)
        for (std::size_t k = 0; k < dn; ++k)
          for (std::size_t l = 0; l < dm; ++l) {
            long term = n_action[g][i][k] * m_inverse[g][l][j] % p;
            proj[i * dm + j][k * dm + l] = md(proj[i * dm + j][k * dm + l] + term * inv_order, p);
          }
  return rank_mod(proj, p);
}

}  // namespace oracle

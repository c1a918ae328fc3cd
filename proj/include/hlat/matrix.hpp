#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hlat/errors.hpp"
#include "hlat/rational.hpp"

namespace hlat {

/// Row-major dense matrix with value semantics.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InputError("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static DenseMatrix diagonal(std::span<const T> entries) {
    DenseMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  DenseMatrix submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
    DenseMatrix s(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
      for (std::size_t j = 0; j < col_idx.size(); ++j) s(i, j) = (*this)(row_idx[i], col_idx[j]);
    return s;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }

  const std::vector<T>& entries() const { return data_; }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    same_shape(a, b);
    DenseMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
  }
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    same_shape(a, b);
    DenseMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
  }
  friend DenseMatrix operator-(const DenseMatrix& a) {
    DenseMatrix c = a;
    for (auto& x : c.data_) x = -x;
    return c;
  }
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product shape mismatch");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend DenseMatrix operator*(const T& s, const DenseMatrix& a) {
    DenseMatrix c = a;
    for (auto& x : c.data_) x *= s;
    return c;
  }

 private:
  static void same_shape(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = DenseMatrix<Rational>;
/// Matrices over F_p; entries kept in [0, p).
using ModMatrix = DenseMatrix<long>;

inline QMatrix block_diagonal(std::span<const QMatrix> blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  QMatrix m(r, c);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
    r0 += b.rows();
    c0 += b.cols();
  }
  return m;
}

inline QMatrix diagonal_matrix(const std::vector<Rational>& entries) {
  return QMatrix::diagonal(std::span<const Rational>(entries));
}

inline bool is_symmetric(const QMatrix& m) { return m.is_square() && m == m.transpose(); }

/// Smallest entry valuation; kInfinity for the zero matrix.
inline long min_valuation(const QMatrix& m, const Prime& p) {
  long v = kInfinity;
  for (const auto& x : m.entries()) v = std::min(v, valuation(x, p));
  return v;
}

inline bool is_integral(const QMatrix& m, const Prime& p) { return min_valuation(m, p) >= 0; }

/// Exact determinant by Gaussian elimination over Q.
inline Rational determinant(QMatrix a) {
  if (!a.is_square()) throw InputError("determinant of non-square matrix");
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      a.swap_rows(piv, c);
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      Rational f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

inline std::optional<QMatrix> try_inverse(const QMatrix& m) {
  if (!m.is_square()) throw InputError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  QMatrix a = m;
  QMatrix inv = QMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) return std::nullopt;
    a.swap_rows(piv, c);
    inv.swap_rows(piv, c);
    Rational s = Rational(1) / a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) *= s;
      inv(c, j) *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Rational f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline QMatrix inverse(const QMatrix& m) {
  auto inv = try_inverse(m);
  if (!inv) throw SingularForm("matrix is singular");
  return *inv;
}

inline std::size_t rank(QMatrix a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(piv, r);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

/// True iff m ∈ GL_n(Z_(p)): integral entries and unit determinant.
inline bool is_invertible_over(const QMatrix& m, const Prime& p) {
  return m.is_square() && is_integral(m, p) && valuation(determinant(m), p) == 0;
}

/// Entrywise representative in [0, modulus) of a p-integral matrix.
inline QMatrix reduce_mod(const QMatrix& m, const Integer& modulus) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(reduce_mod(m(i, j), modulus));
  return r;
}

inline ModMatrix to_residue(const QMatrix& m, const Prime& p) {
  ModMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = residue(m(i, j), p);
  return r;
}

inline QMatrix lift_residue(const ModMatrix& m) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

// ---- linear algebra over F_p ----

namespace modp {

inline long normalize(long x, long p) {
  x %= p;
  return x < 0 ? x + p : x;
}

inline long mul(long a, long b, long p) {
  return static_cast<long>((static_cast<__int128>(a) * b) % p);
}

inline long power(long a, long e, long p) {
  long r = 1 % p;
  a = normalize(a, p);
  while (e > 0) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

inline long inverse(long a, long p) {
  a = normalize(a, p);
  if (a == 0) throw InputError("zero has no inverse mod p");
  return power(a, p - 2, p);
}

inline ModMatrix multiply(const ModMatrix& a, const ModMatrix& b, long p) {
  if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
  ModMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      long aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = (c(i, j) + mul(aik, b(k, j), p)) % p;
    }
  return c;
}

inline ModMatrix subtract(const ModMatrix& a, const ModMatrix& b, long p) {
  ModMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = normalize(a(i, j) - b(i, j), p);
  return c;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> row_reduce(ModMatrix& a, long p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(piv, r);
    long s = inverse(a(r, c), p);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = mul(a(r, j), s, p);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      long f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = normalize(a(i, j) - mul(f, a(r, j), p), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(ModMatrix a, long p) { return row_reduce(a, p).size(); }

inline long determinant(ModMatrix a, long p) {
  if (!a.is_square()) throw InputError("determinant of non-square matrix");
  const std::size_t n = a.rows();
  long det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      a.swap_rows(piv, c);
      det = normalize(-det, p);
    }
    det = mul(det, a(c, c), p);
    long s = inverse(a(c, c), p);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      long f = mul(a(r, c), s, p);
      for (std::size_t j = c; j < n; ++j) a(r, j) = normalize(a(r, j) - mul(f, a(c, j), p), p);
    }
  }
  return det;
}

inline std::optional<ModMatrix> inverse(const ModMatrix& m, long p) {
  const std::size_t n = m.rows();
  ModMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = row_reduce(aug, p);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  ModMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Basis of {x : a·x = 0}, one column per basis vector.
inline std::vector<std::vector<long>> nullspace(ModMatrix a, long p) {
  auto pivots = row_reduce(a, p);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<long>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<long> v(a.cols(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = normalize(-a(r, free), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace modp

}  // namespace hlat

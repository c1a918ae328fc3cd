#pragma once

// Square classes of Q_p for odd p: Legendre and Hilbert symbols, square roots mod p.

#include <optional>

#include "hlat/matrix.hpp"
#include "hlat/rational.hpp"

namespace hlat {

/// +1 iff x is a nonzero square in F_p. Requires x != 0 mod p.
inline int legendre_residue(long x, long p) {
  x = modp::normalize(x, p);
  if (x == 0) throw InputError("Legendre symbol of 0 mod p");
  return modp::power(x, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Legendre symbol of a p-adic unit.
inline int legendre(const Rational& u, const Prime& p) {
  if (u == 0 || valuation(u, p) != 0) throw InputError("legendre requires a unit, got " + u.get_str());
  return legendre_residue(residue(u, p), p.value());
}

inline int legendre(const PLocalNumber& u) { return legendre(u.value(), u.prime()); }

/// Hilbert symbol (a, b)_p for odd p:
///   a = p^α u, b = p^β v  ⇒  (a,b) = (-1)^{αβ(p-1)/2} (u/p)^β (v/p)^α.
inline int hilbert_symbol(const Rational& a, const Rational& b, const Prime& p) {
  if (a == 0 || b == 0) throw InputError("hilbert_symbol requires nonzero arguments");
  const long alpha = valuation(a, p), beta = valuation(b, p);
  const Rational u = unit_part(a, p), v = unit_part(b, p);
  int sign = 1;
  if ((alpha & 1) && (beta & 1) && ((p.value() - 1) / 2) % 2 == 1) sign = -sign;
  if (beta & 1) sign *= legendre(u, p);
  if (alpha & 1) sign *= legendre(v, p);
  return sign;
}

/// A square root of x mod p (Tonelli–Shanks), or nullopt if x is a nonsquare.
inline std::optional<long> sqrt_mod(long x, long p) {
  x = modp::normalize(x, p);
  if (x == 0) return 0;
  if (modp::power(x, (p - 1) / 2, p) != 1) return std::nullopt;
  long q = p - 1, s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  long z = 2;
  while (modp::power(z, (p - 1) / 2, p) == 1) ++z;
  long m = s;
  long c = modp::power(z, q, p);
  long t = modp::power(x, q, p);
  long r = modp::power(x, (q + 1) / 2, p);
  while (t != 1) {
    long i = 0, t2 = t;
    while (t2 != 1) {
      t2 = modp::mul(t2, t2, p);
      ++i;
    }
    long b = c;
    for (long j = 0; j < m - i - 1; ++j) b = modp::mul(b, b, p);
    m = i;
    c = modp::mul(b, b, p);
    t = modp::mul(t, c, p);
    r = modp::mul(r, b, p);
  }
  return r;
}

}  // namespace hlat

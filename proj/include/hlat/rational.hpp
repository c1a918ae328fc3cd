#pragma once

// Exact arithmetic in Q with respect to a fixed odd prime p: valuations,
// unit parts, residues, and the local ring Z_(p) of p-integral rationals.

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "hlat/errors.hpp"

namespace hlat {

using Integer = mpz_class;
using Rational = mpq_class;

/// Valuation of zero. Never produced by arithmetic on finite valuations.
inline constexpr long kInfinity = std::numeric_limits<long>::max();

inline long add_valuations(long a, long b) {
  if (a == kInfinity || b == kInfinity) return kInfinity;
  return a + b;
}

/// An odd prime fixed for a computation. Construction rejects 2 and composites.
class Prime {
 public:
  explicit Prime(long p) : p_(p) {
    if (p == 2) throw InputError("p = 2 is not supported: 2 must be a unit");
    if (p < 3 || p % 2 == 0) throw InputError("not an odd prime: " + std::to_string(p));
    for (long d = 3; d * d <= p; d += 2) {
      if (p % d == 0) throw InputError("not an odd prime: " + std::to_string(p));
    }
  }

  long value() const { return p_; }
  Integer integer() const { return Integer(p_); }

  friend bool operator==(const Prime&, const Prime&) = default;

 private:
  long p_;
};

/// p-adic valuation of a nonzero integer; kInfinity for zero.
inline long valuation(const Integer& n, const Prime& p) {
  if (n == 0) return kInfinity;
  Integer rest;
  Integer prime = p.integer();
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

inline long valuation(const Rational& x, const Prime& p) {
  if (x == 0) return kInfinity;
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

/// p^e for any integer e (negative exponents give 1/p^|e|).
/// num/den in lowest terms.
inline Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational prime_power(const Prime& p, long e) {
  Integer base;
  mpz_pow_ui(base.get_mpz_t(), p.integer().get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
  Rational r = e < 0 ? Rational(Integer(1), base) : Rational(base);
  r.canonicalize();
  return r;
}

/// x / p^ν(x); requires x != 0.
inline Rational unit_part(const Rational& x, const Prime& p) {
  return x / prime_power(p, valuation(x, p));
}

inline bool is_integral(const Rational& x, const Prime& p) { return valuation(x, p) >= 0; }

/// x mod modulus for p-integral x, as the representative in [0, modulus).
/// The modulus must be a power of p.
inline Integer reduce_mod(const Rational& x, const Integer& modulus) {
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), modulus.get_mpz_t()) == 0) {
    throw InputError("rational " + x.get_str() + " is not integral at the modulus");
  }
  Integer r = (x.get_num() * inv) % modulus;
  if (r < 0) r += modulus;
  return r;
}

/// Image of a p-integral rational in the residue field F_p, in [0, p).
inline long residue(const Rational& x, const Prime& p) {
  return reduce_mod(x, p.integer()).get_si();
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

/// Parses "num", "num/den", with optional sign. Denominator must be nonzero.
inline Rational parse_rational(const std::string& text) {
  auto valid = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-' || den[0] == '+') {
    throw InputError("malformed rational: '" + text + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) throw InputError("zero denominator: '" + text + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// An element of the local ring Z_(p): a rational in lowest terms whose
/// denominator is prime to p.
class PLocalNumber {
 public:
  PLocalNumber(Rational value, Prime p) : value_(std::move(value)), p_(p) {
    value_.canonicalize();
    if (!is_integral(value_, p_)) {
      throw InputError(value_.get_str() + " is not p-integral for p = " + std::to_string(p_.value()));
    }
  }

  const Rational& value() const { return value_; }
  const Prime& prime() const { return p_; }
  long valuation() const { return hlat::valuation(value_, p_); }
  bool is_unit() const { return valuation() == 0; }
  long residue() const { return hlat::residue(value_, p_); }

  PLocalNumber inverse() const {
    if (!is_unit()) throw InputError("not a unit of Z_(p): " + value_.get_str());
    return PLocalNumber(Rational(1) / value_, p_);
  }

  friend PLocalNumber operator+(const PLocalNumber& a, const PLocalNumber& b) {
    return PLocalNumber(Rational(a.value_ + b.value_), checked(a, b));
  }
  friend PLocalNumber operator-(const PLocalNumber& a, const PLocalNumber& b) {
    return PLocalNumber(Rational(a.value_ - b.value_), checked(a, b));
  }
  friend PLocalNumber operator*(const PLocalNumber& a, const PLocalNumber& b) {
    return PLocalNumber(Rational(a.value_ * b.value_), checked(a, b));
  }
  friend bool operator==(const PLocalNumber& a, const PLocalNumber& b) {
    return a.p_ == b.p_ && a.value_ == b.value_;
  }

 private:
  static Prime checked(const PLocalNumber& a, const PLocalNumber& b) {
    if (!(a.p_ == b.p_)) throw InputError("mixed primes in p-local arithmetic");
    return a.p_;
  }

  Rational value_;
  Prime p_;
};

}  // namespace hlat

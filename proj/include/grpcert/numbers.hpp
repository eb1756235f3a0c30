#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "grpcert/errors.hpp"

namespace grpcert {

using Int = std::int64_t;
using Int128 = __int128;

// Checked narrowing: everything in the library is exact, so a silent wrap
// would corrupt results. Intermediate products are taken in 128 bits and
// narrowed through here.
inline Int narrow(Int128 v) {
  if (v > Int128(INT64_MAX) || v < Int128(INT64_MIN))
    throw OverflowError("exact integer arithmetic overflowed 64 bits");
  return static_cast<Int>(v);
}

inline Int checked_add(Int a, Int b) { return narrow(Int128(a) + Int128(b)); }
inline Int checked_sub(Int a, Int b) { return narrow(Int128(a) - Int128(b)); }
inline Int checked_mul(Int a, Int b) { return narrow(Int128(a) * Int128(b)); }

// Arbitrary-sign gcd, always non-negative.
inline Int gcd_int(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  return std::gcd(a, b);
}

inline Int lcm_int(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd_int(a, b), b);
}

// Exact rational number over 64-bit integers, always reduced, denominator
// positive. Overflow throws instead of wrapping.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(Int n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(Int n, Int d) : num_(n), den_(d) { normalize(); }

  Int num() const { return num_; }
  Int den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_nonneg_integer() const { return den_ == 1 && num_ >= 0; }

  Rational operator-() const { return Rational(-num_, den_, tag{}); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    Int g = gcd_int(a.den_, b.den_);
    Int da = a.den_ / g;
    Int db = b.den_ / g;
    Int128 n = Int128(a.num_) * db + Int128(b.num_) * da;
    Int128 d = Int128(a.den_) * db;
    return make(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + (-b);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Int g1 = gcd_int(a.num_, b.den_);
    Int g2 = gcd_int(b.num_, a.den_);
    return make(Int128(a.num_ / g1) * (b.num_ / g2),
                Int128(a.den_ / g2) * (b.den_ / g1));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return Int128(a.num_) * b.den_ < Int128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  struct tag {};
  Rational(Int n, Int d, tag) : num_(n), den_(d) {}  // already normalized

  static Rational make(Int128 n, Int128 d) {
    if (d == 0) throw Error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    Int128 a = n < 0 ? -n : n;
    Int128 b = d;
    while (b != 0) {
      Int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    return Rational(narrow(n), narrow(d), tag{});
  }

  void normalize() { *this = make(num_, den_); }

  Int num_;
  Int den_;
};

}  // namespace grpcert

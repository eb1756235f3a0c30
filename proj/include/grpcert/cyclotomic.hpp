#pragma once

#include <string>
#include <vector>

#include "grpcert/numbers.hpp"

namespace grpcert {

// An exact element of the N-th cyclotomic field, stored as coordinates over
// the power basis 1, z, ..., z^(phi(N)-1), reduced modulo the N-th cyclotomic
// polynomial. All arithmetic is exact; mixed conductors lift to the lcm.
class Cyclotomic {
 public:
  Cyclotomic() : conductor_(1), coeffs_(1) {}
  explicit Cyclotomic(const Rational& r) : conductor_(1), coeffs_{r} {}
  Cyclotomic(Int n) : conductor_(1), coeffs_{Rational(n)} {}  // NOLINT

  // z_N^k
  static Cyclotomic zeta(int conductor, long power = 1);
  static Cyclotomic zero() { return Cyclotomic(); }
  static Cyclotomic one() { return Cyclotomic(Rational(1)); }

  int conductor() const { return conductor_; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;
  // Value as a rational; throws unless is_rational().
  Rational rational_value() const;
  bool is_integer() const {
    return is_rational() && rational_value().is_integer();
  }

  // Complex conjugation, i.e. the Galois map z -> z^(N-1).
  Cyclotomic conj() const { return galois(conductor_ - 1); }
  // The Galois map z -> z^a for gcd(a, N) = 1.
  Cyclotomic galois(long a) const;

  // Rewrites into the field of the given conductor (a multiple of ours).
  Cyclotomic lifted_to(int conductor) const;

  Cyclotomic operator-() const;
  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b);
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) {
    return !(a == b);
  }
  // Total order used only to make sorted outputs reproducible.
  friend bool operator<(const Cyclotomic& a, const Cyclotomic& b);

  std::string str() const;

 private:
  // Drops to the smallest representation currently reachable: conductor 1
  // when the value is rational. (Full conductor minimization is not needed;
  // equality always compares in a common field.)
  void shrink();

  int conductor_;
  std::vector<Rational> coeffs_;  // size phi(conductor_)
};

inline Cyclotomic operator*(const Rational& r, const Cyclotomic& c) {
  return Cyclotomic(r) * c;
}
inline Cyclotomic operator*(const Cyclotomic& c, const Rational& r) {
  return c * Cyclotomic(r);
}

// Euler phi; exposed because callers size cyclotomic data with it.
int euler_phi(int n);

// Coefficients of the N-th cyclotomic polynomial (degree phi(N), monic).
const std::vector<Int>& cyclotomic_polynomial(int n);

}  // namespace grpcert

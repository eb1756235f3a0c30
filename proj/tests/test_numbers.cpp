#include <random>

#include "doctest.h"
#include "grpcert/cyclotomic.hpp"
#include "grpcert/intmat.hpp"
#include "grpcert/numbers.hpp"

using namespace grpcert;

TEST_CASE("rational arithmetic is exact and normalized") {
  Rational a(2, 4);
  CHECK(a == Rational(1, 2));
  CHECK((a + a) == Rational(1));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(-3, 6)).num() == -1);
  CHECK((Rational(-3, 6)).den() == 2);
  CHECK((Rational(7, 3) * Rational(3, 7)) == Rational(1));
  CHECK((Rational(1) / Rational(1, 5)) == Rational(5));
  CHECK(Rational(5).is_nonneg_integer());
  CHECK_FALSE(Rational(5, 3).is_integer());
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("rational overflow throws instead of wrapping") {
  Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, OverflowError);
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<Int>{-1, 1});
  CHECK(cyclotomic_polynomial(3) == std::vector<Int>{1, 1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<Int>{1, 0, 1});
  CHECK(cyclotomic_polynomial(9) == std::vector<Int>{1, 0, 0, 1, 0, 0, 1});
  CHECK(euler_phi(9) == 6);
  CHECK(euler_phi(15) == 8);
}

TEST_CASE("zeta relations") {
  Cyclotomic z = Cyclotomic::zeta(3);
  // 1 + z + z^2 = 0
  CHECK((Cyclotomic::one() + z + z * z).is_zero());
  // z^3 = 1
  CHECK(z * z * z == Cyclotomic::one());
  // conjugation is z -> z^2 for conductor 3
  CHECK(z.conj() == Cyclotomic::zeta(3, 2));
  // norm z * conj(z) = 1
  CHECK(z * z.conj() == Cyclotomic::one());

  Cyclotomic z9 = Cyclotomic::zeta(9);
  CHECK(z9 * z9 * z9 == Cyclotomic::zeta(3).lifted_to(9));
  Cyclotomic s;
  for (int k = 0; k < 9; ++k) s += Cyclotomic::zeta(9, k);
  CHECK(s.is_zero());
}

TEST_CASE("mixed conductor arithmetic lands in the lcm field") {
  Cyclotomic a = Cyclotomic::zeta(3);
  Cyclotomic b = Cyclotomic::zeta(5);
  Cyclotomic p = a * b;
  CHECK(p == Cyclotomic::zeta(15, 5 + 3));
  CHECK((p / b) == a.lifted_to(15));
}

TEST_CASE("division by nonzero cyclotomic") {
  Cyclotomic a = Cyclotomic::one() + Cyclotomic::zeta(5);
  Cyclotomic b = Cyclotomic(Rational(2)) - Cyclotomic::zeta(5, 3);
  Cyclotomic q = a / b;
  CHECK(q * b == a);
  CHECK_THROWS(a / Cyclotomic::zero());
}

TEST_CASE("rationality detection") {
  Cyclotomic z = Cyclotomic::zeta(3);
  Cyclotomic v = z + z.conj();  // = -1
  CHECK(v.is_rational());
  CHECK(v.rational_value() == Rational(-1));
  CHECK(v.is_integer());
  CHECK_FALSE(z.is_rational());
}

TEST_CASE("hermite form and kernels") {
  IMat a(2, 3);
  a << 2, 4, 4, -6, 6, 12;
  HermiteResult h = hermite(a);
  CHECK(h.rank == 2);
  CHECK(a * h.u == (IMat(2, 3) << h.h, IMat::Zero(2, 1)).finished());

  IMat k = kernel_basis(a);
  CHECK(k.cols() == 1);
  CHECK((a * k).isZero());

  // Kernel basis spans the full integer kernel: gcd of entries of the single
  // generator must not be shareable out (pure lattice).
  Int g = gcd_int(gcd_int(k(0, 0), k(1, 0)), k(2, 0));
  CHECK(g == 1);
}

TEST_CASE("smith normal form with transforms") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dist(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    int m = 1 + static_cast<int>(rng() % 5);
    int n = 1 + static_cast<int>(rng() % 5);
    IMat a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
    SmithResult s = smith(a);
    CHECK(s.u * a * s.v == s.d);
    CHECK(s.u * s.u_inv == IMat::Identity(m, m));
    CHECK(s.v * s.v_inv == IMat::Identity(n, n));
    for (int i = 0; i + 1 < s.rank; ++i) {
      CHECK(s.d(i, i) > 0);
      CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
    }
    for (int i = 0; i < std::min(m, n); ++i)
      for (int j = 0; j < std::min(m, n); ++j)
        if (i != j) CHECK(s.d(i, j) == 0);
  }
}

TEST_CASE("solve_exact finds integral solutions and rejects others") {
  IMat a(3, 2);
  a << 1, 0, 0, 2, 1, 1;
  IMat b(3, 1);
  b << 3, 4, 5;
  IMat x = solve_exact(a, b);
  CHECK(a * x == b);
  IMat bad(3, 1);
  bad << 3, 3, 5;  // needs x2 = 3/2
  CHECK_THROWS(solve_exact(a, bad));
}

TEST_CASE("pure completion extends a pure lattice to a unimodular basis") {
  IMat l(3, 1);
  l << 1, 1, 1;
  CompletionResult c = pure_completion(l);
  CHECK(c.w * c.w_inv == IMat::Identity(3, 3));
  // First column spans the same lattice.
  IMat first = c.w.leftCols(1);
  CHECK_NOTHROW(solve_exact(first, l));
  CHECK_NOTHROW(solve_exact(l, first));

  IMat notpure(2, 1);
  notpure << 2, 0;
  CHECK_THROWS(pure_completion(notpure));
}

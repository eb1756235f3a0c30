#include "doctest.h"
#include "grpcert/group.hpp"

using namespace grpcert;

TEST_CASE("trivial group from a 1x1 table") {
  GroupPtr g = FiniteGroup::from_cayley_table({{0}});
  CHECK(g->order() == 1);
  CHECK(g->exponent() == 1);
}

TEST_CASE("Z/3 from its addition table") {
  GroupPtr g = FiniteGroup::from_cayley_table(
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  CHECK(g->order() == 3);
  CHECK(g->exponent() == 3);
  CHECK(g->element_order(1) == 3);
  CHECK(g->inv(1) == 2);
}

TEST_CASE("identity gets relocated to index 0") {
  // Z/2 written with the identity at index 1.
  GroupPtr g = FiniteGroup::from_cayley_table({{1, 0}, {0, 1}});
  CHECK(g->mul(0, 0) == 0);
  CHECK(g->mul(1, 1) == 0);
}

TEST_CASE("non-associative table is rejected with a witness") {
  // Z/4 addition with two entries of row 1 swapped: identity and inverses
  // survive, associativity does not ((1*1)*2 = 1 but 1*(1*2) = 2).
  std::vector<std::vector<int>> t = {
      {0, 1, 2, 3}, {1, 3, 2, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
  try {
    FiniteGroup::from_cayley_table(t);
    FAIL("expected NotAGroupError");
  } catch (const NotAGroupError& e) {
    int a = static_cast<int>(e.witness[0]);
    int b = static_cast<int>(e.witness[1]);
    int c = static_cast<int>(e.witness[2]);
    CHECK(t[t[a][b]][c] != t[a][t[b][c]]);
  }
}

TEST_CASE("permutation closure") {
  GroupPtr c3 = FiniteGroup::from_permutations(3, {{1, 2, 0}});
  CHECK(c3->order() == 3);

  GroupPtr s3 = FiniteGroup::from_permutations(3, {{1, 0, 2}, {1, 2, 0}});
  CHECK(s3->order() == 6);
  CHECK_FALSE(s3->is_abelian());

  CHECK_THROWS_AS(FiniteGroup::from_permutations(5, {{1, 2, 3, 4, 0}}, "", 4),
                  TooLargeError);
}

TEST_CASE("Heisenberg group mod 3 from affine permutations of Z/3 x Z/3") {
  // x: (a,b) -> (a+1, b); y: (a,b) -> (a, b+a) generate the group of order
  // 27 and exponent 3 acting on 9 points.
  auto idx = [](int a, int b) { return 3 * a + b; };
  std::vector<int> x(9), y(9);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      x[idx(a, b)] = idx((a + 1) % 3, b);
      y[idx(a, b)] = idx(a, (b + a) % 3);
    }
  GroupPtr g = FiniteGroup::from_permutations(9, {x, y});
  CHECK(g->order() == 27);
  CHECK(g->exponent() == 3);
  CHECK_FALSE(g->is_abelian());
}

TEST_CASE("catalog: extraspecial p^3 of exponent p") {
  GroupPtr e = extraspecial_group(3, 3, 3);
  CHECK(e->order() == 27);
  CHECK(e->exponent() == 3);
  CHECK(e->center_set().count() == 3);
  CHECK_FALSE(e->is_abelian());
  CHECK_THROWS_AS(extraspecial_group(3, 4, 3), BadSpecError);
  CHECK_THROWS_AS(extraspecial_group(3, 3, 9), BadSpecError);
  CHECK_THROWS_AS(extraspecial_group(2, 3, 2), BadSpecError);
}

TEST_CASE("catalog: extraspecial p^5") {
  GroupPtr e = extraspecial_group(3, 5, 3);
  CHECK(e->order() == 243);
  CHECK(e->exponent() == 3);
  CHECK(e->center_set().count() == 3);
}

TEST_CASE("catalog: modular group M(3,3)") {
  GroupPtr m = modular_group(3, 3);
  CHECK(m->order() == 27);
  CHECK(m->exponent() == 9);
  CHECK_FALSE(m->is_abelian());
  // Has a cyclic subgroup of order 9.
  bool has9 = false;
  for (int x = 0; x < 27; ++x)
    if (m->element_order(x) == 9) has9 = true;
  CHECK(has9);
  CHECK_THROWS_AS(modular_group(3, 2), BadSpecError);
}

TEST_CASE("catalog: abelian groups and products") {
  GroupPtr a = abelian_group({3, 3});
  CHECK(a->order() == 9);
  CHECK(a->exponent() == 3);
  CHECK(a->is_abelian());

  GroupPtr b = direct_product(cyclic_group(3), cyclic_group(9));
  CHECK(b->order() == 27);
  CHECK(b->exponent() == 9);
  CHECK(b->is_abelian());
}

TEST_CASE("central product of two Heisenberg groups is extraspecial 3^5") {
  GroupPtr e3 = extraspecial_group(3, 3, 3);
  GroupPtr g = central_product(e3, e3);
  CHECK(g->order() == 243);
  CHECK(g->center_set().count() == 3);
  CHECK(g->exponent() == 3);
}

TEST_CASE("conjugacy classes") {
  GroupPtr c3 = cyclic_group(3);
  CHECK(c3->classes().num_classes() == 3);

  GroupPtr e = extraspecial_group(3, 3, 3);
  const ClassPartition& cls = e->classes();
  CHECK(cls.num_classes() == 11);
  int singletons = 0, threes = 0;
  for (int s : cls.class_sizes) {
    if (s == 1) ++singletons;
    if (s == 3) ++threes;
  }
  CHECK(singletons == 3);
  CHECK(threes == 8);

  GroupPtr m = modular_group(3, 3);
  CHECK(m->classes().num_classes() == 11);

  // Class sizes partition the group and divide its order.
  for (GroupPtr g : {e, m}) {
    int total = 0;
    for (int s : g->classes().class_sizes) {
      total += s;
      CHECK(g->order() % s == 0);
    }
    CHECK(total == g->order());
  }
}

TEST_CASE("abelian basis") {
  GroupPtr g = abelian_group({9, 3});
  AbelianBasis b = abelian_basis(*g);
  REQUIRE(b.orders.size() == 2);
  CHECK(b.orders[0] == 9);
  CHECK(b.orders[1] == 3);
  CHECK(g->element_order(b.generators[0]) == 9);
  CHECK(g->element_order(b.generators[1]) == 3);
  // Independence: the only tuple hitting the identity is (0, 0).
  int hits = 0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 3; ++j)
      if (g->mul(g->power(b.generators[0], i),
                 g->power(b.generators[1], j)) == 0)
        ++hits;
  CHECK(hits == 1);

  GroupPtr c6 = abelian_group({2, 3});
  AbelianBasis b6 = abelian_basis(*c6);
  CHECK(b6.orders[0] == 6);  // Z/2 x Z/3 is cyclic of order 6
}

TEST_CASE("element order and exponent invariants") {
  for (GroupPtr g : {extraspecial_group(3, 3, 3), modular_group(3, 3),
                     abelian_group({9, 3})}) {
    CHECK(g->order() % g->exponent() == 0);
    for (int x = 0; x < g->order(); ++x) {
      CHECK(g->power(x, g->element_order(x)) == 0);
      for (int k = 1; k < g->element_order(x); ++k)
        CHECK(g->power(x, k) != 0);
    }
  }
}

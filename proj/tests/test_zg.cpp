#include <random>

#include "doctest.h"
#include "grpcert/zg.hpp"

using namespace grpcert;

namespace {

Int euler_characteristic_modules(const GChainComplex& c) {
  Int chi = 0;
  for (int k = 0; k <= c.length(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * c.modules[k].rank();
  return chi;
}

Int euler_characteristic_homology(const std::vector<HomologyGroup>& h) {
  Int chi = 0;
  for (size_t k = 0; k < h.size(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * h[k].free_rank;
  return chi;
}

}  // namespace

TEST_CASE("periodic resolution of Z/3") {
  GroupPtr g = cyclic_group(3);
  FreeResolution p = free_resolution(g, 2);
  CHECK(p.complex.modules[0].rank() == 3);
  CHECK(p.complex.modules[1].rank() == 3);
  CHECK(p.complex.modules[2].rank() == 3);
  // d1 = t - 1, d2 = 1 + t + t^2.
  IMat shift = IMat::Zero(3, 3);
  for (int x = 0; x < 3; ++x) shift((x + 1) % 3, x) = 1;
  CHECK(p.complex.d[1] == shift - IMat::Identity(3, 3));
  CHECK(p.complex.d[2] == IMat::Ones(3, 3));
}

TEST_CASE("tensor resolution of (Z/3)^2 has the expected ranks") {
  GroupPtr g = abelian_group({3, 3});
  FreeResolution p = free_resolution(g, 2);
  CHECK(p.complex.modules[0].rank() == 9);
  CHECK(p.complex.modules[1].rank() == 18);
  CHECK(p.complex.modules[2].rank() == 27);
}

TEST_CASE("resolutions of the trivial group") {
  GroupPtr g = cyclic_group(1);
  FreeResolution p0 = free_resolution(g, 0);
  CHECK(p0.complex.modules[0].rank() == 1);
  // All-zero boundaries beyond the augmentation cannot be exact.
  CHECK_THROWS(free_resolution(g, 2));
}

TEST_CASE("nonabelian groups need an explicit resolution") {
  GroupPtr m = modular_group(3, 3);
  CHECK_THROWS_AS(free_resolution(m, 2), UnsupportedGroupError);
}

TEST_CASE("syzygies") {
  GroupPtr g = cyclic_group(3);
  FreeResolution p = free_resolution(g, 2);
  Syzygy s0 = syzygy(p, 0);
  CHECK(s0.lattice.rank() == 1);

  Syzygy s2 = syzygy(p, 2);
  CHECK(s2.lattice.rank() == 1);
  // The norm sublattice carries the trivial action.
  for (const IMat& a : s2.lattice.generator_action())
    CHECK(a == IMat::Identity(1, 1));

  Syzygy s1 = syzygy(p, 1);  // augmentation ideal
  CHECK(s1.lattice.rank() == 2);

  GroupPtr a2 = abelian_group({3, 3});
  FreeResolution p2 = free_resolution(a2, 2);
  CHECK(syzygy(p2, 2).lattice.rank() == 10);  // 27 - 18 + 1
}

TEST_CASE("surjective cocycles of Z/3") {
  GroupPtr g = cyclic_group(3);
  FreeResolution p = free_resolution(g, 3);
  std::vector<Cocycle> c2 = surjective_cocycles(p, 2, 1);
  // +-1 on the rank-1 syzygy: one class up to sign, both nontrivial.
  REQUIRE(c2.size() == 2);
  for (const Cocycle& c : c2) {
    CHECK_FALSE(c.trivial_class);
    CHECK((c.map(0, 0) == 1 || c.map(0, 0) == -1));
  }
  CHECK(c2[0].map == -c2[1].map);

  // Odd degrees have no equivariant functionals at all on this resolution.
  CHECK(surjective_cocycles(p, 1, 1).empty());
  CHECK(surjective_cocycles(p, 3, 1).empty());
}

TEST_CASE("surjective cocycles of (Z/3)^2 include the two inflations") {
  GroupPtr g = abelian_group({3, 3});
  FreeResolution p = free_resolution(g, 2);
  std::vector<Cocycle> cs = surjective_cocycles(p, 2, 1);
  CHECK(cs.size() >= 2);
  int nontrivial = 0;
  for (const Cocycle& c : cs) {
    // Each is genuinely equivariant and surjective by construction; check
    // equivariance independently.
    Syzygy omega = syzygy(p, 2);
    for (const IMat& a : omega.lattice.generator_action())
      CHECK(c.map * a == c.map);
    if (!c.trivial_class) ++nontrivial;
  }
  CHECK(nontrivial >= 2);
}

TEST_CASE("the truncated pushout complex is an algebraic circle for Z/3") {
  GroupPtr g = cyclic_group(3);
  FreeResolution p = free_resolution(g, 2);
  IRow one(1, 1);
  one << 1;
  GChainComplex c = build_c_zeta(p, 2, one);
  CHECK(c.length() == 1);
  CHECK(c.modules[0].rank() == 3);
  CHECK(c.modules[1].rank() == 3);
  std::vector<HomologyGroup> h = homology(c);
  CHECK(h[0].is_free_of_rank(1));
  CHECK(h[1].is_free_of_rank(1));

  IRow three(1, 1);
  three << 3;
  CHECK_THROWS_AS(build_c_zeta(p, 2, three), NotSurjectiveError);
}

TEST_CASE("homology via Smith normal form") {
  // 0 -> Z --x2--> Z -> 0 over the trivial group.
  GroupPtr g = cyclic_group(1);
  GChainComplex c;
  c.group = g;
  c.modules.push_back(trivial_lattice(g, 1));
  c.modules.push_back(trivial_lattice(g, 1));
  c.d.resize(2);
  c.d[0] = IMat(0, 0);
  c.d[1] = IMat(1, 1);
  c.d[1] << 2;
  std::vector<HomologyGroup> h = homology(c);
  CHECK(h[0].free_rank == 0);
  CHECK(h[0].torsion == std::vector<Int>{2});
  CHECK(h[1].is_zero());
}

TEST_CASE("tensor of two algebraic circles over (Z/3)^2 is an algebraic torus") {
  GroupPtr g = abelian_group({3, 3});
  FreeResolution p = free_resolution(g, 2);
  std::vector<Cocycle> cs = surjective_cocycles(p, 2, 1);
  REQUIRE(cs.size() >= 2);
  GChainComplex c1 = build_c_zeta(p, 2, cs[0].map);
  GChainComplex c2 = build_c_zeta(p, 2, cs[1].map);
  GChainComplex t = tensor_complexes(c1, c2);
  std::vector<HomologyGroup> h = homology(t);
  REQUIRE(h.size() == 3);
  CHECK(h[0].is_free_of_rank(1));
  CHECK(h[1].is_free_of_rank(2));
  CHECK(h[2].is_free_of_rank(1));
  CHECK(euler_characteristic_modules(t) == euler_characteristic_homology(h));

  // Tensoring with Z concentrated in degree 0 changes nothing.
  GChainComplex unit;
  unit.group = g;
  unit.modules.push_back(trivial_lattice(g, 1));
  unit.d.push_back(IMat(0, 0));
  GChainComplex same = tensor_complexes(c1, unit);
  std::vector<HomologyGroup> hs = homology(same);
  std::vector<HomologyGroup> h1 = homology(c1);
  REQUIRE(hs.size() == h1.size());
  for (size_t k = 0; k < hs.size(); ++k) {
    CHECK(hs[k].free_rank == h1[k].free_rank);
    CHECK(hs[k].torsion == h1[k].torsion);
  }
}

TEST_CASE("Tate degrees -1, 0") {
  GroupPtr g = cyclic_group(3);
  ElementSet whole(3);
  for (int x = 0; x < 3; ++x) whole.set(x);

  // Free module: cohomologically trivial.
  TateReport free3 = tate_01(regular_lattice(g), whole);
  CHECK(free3.projective);

  // Trivial module: H^0 = Z/3.
  TateReport triv = tate_01(trivial_lattice(g, 1), whole);
  CHECK_FALSE(triv.projective);
  CHECK(triv.h_zero == std::vector<Int>{3});

  // Augmentation ideal: not projective (H^{-1} detects it).
  FreeResolution p = free_resolution(g, 2);
  Syzygy aug = syzygy(p, 1);
  TateReport augr = tate_01(aug.lattice, whole);
  CHECK_FALSE(augr.projective);

  // Everything is projective over the trivial subgroup.
  ElementSet tset(3);
  tset.set(0);
  CHECK(tate_01(trivial_lattice(g, 2), tset).projective);
  CHECK(tate_01(aug.lattice, tset).projective);
}

TEST_CASE("permutation tensor check") {
  GroupPtr g = abelian_group({3, 3});
  ElementSet whole(9);
  for (int x = 0; x < 9; ++x) whole.set(x);

  // H = G, M = Z[G]: free of rank |G|.
  CHECK(permutation_tensor_check(g, whole, regular_lattice(g)).projective);

  // H = one factor, M = Z[H] inflated along the projection.
  ElementSet factor(9);
  for (int a = 0; a < 3; ++a) factor.set(3 * a);  // <(1,0)> at indices 0,3,6
  {
    // Generators of abelian({3,3}) are elements 1 = (0,1) and 3 = (1,0);
    // the inflated Z[H] sees only the (1,0) shift.
    REQUIRE(g->generators() == std::vector<int>{1, 3});
    IMat shift = IMat::Zero(3, 3);
    for (int x = 0; x < 3; ++x) shift((x + 1) % 3, x) = 1;
    GLattice inflated(g, 3, {IMat::Identity(3, 3), shift});
    inflated.validate();
    TateReport r = permutation_tensor_check(g, factor, inflated);
    CHECK(r.projective);
  }

  // H = 1, M = Z: the result is Z[G].
  ElementSet tset(9);
  tset.set(0);
  CHECK(permutation_tensor_check(g, tset, trivial_lattice(g, 1)).projective);

  // Precondition: M must restrict projectively to H.
  CHECK_THROWS_AS(permutation_tensor_check(g, whole, trivial_lattice(g, 1)),
                  PreconditionError);
}

TEST_CASE("spherical class search: free circle action for Z/3") {
  SphericalClassCertificate cert =
      find_spherical_classes(cyclic_group(3), 2, 1, 1);
  REQUIRE(cert.found);
  REQUIRE(cert.total_homology.size() == 2);
  CHECK(cert.total_homology[0].is_free_of_rank(1));
  CHECK(cert.total_homology[1].is_free_of_rank(1));
  CHECK(cert.certificate.all_projective);
  CHECK(cert.checked_subgroups.size() == 2);  // trivial and Z/3
}

TEST_CASE("spherical class search: degenerate ranks") {
  CHECK(find_spherical_classes(cyclic_group(1), 2, 0, 1).found);
  SphericalClassCertificate none =
      find_spherical_classes(cyclic_group(3), 2, 0, 1);
  CHECK_FALSE(none.found);
  CHECK(none.outcome == "search-exhausted");
}

TEST_CASE("lattice validation catches bad actions") {
  GroupPtr g = cyclic_group(3);
  IMat bad = IMat::Identity(2, 2);
  bad(0, 1) = 1;  // order infinite, no homomorphism from Z/3
  GLattice l(g, 2, {bad});
  CHECK_THROWS(l.validate());
}

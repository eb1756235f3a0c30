#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grpcert/group.hpp"
#include "grpcert/intmat.hpp"
#include "grpcert/report.hpp"
#include "grpcert/subgroups.hpp"

namespace grpcert {

// A finitely generated free-over-the-integers module with a group action by
// invertible integer matrices, one per group generator. Element actions are
// derived by word products and cached.
class GLattice {
 public:
  GLattice() = default;
  GLattice(GroupPtr group, int rank, std::vector<IMat> generator_action,
           std::vector<std::string> basis_labels = {});

  const GroupPtr& group() const { return group_; }
  int rank() const { return rank_; }
  const std::vector<IMat>& generator_action() const { return gen_action_; }
  const std::vector<std::string>& basis_labels() const { return labels_; }

  // Action matrix of an arbitrary element.
  const IMat& action_of(int element) const;
  // Sum of the action matrices over a member set (the norm of a subgroup).
  IMat norm_of(const ElementSet& members) const;

  // Checks that generators extend to a homomorphism on the whole group and
  // that every element acts invertibly over the integers.
  void validate() const;

 private:
  struct ActionCache;

  GroupPtr group_;
  int rank_ = 0;
  std::vector<IMat> gen_action_;
  std::vector<std::string> labels_;
  // BFS word structure: element -> (previous element, generator index).
  std::vector<std::pair<int, int>> parent_;
  // Copies share the cache; the action data is immutable.
  std::shared_ptr<ActionCache> cache_;
};

GLattice trivial_lattice(const GroupPtr& g, int rank = 1);
// Z[G] with the left regular action.
GLattice regular_lattice(const GroupPtr& g);
// Z[G/H] for a subgroup given by members, with the left translation action.
GLattice coset_lattice(const GroupPtr& g, const ElementSet& h_members);
// Diagonal action on the tensor product.
GLattice tensor_lattice(const GLattice& a, const GLattice& b);

// A bounded complex of lattices in degrees 0..n with integer boundary maps
// d[k] : C_k -> C_{k-1} (d[0] is empty), all equivariant.
struct GChainComplex {
  GroupPtr group;
  std::vector<GLattice> modules;
  std::vector<IMat> d;

  int length() const { return static_cast<int>(modules.size()) - 1; }
  // d o d = 0 and generator equivariance, exactly.
  void validate() const;
};

// An augmented free resolution of the trivial module: the complex plus the
// augmentation row.
struct FreeResolution {
  GChainComplex complex;
  IMat augmentation;  // 1 x rank(C_0)

  // Exactness of ... -> C_1 -> C_0 -> Z -> 0 through degree (length - 1).
  void verify_exactness() const;
};

// Tensor of two-periodic resolutions across a cyclic decomposition; defined
// for abelian groups. Others must supply an explicit resolution.
FreeResolution free_resolution(const GroupPtr& g, int length);
FreeResolution resolution_from_parts(const GroupPtr& g,
                                     std::vector<GLattice> modules,
                                     std::vector<IMat> boundaries,
                                     IMat augmentation);

// The n-th kernel lattice of a resolution with its inclusion into C_{n-1}.
struct Syzygy {
  int degree = 0;
  GLattice lattice;
  IMat inclusion;  // rank(C_{n-1}) x rank(syzygy)
};
Syzygy syzygy(const FreeResolution& p, int n);

// An equivariant surjection candidate from the n-th syzygy to the trivial
// module.
struct Cocycle {
  IRow map;  // over the syzygy basis
  bool trivial_class = false;
};

// Equivariant integer functionals on the n-th syzygy with entries bounded by
// `bound`, filtered to surjective ones (entry gcd 1), deduplicated modulo the
// functionals extending to C_{n-1}; trivial cohomology classes are flagged.
std::vector<Cocycle> surjective_cocycles(const FreeResolution& p, int n,
                                         Int bound);

// The truncated pushout complex: degrees 0..n-1 with C_{n-1}/L on top, where
// L is the kernel of the cocycle; homology must be Z at 0 and n-1, zero in
// between (asserted).
GChainComplex build_c_zeta(const FreeResolution& p, int n, const IRow& zeta_hat);

GChainComplex tensor_complexes(const GChainComplex& a, const GChainComplex& b);

struct HomologyGroup {
  Int free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1
  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool is_free_of_rank(Int r) const { return free_rank == r && torsion.empty(); }
};
std::vector<HomologyGroup> homology(const GChainComplex& c);

// Tate cohomology in degrees -1, 0 of a subgroup acting on a lattice; both
// vanishing certifies projectivity over the subgroup ring (cohomological
// triviality criterion for lattices).
struct TateReport {
  std::vector<int> subgroup_members;
  std::vector<Int> h_minus1;  // nontrivial invariant factors
  std::vector<Int> h_zero;
  bool projective = false;
};
TateReport tate_01(const GLattice& m, const ElementSet& subgroup);

struct ProjectivityCertificate {
  // One report per (module degree, subgroup index in the input list).
  std::vector<std::vector<TateReport>> reports;
  bool all_projective = true;
};
ProjectivityCertificate projectivity_certificate(
    const GChainComplex& c, const std::vector<ElementSet>& subgroups,
    int threads = 1);

// Z[G/H] tensor M with the diagonal action is Z[G]-projective whenever the
// restriction of M to H is projective (checked first).
TateReport permutation_tensor_check(const GroupPtr& g,
                                    const ElementSet& h_members,
                                    const GLattice& m);

// Search-based certificate for r cohomology classes whose kernel lattices
// tensor into a complex of modules projective over every subgroup of rank
// <= r, with the homology of a product of r spheres of dimension n-1.
struct SphericalClassCertificate {
  bool found = false;
  std::string outcome;  // "found" | "search-exhausted"
  std::vector<IRow> classes;
  std::vector<HomologyGroup> total_homology;
  ProjectivityCertificate certificate;
  std::vector<ElementSet> checked_subgroups;
};
SphericalClassCertificate find_spherical_classes(const GroupPtr& g, int n,
                                                 int r, Int bound,
                                                 int threads = 1);

}  // namespace grpcert

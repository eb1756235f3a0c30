#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "grpcert/cyclotomic.hpp"
#include "grpcert/group.hpp"
#include "grpcert/subgroups.hpp"

namespace grpcert {

// A cyclotomic-valued function constant on conjugacy classes.
class ClassFunction {
 public:
  ClassFunction(GroupPtr group, std::vector<Cyclotomic> class_values);

  const GroupPtr& group() const { return group_; }
  const std::vector<Cyclotomic>& values() const { return values_; }
  const Cyclotomic& at_class(int class_id) const { return values_[class_id]; }
  const Cyclotomic& at_element(int element) const;
  Cyclotomic degree() const { return at_element(0); }

  friend ClassFunction operator+(const ClassFunction& a,
                                 const ClassFunction& b);
  friend ClassFunction operator-(const ClassFunction& a,
                                 const ClassFunction& b);
  friend ClassFunction operator*(const Cyclotomic& c, const ClassFunction& f);
  friend ClassFunction operator*(const Rational& c, const ClassFunction& f) {
    return Cyclotomic(c) * f;
  }
  // Pointwise product (the character of a tensor product).
  friend ClassFunction operator*(const ClassFunction& a,
                                 const ClassFunction& b);
  friend bool operator==(const ClassFunction& a, const ClassFunction& b);
  friend bool operator!=(const ClassFunction& a, const ClassFunction& b) {
    return !(a == b);
  }

 private:
  GroupPtr group_;
  std::vector<Cyclotomic> values_;
};

// The table of irreducible characters, rows sorted by degree then value order.
class CharacterTable {
 public:
  const GroupPtr& group() const { return group_; }
  const std::vector<ClassFunction>& irreducibles() const { return irr_; }
  const std::vector<Int>& degrees() const { return degrees_; }
  int size() const { return static_cast<int>(irr_.size()); }

  // Exact orthogonality; throws on violation (used as a post-construction
  // self-check and exposed to tests).
  void verify_orthogonality() const;

 private:
  friend std::shared_ptr<const CharacterTable> character_table(
      const GroupPtr& g, int order_cap);
  GroupPtr group_;
  std::vector<ClassFunction> irr_;
  std::vector<Int> degrees_;
};

// Exact character table; abelian groups go through the dual-group
// construction, the rest through the Burnside-Dixon class-matrix method with
// a deterministic prime search. Cached on the group.
std::shared_ptr<const CharacterTable> character_table(const GroupPtr& g,
                                                      int order_cap = 3125);

// chi restricted along a subgroup inclusion.
ClassFunction restrict_to(const ClassFunction& chi, const SubgroupView& h);

// Frobenius induction of a class function on the subgroup to the parent.
ClassFunction induce_from(const ClassFunction& phi, const SubgroupView& h);

// (1/|G|) sum chi(g) conj(psi(g)).
Cyclotomic inner_product(const ClassFunction& chi, const ClassFunction& psi);

struct Decomposition {
  std::vector<Cyclotomic> multiplicities;  // over Irr(G), table order
  bool is_character = false;
  // Index of a non-integral or negative multiplicity when not a character.
  int witness_index = -1;
};
Decomposition decompose(const ClassFunction& chi);
bool is_character(const ClassFunction& chi);

ClassFunction trivial_character(const GroupPtr& g);
ClassFunction regular_character(const GroupPtr& g);
// Regular minus trivial: |A|-1 at the identity, -1 elsewhere.
ClassFunction reduced_regular(const GroupPtr& g);

// Dimension of the fixed subspace of x (and its powers) in the representation
// with character chi: (1/o(x)) sum_k chi(x^k).
Rational fixed_subspace_dimension(const ClassFunction& chi, int element);

struct FpfResult {
  bool holds = false;
  // Failing element (strict), or members of a failing elementary abelian
  // subgroup (top-rank).
  std::vector<int> witness;
};

// No nonidentity element fixes a nonzero vector (the linear sphere is free).
FpfResult is_strictly_fpf(const ClassFunction& chi);
// Every elementary abelian subgroup of the given rank has zero fixed space.
FpfResult is_top_rank_fpf(const ClassFunction& chi, int rank);

// n(H) per subgroup conjugacy class: the dimension of the H-fixed subspace.
class DimensionFunction {
 public:
  DimensionFunction(GroupPtr group,
                    std::shared_ptr<const SubgroupLattice> lattice,
                    std::vector<Int> n_by_class);
  const std::vector<Int>& by_class() const { return n_; }
  Int at_class(int class_id) const { return n_[class_id]; }
  Int at_subgroup(const ElementSet& members) const;
  // Fixed-sphere dimension after an r-fold direct-sum power:
  // n_r(H) = r*n(H) + (r-1).
  Int joined(int class_id, Int r) const {
    return checked_add(checked_mul(r, n_[class_id]), r - 1);
  }
  const std::shared_ptr<const SubgroupLattice>& lattice() const {
    return lattice_;
  }

 private:
  GroupPtr group_;
  std::shared_ptr<const SubgroupLattice> lattice_;
  std::vector<Int> n_;
};

DimensionFunction dimension_function(const ClassFunction& chi,
                                     int order_cap = 3125);

}  // namespace grpcert

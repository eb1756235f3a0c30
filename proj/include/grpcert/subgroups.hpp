#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grpcert/group.hpp"
#include "grpcert/numbers.hpp"

namespace grpcert {

// One subgroup of a fixed ambient group.
struct SubgroupRecord {
  ElementSet member_set;
  int order = 1;
  std::vector<int> generator_indices;
  bool is_normal = false;
  bool is_abelian = true;
  bool is_elementary_abelian = true;
  // Largest rank of an elementary abelian subgroup contained in it.
  int rank = 0;
  int conjugacy_class_id = -1;
};

// The full subgroup lattice, sorted by (order, member set); one record per
// subgroup, grouped into conjugacy classes of subgroups.
struct SubgroupLattice {
  GroupPtr group;
  std::vector<SubgroupRecord> subgroups;
  int num_classes = 0;
  std::vector<int> class_representative;  // class id -> subgroup index

  std::optional<int> index_of(const ElementSet& members) const;
  int class_of(const ElementSet& members) const;
  // Subgroups K > H with nothing strictly between (indices into subgroups).
  std::vector<int> minimal_overgroups(int index) const;

 private:
  friend std::shared_ptr<const SubgroupLattice> all_subgroups(const GroupPtr&,
                                                              int);
  void build_index();
  std::vector<std::pair<size_t, int>> hash_index_;  // sorted (hash, index)
};

// Complete subgroup enumeration by prime-order cyclic extensions (layer by
// layer on subgroup order); complete for solvable groups, with a join-closure
// fallback otherwise. Results are cached on the group.
std::shared_ptr<const SubgroupLattice> all_subgroups(const GroupPtr& g,
                                                     int order_cap = 3125);

// A subgroup materialized as a group in its own right, with the element maps
// between the two index spaces.
struct SubgroupView {
  GroupPtr parent;
  GroupPtr group;
  std::vector<int> to_parent;    // local index -> parent index
  std::vector<int> from_parent;  // parent index -> local index or -1

  static SubgroupView whole_group(const GroupPtr& g);
};
SubgroupView materialize(const GroupPtr& g, const ElementSet& members);

// Closure of a set of elements under multiplication.
ElementSet generated_subgroup(const FiniteGroup& g,
                              const std::vector<int>& gens);

// Record for an explicit member set (flags and rank computed directly; the
// conjugacy class id is left unset).
SubgroupRecord make_record(const FiniteGroup& g, const ElementSet& members);

// C_G(S); the center when S is the whole group.
ElementSet centralizer(const FiniteGroup& g, const ElementSet& s);
SubgroupRecord center_and_centralizer(const GroupPtr& g, const ElementSet& s);

// Max rank of an elementary abelian subgroup contained in a member set.
int elementary_abelian_rank_within(const FiniteGroup& g,
                                   const ElementSet& inside);
int elementary_abelian_rank(const FiniteGroup& g);

// All elementary abelian subgroups of exactly the given rank inside a member
// set, as member sets.
std::vector<ElementSet> elementary_abelian_of_rank(const FiniteGroup& g,
                                                   const ElementSet& inside,
                                                   int rank);

// The least normal elementary abelian subgroup of order p^2 meeting the
// center nontrivially; preconditions: odd p-group, rank 3, cyclic-center
// rank 1. Failure throws NoSuchQError.
SubgroupRecord find_normal_q(const GroupPtr& g);
// All valid choices, least first.
std::vector<SubgroupRecord> all_normal_q(const GroupPtr& g);

enum class SubgroupClass {
  kCyclic,
  kInCentralizerOfQ,
  kAbelianMaximalCyclic,
  kModular,
};
std::string to_string(SubgroupClass c);

struct Classification {
  SubgroupClass tag;
  // For the abelian-with-maximal-cyclic and modular tags: p and p^(n-1).
  int p = 0;
  Int maximal_cyclic_order = 0;
  // Witness: a maximal cyclic subgroup (generator index) when applicable.
  int witness_generator = -1;
};

// Classifies H with trivial center intersection against the four shapes
// (cyclic / inside C_G(Q) / abelian with index-p cyclic / modular), reporting
// the first matching tag in that order. Throws UnclassifiableError when no
// shape matches (a refutation witness).
Classification classify_subgroup(const GroupPtr& g, const SubgroupRecord& q,
                                 const SubgroupRecord& h);

}  // namespace grpcert

#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "grpcert/errors.hpp"

namespace grpcert {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

// A subset of element indices of a fixed group, packed into 64-bit words.
class ElementSet {
 public:
  ElementSet() : size_(0) {}
  explicit ElementSet(int universe_size)
      : size_(universe_size), words_((universe_size + 63) / 64, 0) {}

  int universe_size() const { return size_; }
  bool test(int i) const {
    return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
  }
  void set(int i) { words_[static_cast<size_t>(i) >> 6] |= 1ull << (i & 63); }
  void reset(int i) {
    words_[static_cast<size_t>(i) >> 6] &= ~(1ull << (i & 63));
  }
  int count() const;
  bool is_subset_of(const ElementSet& o) const;
  bool intersects(const ElementSet& o) const;
  ElementSet intersect(const ElementSet& o) const;
  ElementSet unite(const ElementSet& o) const;
  std::vector<int> members() const;
  size_t hash() const;

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend bool operator!=(const ElementSet& a, const ElementSet& b) {
    return !(a == b);
  }
  // Orders sets by their sorted member lists, so "least" favours the set
  // containing the smallest elements. Used for reproducible choices.
  friend bool operator<(const ElementSet& a, const ElementSet& b);

 private:
  int size_;
  std::vector<std::uint64_t> words_;
};

// Conjugacy class data of a group: class of each element, least-index
// representatives, sizes.
struct ClassPartition {
  std::vector<int> class_of;
  std::vector<int> representatives;
  std::vector<int> class_sizes;
  int num_classes() const { return static_cast<int>(representatives.size()); }
};

struct SubgroupLattice;  // subgroups.hpp
class CharacterTable;    // characters.hpp

// Internal factory shared by the constructors in this module (the table is
// assumed to already satisfy the group axioms with identity at index 0).
GroupPtr make_group_from_validated_table(std::vector<int> table, int order,
                                         const std::string& label);

// A finite group as an indexed element set with exact multiplication.
// Index 0 is always the identity. Instances are immutable after construction
// and shared through GroupPtr; derived data (classes, subgroup lattice,
// character table) is cached lazily behind a mutex.
class FiniteGroup : public std::enable_shared_from_this<FiniteGroup> {
 public:
  int order() const { return order_; }
  int mul(int a, int b) const {
    return table_[static_cast<size_t>(a) * order_ + b];
  }
  int inv(int a) const { return inverse_[a]; }
  int element_order(int a) const { return element_order_[a]; }
  int exponent() const { return exponent_; }
  const std::string& label() const { return label_; }
  const std::vector<int>& generators() const { return generators_; }

  int conjugate(int g, int x) const { return mul(mul(g, x), inv(g)); }
  int power(int x, long e) const;

  bool is_abelian() const;
  // Prime p if the order is a nontrivial power of p.
  std::optional<int> p_group_prime() const;

  const ClassPartition& classes() const;
  ElementSet center_set() const;

  // --- construction -------------------------------------------------------

  // Validates the table (associativity exhaustive up to order 512, sampled
  // deterministically above), relocates the identity to index 0.
  static GroupPtr from_cayley_table(const std::vector<std::vector<int>>& table,
                                    const std::string& label = "");

  // Closes the generated permutation set by breadth-first products.
  static GroupPtr from_permutations(int degree,
                                    const std::vector<std::vector<int>>& gens,
                                    const std::string& label = "",
                                    int order_cap = 10000);

  // --- caches shared with other modules ----------------------------------
  std::shared_ptr<const SubgroupLattice> cached_lattice() const;
  void cache_lattice(std::shared_ptr<const SubgroupLattice> l) const;
  std::shared_ptr<const CharacterTable> cached_table() const;
  void cache_table(std::shared_ptr<const CharacterTable> t) const;

 private:
  friend GroupPtr make_group_from_validated_table(std::vector<int> table,
                                                  int order,
                                                  const std::string& label);
  FiniteGroup() = default;

  void finish_construction();

  int order_ = 1;
  std::vector<int> table_;  // row-major order_ x order_
  std::vector<int> inverse_;
  std::vector<int> element_order_;
  std::vector<int> generators_;
  int exponent_ = 1;
  std::string label_;

  mutable std::mutex cache_mu_;
  mutable std::shared_ptr<const ClassPartition> classes_;
  mutable std::shared_ptr<const SubgroupLattice> lattice_;
  mutable std::shared_ptr<const CharacterTable> table_cache_;
};

// --- catalog constructors --------------------------------------------------

GroupPtr cyclic_group(int n);
GroupPtr abelian_group(const std::vector<int>& factor_orders);
// Extraspecial group of order p^width (width odd >= 3) and exponent p, as an
// iterated central product of groups of order p^3; odd p only.
GroupPtr extraspecial_group(int p, int width, int exponent);
// Modular group of order p^n: <x, y | x^(p^(n-1)) = y^p = 1,
// y^-1 x y = x^(1 + p^(n-2))>, n >= 3.
GroupPtr modular_group(int p, int n);
GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);
// Central product identifying cyclic central subgroups of order d in both
// factors (d = 0 picks the largest common order).
GroupPtr central_product(const GroupPtr& a, const GroupPtr& b, int d = 0);

// The named catalog entries swept by property suites: cyclic and abelian
// families, the odd extraspecial and modular groups, and a few direct and
// central products, filtered to the given maximal order.
std::vector<GroupPtr> standard_catalog(int max_order = 243);

// Decomposition of an abelian group into independent cyclic generators;
// throws BadGroupError when the group is not abelian.
struct AbelianBasis {
  std::vector<int> generators;
  std::vector<int> orders;
};
AbelianBasis abelian_basis(const FiniteGroup& g);

}  // namespace grpcert

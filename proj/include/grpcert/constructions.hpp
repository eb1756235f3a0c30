#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grpcert/characters.hpp"
#include "grpcert/group.hpp"
#include "grpcert/report.hpp"
#include "grpcert/subgroups.hpp"

namespace grpcert {

// --- the rank-3 class function ------------------------------------------------

// The piecewise class function attached to a rank-3 odd p-group with cyclic
// center and a chosen normal (p,p) subgroup Q meeting the center:
//   (p^2-p)|G| at 1; 0 on Z\1; -p|G| on Q\Z; 0 on C_G(Q)\Q;
//   -|G| on order-p elements outside C_G(Q); 0 otherwise.
ClassFunction beta_rank3(const GroupPtr& g, const SubgroupRecord& q);

struct CaseFormula {
  int case_number = 0;  // 1..5, following the classification of H
  ClassFunction on_h;
  SubgroupView view;
};

// Builds the predicted restriction of the rank-3 class function to H from the
// matching closed-form case; the verifier asserts it equals the actual
// restriction value by value. Throws NoCaseMatchesError when no case applies.
// A pre-materialized view of H may be passed to keep group identities shared.
CaseFormula beta_rank3_case_formula(const GroupPtr& g, const SubgroupRecord& q,
                                    const SubgroupRecord& h,
                                    const SubgroupView* existing_view = nullptr);

struct Rank3Options {
  bool sweep_all_q = false;
  int threads = 1;
  int order_cap = 3125;
  // Negative control: adds +1 to one noncentral class value of the class
  // function before verification, which must surface non-integer
  // multiplicities.
  bool corrupt_beta = false;
};

// Full verification sweep for the rank-3 construction: every subgroup H
// meeting the center trivially gets (a) an integrality check of the
// restricted class function, (b) the case-formula comparison, (c) the
// classification tag, and rank-2 elementary abelian H get the top-rank
// fixed-point-freeness check plus the strict-freeness observation.
VerificationReport verify_rank3(const GroupPtr& g, const Rank3Options& opts);

// --- abelian-isotropy construction ---------------------------------------------

// |G|(p^r - 1) at 1; -|G| on order-p elements; 0 otherwise. The prime is
// taken from the group (p_override only matters for the trivial group).
ClassFunction beta_abelian(const GroupPtr& g, int r, int p_override = 0);

struct SphereActionModel {
  GroupPtr group;
  std::vector<ClassFunction> factors;
  std::vector<Int> sphere_dims;  // 2 deg - 1 per factor
  std::shared_ptr<const SubgroupLattice> lattice;
  std::vector<int> isotropy_class_ids;  // sorted
  int rk_x = 0;
  bool all_isotropy_abelian = true;
};

// Full stabilizers of the product of the unit spheres of the given
// characters: H is listed iff every factor has positive fixed dimension on H
// and every minimal overgroup drops some factor's fixed dimension.
SphereActionModel isotropy_of_product(const GroupPtr& g,
                                      const std::vector<ClassFunction>& factors,
                                      int order_cap = 3125);

// rk(Z(G)) sphere factors induced from linear characters of the center whose
// joint action on the center is free. Asserts rk_X = rk(G) - rk(Z(G)).
SphereActionModel center_sphere_family(const GroupPtr& g, int order_cap = 3125);

struct AbelianOptions {
  int threads = 1;
  int order_cap = 3125;
  bool sweep_injections = false;
};

// Checks the abelian-isotropy construction against the model: for every
// abelian isotropy class A, the induced character built from the p-torsion of
// A equals the restriction of beta_abelian exactly and is a character; rank-r
// elementary abelian isotropy passes top-rank freeness.
VerificationReport verify_abelian(const GroupPtr& g, const SphereActionModel& x,
                                  const AbelianOptions& opts = {});

// --- representation families and the gluing hypothesis check --------------------

struct RepresentationFamily {
  GroupPtr group;
  std::string provenance;  // beta_rank3 | beta_abelian | explicit
  // isotropy class id -> assigned character of the class representative.
  std::map<int, ClassFunction> assignment;
  std::map<int, SubgroupView> views;
};

RepresentationFamily family_from_character(const GroupPtr& g,
                                           const SphereActionModel& x,
                                           const ClassFunction& chi,
                                           const std::string& provenance);

// Restriction compatibility across all conjugate inclusion pairs plus
// top-rank freeness on the isotropy classes of maximal rank; passing
// certifies the gluing hypotheses and records the rank-drop conclusion.
VerificationReport check_family(const GroupPtr& g, const SphereActionModel& x,
                                const RepresentationFamily& f, int rank,
                                int threads = 1);

// --- the two-vertex amalgam obstruction ----------------------------------------

struct EffectiveCharacters {
  GroupPtr group;
  std::vector<int> allowed_irreducibles;  // indices into the table
  // Multiplicity vectors over the full table (zeros outside allowed).
  std::vector<std::vector<Int>> vectors;
};

// All non-negative integer combinations of irreducibles with degree <= bound
// whose fixed space vanishes on every rank-2 elementary abelian subgroup.
EffectiveCharacters effective_characters(const GroupPtr& e, Int degree_bound);

// Glues Z(E) to a noncentral order-p subgroup of a second copy and shows the
// dimension functions of effective characters can never agree across the
// glued subgroup.
VerificationReport amalgam_obstruction(int p, Int degree_bound,
                                       int threads = 1);

}  // namespace grpcert

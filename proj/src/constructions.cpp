#include "grpcert/constructions.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "grpcert/parallel.hpp"

namespace grpcert {

namespace {

std::string pad4(int v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", v);
  return buf;
}

int require_odd_p_group(const GroupPtr& g, const char* who) {
  auto p = g->p_group_prime();
  if (!p || *p == 2)
    throw PreconditionError(std::string(who) + ": needs an odd p-group, got " +
                            g->label());
  return *p;
}

nlohmann::json members_json(const std::vector<int>& m) {
  return nlohmann::json(m);
}

}  // namespace

// --- beta for rank 3 ------------------------------------------------------------

ClassFunction beta_rank3(const GroupPtr& g, const SubgroupRecord& q) {
  int p = require_odd_p_group(g, "beta_rank3");
  if (elementary_abelian_rank(*g) != 3)
    throw PreconditionError("beta_rank3: group rank is not 3");
  ElementSet z = g->center_set();
  if (make_record(*g, z).rank != 1)
    throw PreconditionError("beta_rank3: center rank is not 1");
  if (!q.is_normal || q.order != p * p || !q.is_elementary_abelian ||
      q.member_set.intersect(z).count() <= 1)
    throw PreconditionError("beta_rank3: Q is not a normal (p,p) subgroup "
                            "meeting the center");

  ElementSet c = centralizer(*g, q.member_set);
  const Int n = g->order();
  auto value_at = [&](int x) -> Int {
    if (x == 0) return (Int(p) * p - p) * n;
    if (z.test(x)) return 0;
    if (q.member_set.test(x)) return -Int(p) * n;
    if (c.test(x)) return 0;
    if (g->element_order(x) == p) return -n;
    return 0;
  };
  const ClassPartition& cls = g->classes();
  std::vector<Cyclotomic> values(cls.num_classes());
  for (int cid = 0; cid < cls.num_classes(); ++cid)
    values[cid] = Cyclotomic(Rational(value_at(cls.representatives[cid])));
  // Constancy on classes (guaranteed by the normal chain Z < Q < C_G(Q) < G,
  // but checked).
  for (int x = 0; x < g->order(); ++x)
    if (Cyclotomic(Rational(value_at(x))) != values[cls.class_of[x]])
      throw Error("beta_rank3: value not constant on a conjugacy class");
  return ClassFunction(g, std::move(values));
}

CaseFormula beta_rank3_case_formula(const GroupPtr& g, const SubgroupRecord& q,
                                    const SubgroupRecord& h,
                                    const SubgroupView* existing_view) {
  int p = require_odd_p_group(g, "beta_rank3_case_formula");
  ElementSet z = g->center_set();
  if (h.member_set.intersect(z).count() != 1)
    throw PreconditionError("case formula: H meets the center");
  const Int n = g->order();
  ElementSet cq = centralizer(*g, q.member_set);
  ElementSet hq = h.member_set.intersect(q.member_set);
  ElementSet hc = h.member_set.intersect(cq);

  SubgroupView view =
      existing_view ? *existing_view : materialize(g, h.member_set);
  const GroupPtr& hg = view.group;

  auto local_set = [&](const ElementSet& parent_set) {
    ElementSet s(hg->order());
    for (int x : parent_set.members())
      if (view.from_parent[x] >= 0) s.set(view.from_parent[x]);
    return s;
  };
  // The (p-1, -1, ..., -1) character on a subgroup of H given by members.
  auto reduced_line = [&](const ElementSet& local_members) {
    SubgroupView v = materialize(hg, local_members);
    std::vector<Cyclotomic> vals(v.group->classes().num_classes(),
                                 Cyclotomic(Rational(-1)));
    vals[0] = Cyclotomic(Rational(v.group->order() - 1));
    return std::make_pair(ClassFunction(v.group, vals), v);
  };

  bool cyclic = false;
  for (int x : h.member_set.members())
    if (g->element_order(x) == h.order) cyclic = true;

  if (hq.count() > 1) {
    // Case 1: K = Q n H has order p and H lies in the centralizer of Q.
    if (hq.count() != p)
      throw NoCaseMatchesError("case 1: |Q n H| is not p");
    if (!h.member_set.is_subset_of(cq))
      throw NoCaseMatchesError("case 1: H is not inside C_G(Q)");
    auto [phi, kview] = reduced_line(local_set(hq));
    ClassFunction ind = induce_from(phi, kview);
    Rational scale(checked_mul(p, n), h.order / p);  // p|G| / [H:K]
    return CaseFormula{1, Cyclotomic(scale) * ind, std::move(view)};
  }
  if (cyclic) {
    // Either inside C_G(Q) (the paper's case 2), or cyclic of order p
    // avoiding it (case 3). A cyclic H of order >= p^2 not inside C_G(Q)
    // still takes the case-2 values: all its order-p elements lie in
    // H n C_G(Q), so the class function vanishes off the identity.
    bool omega_in_c = true;
    for (int x : h.member_set.members())
      if (x != 0 && g->element_order(x) == p && !cq.test(x)) omega_in_c = false;
    if (omega_in_c) {
      // (|G|/|H|)(p^2-p) times the regular character of H: the only nonzero
      // value is (p^2-p)|G| at the identity.
      std::vector<Cyclotomic> vals(hg->classes().num_classes());
      vals[0] = Cyclotomic(Rational(checked_mul(checked_mul(n, p), p - 1)));
      return CaseFormula{2, ClassFunction(hg, std::move(vals)),
                         std::move(view)};
    }
    if (h.order != p || hc.count() != 1)
      throw NoCaseMatchesError("case 3: cyclic H with order-p elements "
                               "outside C_G(Q) is not a Z/p avoiding it");
    std::vector<Cyclotomic> vals(hg->classes().num_classes(),
                                 Cyclotomic(Rational(-p)));
    vals[0] = Cyclotomic(Rational(checked_mul(Int(p) * p, p - 1)));
    return CaseFormula{
        3, Cyclotomic(Rational(n, p)) * ClassFunction(hg, std::move(vals)),
        std::move(view)};
  }

  // K = H n C_G(Q) must now be cyclic of index p in H.
  SubgroupRecord krec = make_record(*g, hc);
  bool k_cyclic = false;
  for (int x : hc.members())
    if (g->element_order(x) == krec.order) k_cyclic = true;
  if (!k_cyclic || krec.order * p != h.order)
    throw NoCaseMatchesError("H n C_G(Q) is not cyclic of index p");

  if (h.is_abelian) {
    // Case 4: H = <x> x <y> of type (p, p^(n-1)), <y> = H n C_G(Q).
    // The order-p subgroups of H other than the one inside <y> are
    // H_i = <x w^i> for w the order-p element of <y>; each carries the
    // (p-1, -1) character and beta restricts to p|G|/|H| times the sum of
    // their inductions.
    int y0 = -1;
    for (int x : hc.members())
      if (g->element_order(x) == krec.order) {
        y0 = x;
        break;
      }
    int w = g->power(y0, krec.order / p);
    int x0 = -1;
    for (int x : h.member_set.members())
      if (g->element_order(x) == p && !hc.test(x)) {
        x0 = x;
        break;
      }
    if (x0 < 0) throw NoCaseMatchesError("case 4: no order-p element off K");
    std::vector<Cyclotomic> acc(hg->classes().num_classes());
    ClassFunction phi_sum(hg, acc);
    for (int i = 0; i < p; ++i) {
      int gen = g->mul(x0, g->power(w, i));
      ElementSet line(hg->order());
      int cur = 0;
      do {
        line.set(view.from_parent[cur]);
        cur = g->mul(cur, gen);
      } while (cur != 0);
      auto [phi, lview] = reduced_line(line);
      phi_sum = phi_sum + induce_from(phi, lview);
    }
    return CaseFormula{
        4, Cyclotomic(Rational(checked_mul(p, n), h.order)) * phi_sum,
        std::move(view)};
  }

  // Case 5: H is the modular group; N is its order-p^2 torsion subgroup,
  // normal with N n K the central order-p line. The inducing character
  // lives on N: p-1 at the identity, -1 on a line other than N n K, zero
  // elsewhere on N.
  {
    ElementSet torsion(g->order());
    for (int x : h.member_set.members())
      if (g->element_order(x) <= p) torsion.set(x);
    if (torsion.count() != p * p)
      throw NoCaseMatchesError("case 5: torsion subgroup is not (p,p)");
    ElementSet wline = torsion.intersect(hc);
    if (wline.count() != p)
      throw NoCaseMatchesError("case 5: N n K is not a line");
    // Least order-p subgroup of N different from N n K.
    ElementSet lline(g->order());
    bool found = false;
    for (int x : torsion.members()) {
      if (x == 0 || wline.test(x)) continue;
      ElementSet cand(g->order());
      int cur = 0;
      do {
        cand.set(cur);
        cur = g->mul(cur, x);
      } while (cur != 0);
      if (!found || cand < lline) {
        lline = cand;
        found = true;
      }
    }
    if (!found) throw NoCaseMatchesError("case 5: no complementary line");
    SubgroupView nview = materialize(hg, local_set(torsion));
    ElementSet l_in_n(nview.group->order());
    for (int x : lline.members())
      l_in_n.set(nview.from_parent[view.from_parent[x]]);
    const ClassPartition& ncls = nview.group->classes();
    std::vector<Cyclotomic> phi_vals(ncls.num_classes());
    for (int c = 0; c < ncls.num_classes(); ++c) {
      int rep = ncls.representatives[c];
      if (rep == 0)
        phi_vals[c] = Cyclotomic(Rational(p - 1));
      else if (l_in_n.test(rep))
        phi_vals[c] = Cyclotomic(Rational(-1));
      else
        phi_vals[c] = Cyclotomic::zero();
    }
    ClassFunction phi(nview.group, std::move(phi_vals));
    Rational scale(checked_mul(p, n), h.order / (p * p));  // p|G| / [H:N]
    return CaseFormula{5, Cyclotomic(scale) * induce_from(phi, nview),
                       std::move(view)};
  }
}

// --- verify_rank3 ------------------------------------------------------------------

VerificationReport verify_rank3(const GroupPtr& g, const Rank3Options& opts) {
  int p = require_odd_p_group(g, "verify_rank3");
  if (elementary_abelian_rank(*g) != 3)
    throw PreconditionError("verify_rank3: group rank is not 3");

  VerificationReport report("rank3-class-function", g->label());
  report.set_parameter("p", p);
  report.set_parameter("order", g->order());
  report.set_parameter("sweep_all_q", opts.sweep_all_q);
  report.set_parameter("corrupt_beta", opts.corrupt_beta);

  ElementSet z = g->center_set();
  SubgroupRecord zrec = make_record(*g, z);
  report.set_parameter("center_rank", zrec.rank);

  if (zrec.rank >= 2) {
    // Easy branch: a (p,p) inside the center carries two linear characters
    // with trivial joint kernel; the induced spheres already have the
    // required cyclic isotropy.
    std::vector<ElementSet> cands = elementary_abelian_of_rank(*g, z, 2);
    if (cands.empty()) {
      report.add_fail("easy-branch/central-rank2-exists",
                      {{"center_rank", zrec.rank}});
      return report;
    }
    report.add_pass("easy-branch/central-rank2-exists",
                    {{"members", members_json(cands[0].members())}});
    SubgroupView ev = materialize(g, cands[0]);
    auto table = character_table(ev.group);
    bool found = false;
    for (int i = 0; i < table->size() && !found; ++i)
      for (int j = i + 1; j < table->size() && !found; ++j) {
        bool joint_trivial = true;
        for (int x = 1; x < ev.group->order(); ++x)
          if (table->irreducibles()[i].at_element(x) == Cyclotomic::one() &&
              table->irreducibles()[j].at_element(x) == Cyclotomic::one())
            joint_trivial = false;
        if (joint_trivial) {
          found = true;
          report.add_pass("easy-branch/joint-kernel-trivial",
                          {{"characters", {i, j}}});
        }
      }
    if (!found)
      report.add_fail("easy-branch/joint-kernel-trivial",
                      {{"reason", "no pair of linear characters with trivial "
                                  "joint kernel"}});
    report.add_observation(
        "easy-branch/used",
        {{"note", "center has rank >= 2; spheres induced from central (p,p) "
                  "linear characters"}});
    return report;
  }

  std::vector<SubgroupRecord> qs =
      opts.sweep_all_q ? all_normal_q(g)
                       : std::vector<SubgroupRecord>{find_normal_q(g)};
  report.set_parameter("q_count", static_cast<int>(qs.size()));

  auto lattice = all_subgroups(g, opts.order_cap);
  std::vector<int> hs;
  for (size_t i = 0; i < lattice->subgroups.size(); ++i)
    if (lattice->subgroups[i].member_set.intersect(z).count() == 1)
      hs.push_back(static_cast<int>(i));
  report.set_parameter("subgroups_avoiding_center",
                       static_cast<int>(hs.size()));

  // Views are shared across the Q sweep.
  std::vector<SubgroupView> views(hs.size());
  parallel_for(static_cast<int>(hs.size()), opts.threads, [&](int i) {
    views[i] = materialize(g, lattice->subgroups[hs[i]].member_set);
  });

  for (size_t qi = 0; qi < qs.size(); ++qi) {
    const SubgroupRecord& q = qs[qi];
    std::string qp = "q" + pad4(static_cast<int>(qi)) + "/";

    ElementSet cq = centralizer(*g, q.member_set);
    if (g->order() / cq.count() == p)
      report.add_pass(qp + "centralizer-index-p",
                      {{"index", g->order() / cq.count()}});
    else
      report.add_fail(qp + "centralizer-index-p",
                      {{"index", g->order() / cq.count()},
                       {"q_members", members_json(q.member_set.members())}});

    ClassFunction beta = beta_rank3(g, q);
    if (opts.corrupt_beta) {
      // Perturb the least class whose representative generates a subgroup in
      // the sweep (order p, outside the center).
      const ClassPartition& cls = g->classes();
      int target = -1;
      for (int c = 0; c < cls.num_classes() && target < 0; ++c) {
        int rep = cls.representatives[c];
        if (rep != 0 && !z.test(rep) && g->element_order(rep) == p) target = c;
      }
      std::vector<Cyclotomic> vals = beta.values();
      vals[target] += Cyclotomic::one();
      beta = ClassFunction(g, std::move(vals));
      report.add_observation(qp + "beta-corrupted",
                             {{"class_id", target}});
    }

    struct HResult {
      std::vector<Check> checks;
    };
    std::vector<HResult> results(hs.size());
    parallel_for(static_cast<int>(hs.size()), opts.threads, [&](int i) {
      const SubgroupRecord& rec = lattice->subgroups[hs[i]];
      const SubgroupView& view = views[i];
      std::string hp = qp + "h" + pad4(hs[i]) + "/";
      auto& out = results[i].checks;
      nlohmann::json base = {{"order", rec.order},
                             {"class_id", rec.conjugacy_class_id}};

      try {
        Classification c = classify_subgroup(g, q, rec);
        nlohmann::json d = base;
        d["tag"] = to_string(c.tag);
        if (c.witness_generator >= 0)
          d["max_cyclic_generator"] = c.witness_generator;
        out.push_back({hp + "classification", CheckStatus::kPass, d});
      } catch (const UnclassifiableError& e) {
        nlohmann::json d = base;
        d["error"] = e.what();
        d["members"] = members_json(rec.member_set.members());
        out.push_back({hp + "classification", CheckStatus::kFail, d});
      }

      ClassFunction res = restrict_to(beta, view);
      Decomposition dec = decompose(res);
      if (dec.is_character) {
        out.push_back({hp + "integral-character", CheckStatus::kPass, base});
      } else {
        nlohmann::json d = base;
        d["bad_irreducible"] = dec.witness_index;
        d["multiplicity"] = dec.multiplicities[dec.witness_index].str();
        out.push_back({hp + "integral-character", CheckStatus::kFail, d});
      }

      try {
        CaseFormula cf = beta_rank3_case_formula(g, q, rec, &view);
        nlohmann::json d = base;
        d["case"] = cf.case_number;
        if (cf.on_h == res) {
          out.push_back({hp + "case-formula", CheckStatus::kPass, d});
        } else {
          for (size_t c2 = 0; c2 < res.values().size(); ++c2)
            if (res.values()[c2] != cf.on_h.values()[c2]) {
              d["class"] = static_cast<int>(c2);
              d["expected"] = cf.on_h.values()[c2].str();
              d["actual"] = res.values()[c2].str();
              break;
            }
          out.push_back({hp + "case-formula", CheckStatus::kFail, d});
        }
      } catch (const NoCaseMatchesError& e) {
        nlohmann::json d = base;
        d["error"] = e.what();
        out.push_back({hp + "case-formula", CheckStatus::kFail, d});
      }

      if (rec.is_elementary_abelian && rec.rank == 2 && dec.is_character) {
        FpfResult top = is_top_rank_fpf(res, 2);
        if (top.holds) {
          out.push_back({hp + "top-rank-fpf", CheckStatus::kPass, base});
        } else {
          nlohmann::json d = base;
          d["fixed_subgroup"] = members_json(top.witness);
          out.push_back({hp + "top-rank-fpf", CheckStatus::kFail, d});
        }
        // The strict predicate is known not to hold for this family; it is
        // recorded as an observation, not a failure.
        FpfResult strict = is_strictly_fpf(res);
        nlohmann::json d = base;
        d["holds"] = strict.holds;
        if (!strict.holds) d["fixing_element"] = strict.witness[0];
        out.push_back({hp + "strict-fpf", CheckStatus::kObservation, d});
      }
    });
    for (const HResult& r : results)
      for (const Check& c : r.checks) switch (c.status) {
          case CheckStatus::kPass:
            report.add_pass(c.name, c.witness);
            break;
          case CheckStatus::kFail:
            report.add_fail(c.name, c.witness);
            break;
          case CheckStatus::kObservation:
            report.add_observation(c.name, c.witness);
            break;
        }
  }
  return report;
}

// --- abelian isotropy ---------------------------------------------------------------

ClassFunction beta_abelian(const GroupPtr& g, int r, int p_override) {
  if (r < 1) throw PreconditionError("beta_abelian: r must be >= 1");
  int p;
  if (g->order() == 1) {
    p = p_override > 0 ? p_override : 2;
  } else {
    auto pp = g->p_group_prime();
    if (!pp) throw PreconditionError("beta_abelian: not a p-group");
    p = *pp;
  }
  Int pr = 1;
  for (int i = 0; i < r; ++i) pr = checked_mul(pr, p);
  const ClassPartition& cls = g->classes();
  std::vector<Cyclotomic> values(cls.num_classes());
  for (int c = 0; c < cls.num_classes(); ++c) {
    int rep = cls.representatives[c];
    Int v = 0;
    if (rep == 0)
      v = checked_mul(static_cast<Int>(g->order()), pr - 1);
    else if (g->element_order(rep) == p)
      v = -g->order();
    values[c] = Cyclotomic(Rational(v));
  }
  return ClassFunction(g, std::move(values));
}

SphereActionModel isotropy_of_product(const GroupPtr& g,
                                      const std::vector<ClassFunction>& factors,
                                      int order_cap) {
  SphereActionModel model;
  model.group = g;
  model.factors = factors;
  model.lattice = all_subgroups(g, order_cap);
  std::vector<DimensionFunction> dims;
  for (const ClassFunction& chi : factors) {
    if (chi.group() != g)
      throw Error("isotropy_of_product: factor on a different group");
    dims.push_back(dimension_function(chi, order_cap));  // validates character
    model.sphere_dims.push_back(
        checked_sub(checked_mul(2, chi.degree().rational_value().num()), 1));
  }
  const SubgroupLattice& lat = *model.lattice;
  std::vector<char> listed(lat.num_classes, 0);
  for (int cid = 0; cid < lat.num_classes; ++cid) {
    int rep = lat.class_representative[cid];
    bool fixed = true;
    for (const DimensionFunction& n : dims)
      if (n.at_class(cid) <= 0) fixed = false;
    if (!fixed) continue;
    bool full_stabilizer = true;
    for (int over : lat.minimal_overgroups(rep)) {
      int ocid = lat.subgroups[over].conjugacy_class_id;
      bool drops = false;
      for (const DimensionFunction& n : dims)
        if (n.at_class(ocid) < n.at_class(cid)) drops = true;
      if (!drops) {
        full_stabilizer = false;
        break;
      }
    }
    if (full_stabilizer) listed[cid] = 1;
  }
  for (int cid = 0; cid < lat.num_classes; ++cid)
    if (listed[cid]) {
      model.isotropy_class_ids.push_back(cid);
      const SubgroupRecord& rec = lat.subgroups[lat.class_representative[cid]];
      model.rk_x = std::max(model.rk_x, rec.rank);
      if (!rec.is_abelian) model.all_isotropy_abelian = false;
    }
  return model;
}

SphereActionModel center_sphere_family(const GroupPtr& g, int order_cap) {
  require_odd_p_group(g, "center_sphere_family");
  ElementSet z = g->center_set();
  SubgroupView zview = materialize(g, z);
  AbelianBasis zbasis = abelian_basis(*zview.group);
  const int s = static_cast<int>(zbasis.orders.size());
  auto ztable = character_table(zview.group);

  // Search tuples of linear characters of the center, lexicographically,
  // for a jointly faithful family (equivalently: the product of the induced
  // spheres is free on the center).
  std::vector<int> chosen;
  std::vector<int> idx(s, 0);
  auto joint_faithful = [&](const std::vector<int>& tuple) {
    for (int x = 1; x < zview.group->order(); ++x) {
      bool all_one = true;
      for (int i : tuple)
        if (ztable->irreducibles()[i].at_element(x) != Cyclotomic::one())
          all_one = false;
      if (all_one) return false;
    }
    return true;
  };
  std::function<bool(int, int)> search = [&](int pos, int start) {
    if (pos == s) return joint_faithful(chosen);
    for (int i = start; i < ztable->size(); ++i) {
      chosen.push_back(i);
      if (search(pos + 1, i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!search(0, 0))
    throw NoSuitableCharactersError(
        "center_sphere_family: no jointly faithful family of central linear "
        "characters for " + g->label());

  std::vector<ClassFunction> factors;
  for (int i : chosen)
    factors.push_back(induce_from(ztable->irreducibles()[i], zview));
  SphereActionModel model = isotropy_of_product(g, factors, order_cap);

  int expected = elementary_abelian_rank(*g) - make_record(*g, z).rank;
  if (model.rk_x != expected)
    throw Error("center_sphere_family: isotropy rank " +
                std::to_string(model.rk_x) + " does not drop to rank(G) - "
                "rank(Z(G)) = " + std::to_string(expected));
  return model;
}

VerificationReport verify_abelian(const GroupPtr& g, const SphereActionModel& x,
                                  const AbelianOptions& opts) {
  int p = require_odd_p_group(g, "verify_abelian");
  const int r = x.rk_x;
  VerificationReport report("abelian-isotropy", g->label());
  report.set_parameter("p", p);
  report.set_parameter("order", g->order());
  report.set_parameter("rk_x", r);
  report.set_parameter("isotropy_classes",
                       static_cast<int>(x.isotropy_class_ids.size()));
  if (r < 1) {
    report.add_observation("free-action",
                           {{"note", "rk_x = 0: the model is already free"}});
    return report;
  }
  ClassFunction beta = beta_abelian(g, r);
  GroupPtr target = abelian_group(std::vector<int>(r, p));
  ClassFunction rho0 = reduced_regular(target);

  struct AResult {
    std::vector<Check> checks;
  };
  std::vector<AResult> results(x.isotropy_class_ids.size());
  parallel_for(
      static_cast<int>(x.isotropy_class_ids.size()), opts.threads, [&](int k) {
        int cid = x.isotropy_class_ids[k];
        const SubgroupRecord& rec =
            x.lattice->subgroups[x.lattice->class_representative[cid]];
        std::string ap = "a" + pad4(cid) + "/";
        auto& out = results[k].checks;
        nlohmann::json base = {{"order", rec.order}, {"class_id", cid}};
        if (!rec.is_abelian)
          throw NonAbelianIsotropyError(
              "verify_abelian: isotropy class " + std::to_string(cid) +
              " is not abelian");
        SubgroupView aview = materialize(g, rec.member_set);

        // A_p: identity plus the order-p elements (a subgroup since A is
        // abelian).
        ElementSet ap_local(aview.group->order());
        for (int e = 0; e < aview.group->order(); ++e)
          if (e == 0 || aview.group->element_order(e) == p) ap_local.set(e);
        SubgroupView apview = materialize(aview.group, ap_local);
        int s = 0;
        for (int t = apview.group->order(); t > 1; t /= p) ++s;
        if (s > r)
          throw RankExceedsTargetError(
              "verify_abelian: rank of the p-torsion exceeds rk_x");

        AbelianBasis basis = abelian_basis(*apview.group);
        // Coordinates of A_p over its basis, mapped onto the first s
        // coordinates of the rank-r target.
        auto eta_for_basis = [&](const std::vector<int>& gens) {
          std::vector<int> fmap(apview.group->order(), -1);
          std::vector<int> tuple(gens.size(), 0);
          for (;;) {
            int src = 0;
            Int dst = 0;
            for (size_t i2 = 0; i2 < gens.size(); ++i2) {
              src = apview.group->mul(
                  src, apview.group->power(gens[i2], tuple[i2]));
            }
            for (int i2 = 0; i2 < r; ++i2) {
              Int digit =
                  i2 < static_cast<int>(gens.size()) ? tuple[i2] : 0;
              dst = dst * p + digit;
            }
            fmap[src] = static_cast<int>(dst);
            int i2 = static_cast<int>(gens.size()) - 1;
            while (i2 >= 0 && ++tuple[i2] == p) tuple[i2--] = 0;
            if (i2 < 0) break;
          }
          const ClassPartition& apcls = apview.group->classes();
          std::vector<Cyclotomic> rho_vals(apcls.num_classes());
          for (int c = 0; c < apcls.num_classes(); ++c)
            rho_vals[c] = rho0.at_element(fmap[apcls.representatives[c]]);
          ClassFunction rho(apview.group, std::move(rho_vals));
          Rational scale(
              checked_mul(static_cast<Int>(g->order()),
                          apview.group->order()),
              aview.group->order());
          return Cyclotomic(scale) * induce_from(rho, apview);
        };
        ClassFunction eta = eta_for_basis(basis.generators);
        ClassFunction res = restrict_to(beta, aview);

        if (eta == res) {
          out.push_back({ap + "eta-equals-restriction", CheckStatus::kPass,
                         base});
        } else {
          nlohmann::json d = base;
          for (size_t c = 0; c < res.values().size(); ++c)
            if (res.values()[c] != eta.values()[c]) {
              d["class"] = static_cast<int>(c);
              d["eta"] = eta.values()[c].str();
              d["beta"] = res.values()[c].str();
              break;
            }
          out.push_back({ap + "eta-equals-restriction", CheckStatus::kFail, d});
        }
        Decomposition dec = decompose(eta);
        if (dec.is_character) {
          out.push_back({ap + "eta-is-character", CheckStatus::kPass, base});
        } else {
          nlohmann::json d = base;
          d["bad_irreducible"] = dec.witness_index;
          d["multiplicity"] = dec.multiplicities[dec.witness_index].str();
          out.push_back({ap + "eta-is-character", CheckStatus::kFail, d});
        }
        if (opts.sweep_injections && basis.generators.size() > 1) {
          std::vector<int> perm = basis.generators;
          bool stable = true;
          std::sort(perm.begin(), perm.end());
          int tried = 0;
          do {
            if (eta_for_basis(perm) != eta) stable = false;
          } while (++tried < 6 && std::next_permutation(perm.begin(), perm.end()));
          nlohmann::json d = base;
          d["stable"] = stable;
          out.push_back({ap + "injection-sweep",
                         stable ? CheckStatus::kPass : CheckStatus::kFail,
                         stable ? base : d});
        }
        if (rec.is_elementary_abelian && rec.rank == r && dec.is_character) {
          ClassFunction expect =
              Cyclotomic(Rational(g->order())) * reduced_regular(aview.group);
          if (res == expect) {
            out.push_back({ap + "multiple-of-reduced-regular",
                           CheckStatus::kPass, base});
          } else {
            nlohmann::json d = base;
            d["note"] = "restriction is not |G| times the reduced regular";
            out.push_back({ap + "multiple-of-reduced-regular",
                           CheckStatus::kFail, d});
          }
          FpfResult top = is_top_rank_fpf(res, r);
          if (top.holds) {
            out.push_back({ap + "top-rank-fpf", CheckStatus::kPass, base});
          } else {
            nlohmann::json d = base;
            d["fixed_subgroup"] = members_json(top.witness);
            out.push_back({ap + "top-rank-fpf", CheckStatus::kFail, d});
          }
        }
      });
  for (const AResult& r2 : results)
    for (const Check& c : r2.checks) switch (c.status) {
        case CheckStatus::kPass:
          report.add_pass(c.name, c.witness);
          break;
        case CheckStatus::kFail:
          report.add_fail(c.name, c.witness);
          break;
        case CheckStatus::kObservation:
          report.add_observation(c.name, c.witness);
          break;
      }
  return report;
}

// --- representation families -----------------------------------------------------

RepresentationFamily family_from_character(const GroupPtr& g,
                                           const SphereActionModel& x,
                                           const ClassFunction& chi,
                                           const std::string& provenance) {
  RepresentationFamily f;
  f.group = g;
  f.provenance = provenance;
  for (int cid : x.isotropy_class_ids) {
    const SubgroupRecord& rec =
        x.lattice->subgroups[x.lattice->class_representative[cid]];
    SubgroupView view = materialize(g, rec.member_set);
    f.assignment.emplace(cid, restrict_to(chi, view));
    f.views.emplace(cid, std::move(view));
  }
  return f;
}

VerificationReport check_family(const GroupPtr& g, const SphereActionModel& x,
                                const RepresentationFamily& f, int rank,
                                int threads) {
  VerificationReport report("family-gluing-hypotheses", g->label());
  report.set_parameter("rank", rank);
  report.set_parameter("rk_x", x.rk_x);
  for (int cid : x.isotropy_class_ids)
    if (!f.assignment.count(cid))
      throw MissingAssignmentError("check_family: isotropy class " +
                                   std::to_string(cid) + " has no character");

  const SubgroupLattice& lat = *x.lattice;
  // Conjugators: subgroup index -> element carrying the class representative
  // onto it.
  std::vector<int> conjugator(lat.subgroups.size(), -1);
  std::vector<char> is_isotropy_class(lat.num_classes, 0);
  for (int cid : x.isotropy_class_ids) is_isotropy_class[cid] = 1;
  for (int cid : x.isotropy_class_ids) {
    int rep = lat.class_representative[cid];
    std::vector<int> orbit{rep};
    conjugator[rep] = 0;
    for (size_t head = 0; head < orbit.size(); ++head) {
      const ElementSet& cur = lat.subgroups[orbit[head]].member_set;
      for (int s : g->generators()) {
        ElementSet img(g->order());
        for (int y : cur.members()) img.set(g->conjugate(s, y));
        int j = *lat.index_of(img);
        if (conjugator[j] < 0) {
          conjugator[j] = g->mul(s, conjugator[orbit[head]]);
          orbit.push_back(j);
        }
      }
    }
  }

  // Character property for each assignment.
  for (int cid : x.isotropy_class_ids) {
    Decomposition dec = decompose(f.assignment.at(cid));
    if (dec.is_character)
      report.add_pass("family/character/c" + pad4(cid));
    else
      report.add_fail("family/character/c" + pad4(cid),
                      {{"bad_irreducible", dec.witness_index}});
  }

  // Restriction compatibility over every inclusion of isotropy subgroups
  // (each subgroup transported from its class representative).
  std::vector<int> iso_indices;
  for (size_t i = 0; i < lat.subgroups.size(); ++i)
    if (lat.subgroups[i].conjugacy_class_id >= 0 &&
        is_isotropy_class[lat.subgroups[i].conjugacy_class_id])
      iso_indices.push_back(static_cast<int>(i));

  std::vector<std::pair<int, int>> incl;
  for (int ti : iso_indices)
    for (int si : iso_indices) {
      if (si == ti) continue;
      if (lat.subgroups[si].order % lat.subgroups[ti].order != 0) continue;
      if (lat.subgroups[ti].member_set.is_subset_of(
              lat.subgroups[si].member_set))
        incl.emplace_back(ti, si);
    }
  std::vector<std::pair<bool, nlohmann::json>> verdicts(incl.size());
  parallel_for(static_cast<int>(incl.size()), threads, [&](int k) {
    auto [ti, si] = incl[k];
    int tcid = lat.subgroups[ti].conjugacy_class_id;
    int scid = lat.subgroups[si].conjugacy_class_id;
    const ClassFunction& fs = f.assignment.at(scid);
    const ClassFunction& ft = f.assignment.at(tcid);
    const SubgroupView& sview = f.views.at(scid);
    const SubgroupView& tview = f.views.at(tcid);
    int u = conjugator[si];
    int v = conjugator[ti];
    int uinv = g->inv(u);
    int vinv = g->inv(v);
    bool ok = true;
    nlohmann::json witness;
    for (int t : lat.subgroups[ti].member_set.members()) {
      // Value on the transported big character vs the transported small one.
      Cyclotomic big =
          fs.at_element(sview.from_parent[g->conjugate(uinv, t)]);
      Cyclotomic small =
          ft.at_element(tview.from_parent[g->conjugate(vinv, t)]);
      if (big != small) {
        ok = false;
        witness = {{"element", t},
                   {"sub_index", ti},
                   {"over_index", si},
                   {"restricted", big.str()},
                   {"assigned", small.str()}};
        break;
      }
    }
    verdicts[k] = {ok, std::move(witness)};
  });
  int bad = 0;
  nlohmann::json first_witness;
  for (size_t k = 0; k < verdicts.size(); ++k)
    if (!verdicts[k].first && bad++ == 0) first_witness = verdicts[k].second;
  if (bad == 0)
    report.add_pass("family/restriction-compatibility",
                    {{"inclusion_pairs", static_cast<int>(incl.size())}});
  else
    report.add_fail("family/restriction-compatibility", first_witness);

  // Top-rank freeness for isotropy classes of maximal rank.
  for (int cid : x.isotropy_class_ids) {
    const SubgroupRecord& rec =
        lat.subgroups[lat.class_representative[cid]];
    if (rec.rank != x.rk_x) continue;
    FpfResult top = is_top_rank_fpf(f.assignment.at(cid), rank);
    if (top.holds)
      report.add_pass("family/top-rank-fpf/c" + pad4(cid));
    else
      report.add_fail("family/top-rank-fpf/c" + pad4(cid),
                      {{"fixed_subgroup", members_json(top.witness)}});
  }
  if (report.all_passed())
    report.add_observation(
        "family/conclusion",
        {{"note", "gluing hypotheses verified; the glued sphere drops the "
                  "isotropy rank to rk_x - 1 (cited construction)"}});
  return report;
}

// --- amalgam obstruction -----------------------------------------------------------

EffectiveCharacters effective_characters(const GroupPtr& e, Int degree_bound) {
  auto pp = e->p_group_prime();
  if (!pp)
    throw BadGroupError("effective_characters: not a p-group");
  int p = *pp;
  ElementSet z = e->center_set();
  if (e->order() != p * p * p || z.count() != p || e->is_abelian() ||
      e->exponent() != p)
    throw BadGroupError(
        "effective_characters: expected an extraspecial group of order p^3 "
        "and exponent p");

  auto table = character_table(e);
  auto lattice = all_subgroups(e);
  EffectiveCharacters out;
  out.group = e;
  // An irreducible is allowed iff its fixed space vanishes on every rank-2
  // elementary abelian subgroup class; a combination is effective iff it
  // only uses allowed irreducibles (fixed dimensions add).
  std::vector<char> allowed(table->size(), 1);
  for (int i = 0; i < table->size(); ++i) {
    DimensionFunction n = dimension_function(table->irreducibles()[i]);
    for (int cid = 0; cid < lattice->num_classes; ++cid) {
      const SubgroupRecord& rec =
          lattice->subgroups[lattice->class_representative[cid]];
      if (rec.is_elementary_abelian && rec.rank == 2 && n.at_class(cid) > 0)
        allowed[i] = 0;
    }
  }
  for (int i = 0; i < table->size(); ++i)
    if (allowed[i]) out.allowed_irreducibles.push_back(i);

  // Enumerate multiplicity vectors over the allowed set with total degree in
  // [1, degree_bound].
  std::vector<Int> current(table->size(), 0);
  std::function<void(size_t, Int)> rec_enum = [&](size_t pos, Int degree) {
    if (pos == out.allowed_irreducibles.size()) {
      if (degree >= 1) out.vectors.push_back(current);
      return;
    }
    int idx = out.allowed_irreducibles[pos];
    Int d = table->degrees()[idx];
    for (Int a = 0; degree + a * d <= degree_bound; ++a) {
      current[idx] = a;
      rec_enum(pos + 1, degree + a * d);
    }
    current[idx] = 0;
  };
  rec_enum(0, 0);
  std::sort(out.vectors.begin(), out.vectors.end());
  return out;
}

VerificationReport amalgam_obstruction(int p, Int degree_bound, int threads) {
  if (p % 2 == 0 || p < 3)
    throw PreconditionError("amalgam_obstruction: p must be an odd prime");
  if (degree_bound <= 0) degree_bound = 2 * Int(p) * p;

  VerificationReport report("amalgam-obstruction", "extraspecial(" +
                                                       std::to_string(p) +
                                                       ",3,exp " +
                                                       std::to_string(p) + ")");
  report.set_parameter("p", p);
  report.set_parameter("degree_bound", degree_bound);

  GroupPtr e = extraspecial_group(p, 3, p);
  GroupPtr e2 = extraspecial_group(p, 3, p);
  auto table = character_table(e);
  auto table2 = character_table(e2);

  EffectiveCharacters eff = effective_characters(e, degree_bound);
  EffectiveCharacters eff2 = effective_characters(e2, degree_bound);
  report.set_parameter("effective_count",
                       static_cast<int>(eff.vectors.size()));

  // Structural shape of the effective set: exactly the p-1 faithful
  // degree-p irreducibles, all vanishing outside the center.
  {
    bool shape_ok =
        static_cast<int>(eff.allowed_irreducibles.size()) == p - 1;
    ElementSet z = e->center_set();
    for (int i : eff.allowed_irreducibles) {
      if (table->degrees()[i] != p) shape_ok = false;
      const ClassFunction& chi = table->irreducibles()[i];
      for (int x = 0; x < e->order(); ++x)
        if (!z.test(x) && !chi.at_element(x).is_zero()) shape_ok = false;
    }
    if (shape_ok)
      report.add_pass("effective/faithful-degree-p-shape",
                      {{"allowed", eff.allowed_irreducibles}});
    else
      report.add_fail("effective/faithful-degree-p-shape",
                      {{"allowed", eff.allowed_irreducibles}});
  }

  // Glued subgroup: the center on one side, the least noncentral order-p
  // subgroup (trivial center intersection) on the other.
  ElementSet z_side = e->center_set();
  ElementSet noncentral(e2->order());
  {
    ElementSet z2 = e2->center_set();
    ElementSet best(e2->order());
    bool found = false;
    for (int x = 1; x < e2->order(); ++x) {
      if (z2.test(x) || e2->element_order(x) != p) continue;
      ElementSet cand = generated_subgroup(*e2, {x});
      if (!found || cand < best) {
        best = cand;
        found = true;
      }
    }
    noncentral = best;
    if (noncentral.intersect(z2).count() != 1)
      throw Error("amalgam: glued subgroup meets the far center");
  }

  // Fixed dimensions across the glued subgroup: every effective character on
  // the central side has n = 0, every effective character through the
  // noncentral side has n = deg / p >= 1.
  auto fixed_dim = [&](const GroupPtr& grp,
                       const std::shared_ptr<const CharacterTable>& tab,
                       const std::vector<Int>& vec, const ElementSet& sub) {
    Cyclotomic acc;
    for (int x : sub.members())
      for (size_t i = 0; i < vec.size(); ++i)
        if (vec[i] != 0)
          acc += Rational(vec[i]) * tab->irreducibles()[i].at_element(x);
    (void)grp;
    Cyclotomic v = Cyclotomic(Rational(1, sub.count())) * acc;
    return v.rational_value();
  };
  auto degree_of = [&](const std::shared_ptr<const CharacterTable>& tab,
                       const std::vector<Int>& vec) {
    Int d = 0;
    for (size_t i = 0; i < vec.size(); ++i)
      d = checked_add(d, checked_mul(vec[i], tab->degrees()[i]));
    return d;
  };

  std::vector<Rational> nz(eff.vectors.size());
  std::vector<Int> degz(eff.vectors.size());
  bool central_all_zero = true;
  for (size_t i = 0; i < eff.vectors.size(); ++i) {
    nz[i] = fixed_dim(e, table, eff.vectors[i], z_side);
    degz[i] = degree_of(table, eff.vectors[i]);
    if (!nz[i].is_zero()) central_all_zero = false;
  }
  std::vector<Rational> nn(eff2.vectors.size());
  std::vector<Int> degn(eff2.vectors.size());
  bool noncentral_all_positive = true;
  for (size_t i = 0; i < eff2.vectors.size(); ++i) {
    nn[i] = fixed_dim(e2, table2, eff2.vectors[i], noncentral);
    degn[i] = degree_of(table2, eff2.vectors[i]);
    if (nn[i] != Rational(degn[i], p) || nn[i] <= Rational(0))
      noncentral_all_positive = false;
  }
  if (central_all_zero)
    report.add_pass("glued/central-side-fixed-dimension-zero");
  else
    report.add_fail("glued/central-side-fixed-dimension-zero",
                    {{"note", "some effective character has fixed vectors on "
                              "the center"}});
  if (noncentral_all_positive)
    report.add_pass("glued/noncentral-side-fixed-dimension-deg-over-p");
  else
    report.add_fail("glued/noncentral-side-fixed-dimension-deg-over-p",
                    {{"note", "fixed dimension differs from deg/p"}});

  // Exhaustive pair comparison: the agreement set must be empty.
  std::vector<char> agree(eff.vectors.size(), 0);
  parallel_for(static_cast<int>(eff.vectors.size()), threads, [&](int i) {
    for (size_t j = 0; j < eff2.vectors.size(); ++j)
      if (degz[i] == degn[j] && nz[i] == nn[j]) agree[i] = 1;
  });
  int agreements = 0;
  for (char a : agree) agreements += a;
  if (agreements == 0)
    report.add_pass("glued/agreement-set-empty",
                    {{"pairs_compared",
                      static_cast<Int>(eff.vectors.size()) *
                          static_cast<Int>(eff2.vectors.size())}});
  else
    report.add_fail("glued/agreement-set-empty", {{"agreements", agreements}});
  report.add_observation(
      "glued/structural-reason",
      {{"note", "an effective sphere through the center is fixed-point free "
                "there (n = 0) while one through a noncentral line has "
                "n = deg/p >= 1"}});
  return report;
}

}  // namespace grpcert

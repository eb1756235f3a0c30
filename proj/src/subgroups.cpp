#include "grpcert/subgroups.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace grpcert {

namespace {

struct SetHash {
  size_t operator()(const ElementSet& s) const { return s.hash(); }
};

std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_solvable(const FiniteGroup& g) {
  // Derived series on element sets.
  ElementSet cur(g.order());
  for (int x = 0; x < g.order(); ++x) cur.set(x);
  for (;;) {
    if (cur.count() == 1) return true;
    std::vector<int> m = cur.members();
    std::vector<int> comms;
    for (int a : m)
      for (int b : m)
        comms.push_back(g.mul(g.mul(a, b), g.inv(g.mul(b, a))));
    ElementSet next = generated_subgroup(g, comms);
    if (next == cur) return false;
    cur = next;
  }
}

}  // namespace

ElementSet generated_subgroup(const FiniteGroup& g,
                              const std::vector<int>& gens) {
  ElementSet s(g.order());
  s.set(0);
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int h : gens) {
        int y = g.mul(x, h);
        if (!s.test(y)) {
          s.set(y);
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return s;
}

ElementSet centralizer(const FiniteGroup& g, const ElementSet& s) {
  std::vector<int> m = s.members();
  ElementSet c(g.order());
  for (int x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (int y : m)
      if (g.mul(x, y) != g.mul(y, x)) {
        ok = false;
        break;
      }
    if (ok) c.set(x);
  }
  return c;
}

SubgroupRecord make_record(const FiniteGroup& g, const ElementSet& members) {
  SubgroupRecord r;
  r.member_set = members;
  r.order = members.count();
  std::vector<int> m = members.members();
  // Greedy generating set inside the subgroup.
  ElementSet closed(g.order());
  closed.set(0);
  for (int x : m) {
    if (closed.test(x)) continue;
    r.generator_indices.push_back(x);
    closed = generated_subgroup(g, r.generator_indices);
  }
  if (closed != members)
    throw Error("make_record: member set is not closed");
  r.is_abelian = true;
  for (int a : r.generator_indices)
    for (int b : r.generator_indices)
      if (g.mul(a, b) != g.mul(b, a)) r.is_abelian = false;
  int p = r.order > 1 ? prime_divisors(r.order)[0] : 0;
  r.is_elementary_abelian =
      r.is_abelian && (r.order == 1 ||
                       (prime_divisors(r.order).size() == 1 &&
                        std::all_of(m.begin(), m.end(), [&](int x) {
                          return x == 0 || g.element_order(x) == p;
                        })));
  r.is_normal = true;
  for (int s : g.generators())
    for (int h : r.generator_indices)
      if (!members.test(g.conjugate(s, h))) r.is_normal = false;
  r.rank = elementary_abelian_rank_within(g, members);
  return r;
}

SubgroupRecord center_and_centralizer(const GroupPtr& g, const ElementSet& s) {
  return make_record(*g, centralizer(*g, s));
}

// --- elementary abelian rank -------------------------------------------------

namespace {

// DFS over elementary abelian p-subgroups inside a member set, visiting each
// subgroup once (memo on member sets). The callback sees (members, rank).
template <typename F>
void walk_elementary_abelian(const FiniteGroup& g, const ElementSet& inside,
                             int p, F&& visit) {
  std::unordered_set<ElementSet, SetHash> seen;
  // candidates: elements of order p in the set
  std::vector<int> all = inside.members();
  std::vector<int> orderp;
  for (int x : all)
    if (g.element_order(x) == p) orderp.push_back(x);

  struct Frame {
    ElementSet members;
    std::vector<int> gens;
  };
  ElementSet triv(g.order());
  triv.set(0);
  std::vector<Frame> stack{{triv, {}}};
  seen.insert(triv);
  visit(triv, 0);
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    for (int x : orderp) {
      if (f.members.test(x)) continue;
      bool commutes = true;
      for (int h : f.gens)
        if (g.mul(x, h) != g.mul(h, x)) {
          commutes = false;
          break;
        }
      if (!commutes) continue;
      // Extend: members * x^j for j < p.
      ElementSet ext(g.order());
      std::vector<int> mem = f.members.members();
      int xp = 0;
      bool contained = true;
      for (int j = 0; j < p && contained; ++j) {
        for (int y : mem) {
          int z = g.mul(y, xp);
          if (!inside.test(z)) {
            contained = false;
            break;
          }
          ext.set(z);
        }
        xp = g.mul(xp, x);
      }
      if (!contained) continue;
      if (seen.insert(ext).second) {
        Frame nf;
        nf.members = ext;
        nf.gens = f.gens;
        nf.gens.push_back(x);
        visit(ext, static_cast<int>(nf.gens.size()));
        stack.push_back(std::move(nf));
      }
    }
  }
}

}  // namespace

int elementary_abelian_rank_within(const FiniteGroup& g,
                                   const ElementSet& inside) {
  int best = 0;
  std::vector<int> primes;
  for (int x : inside.members())
    if (x != 0) {
      int o = g.element_order(x);
      for (int p : prime_divisors(o))
        if (std::find(primes.begin(), primes.end(), p) == primes.end())
          primes.push_back(p);
    }
  for (int p : primes) {
    walk_elementary_abelian(g, inside, p, [&](const ElementSet&, int rank) {
      best = std::max(best, rank);
    });
  }
  return best;
}

int elementary_abelian_rank(const FiniteGroup& g) {
  ElementSet all(g.order());
  for (int x = 0; x < g.order(); ++x) all.set(x);
  return elementary_abelian_rank_within(g, all);
}

std::vector<ElementSet> elementary_abelian_of_rank(const FiniteGroup& g,
                                                   const ElementSet& inside,
                                                   int rank) {
  std::vector<ElementSet> out;
  for (int p : prime_divisors(g.order() == 1 ? 1 : g.exponent())) {
    walk_elementary_abelian(g, inside, p, [&](const ElementSet& s, int r) {
      if (r == rank) out.push_back(s);
    });
  }
  if (rank == 0) {
    ElementSet triv(g.order());
    triv.set(0);
    out.assign(1, triv);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- lattice ------------------------------------------------------------------

void SubgroupLattice::build_index() {
  hash_index_.clear();
  hash_index_.reserve(subgroups.size());
  for (size_t i = 0; i < subgroups.size(); ++i)
    hash_index_.emplace_back(subgroups[i].member_set.hash(),
                             static_cast<int>(i));
  std::sort(hash_index_.begin(), hash_index_.end());
}

std::optional<int> SubgroupLattice::index_of(const ElementSet& members) const {
  size_t h = members.hash();
  auto it = std::lower_bound(hash_index_.begin(), hash_index_.end(),
                             std::make_pair(h, 0));
  for (; it != hash_index_.end() && it->first == h; ++it)
    if (subgroups[it->second].member_set == members) return it->second;
  return std::nullopt;
}

int SubgroupLattice::class_of(const ElementSet& members) const {
  auto idx = index_of(members);
  if (!idx) throw Error("subgroup not present in lattice");
  return subgroups[*idx].conjugacy_class_id;
}

std::vector<int> SubgroupLattice::minimal_overgroups(int index) const {
  const SubgroupRecord& h = subgroups[index];
  std::vector<int> over;
  for (size_t i = 0; i < subgroups.size(); ++i) {
    const SubgroupRecord& k = subgroups[i];
    if (k.order <= h.order || k.order % h.order != 0) continue;
    if (h.member_set.is_subset_of(k.member_set)) over.push_back(static_cast<int>(i));
  }
  // Keep only minimal elements.
  std::vector<int> minimal;
  for (int i : over) {
    bool min = true;
    for (int j : over) {
      if (j == i) continue;
      if (subgroups[j].order < subgroups[i].order &&
          subgroups[j].member_set.is_subset_of(subgroups[i].member_set)) {
        min = false;
        break;
      }
    }
    if (min) minimal.push_back(i);
  }
  return minimal;
}

std::shared_ptr<const SubgroupLattice> all_subgroups(const GroupPtr& g,
                                                     int order_cap) {
  if (auto cached = g->cached_lattice()) return cached;
  if (g->order() > order_cap)
    throw TooLargeError("subgroup enumeration capped at order " +
                        std::to_string(order_cap) + " (group has order " +
                        std::to_string(g->order()) + ")");

  const FiniteGroup& gr = *g;
  const int n = gr.order();
  std::unordered_set<ElementSet, SetHash> seen;
  // Discovered subgroups with their generating sets, keyed by order.
  std::map<int, std::vector<std::pair<ElementSet, std::vector<int>>>> layers;

  ElementSet triv(n);
  triv.set(0);
  seen.insert(triv);
  layers[1].push_back({triv, {}});

  std::vector<int> primes = prime_divisors(n);
  // x^p for each prime, precomputed.
  std::map<int, std::vector<int>> ppow;
  for (int p : primes) {
    std::vector<int> v(n);
    for (int x = 0; x < n; ++x) v[x] = gr.power(x, p);
    ppow[p] = std::move(v);
  }

  for (auto it = layers.begin(); it != layers.end(); ++it) {
    for (size_t ui = 0; ui < it->second.size(); ++ui) {
      // Copy: the layer vector may reallocate while we append to others.
      ElementSet umem = it->second[ui].first;
      std::vector<int> ugens = it->second[ui].second;
      for (int p : primes) {
        if (static_cast<long>(it->first) * p > n) continue;
        const std::vector<int>& xp = ppow[p];
        for (int x = 1; x < n; ++x) {
          if (umem.test(x) || !umem.test(xp[x])) continue;
          bool normalizes = true;
          for (int h : ugens)
            if (!umem.test(gr.conjugate(x, h))) {
              normalizes = false;
              break;
            }
          if (!normalizes) continue;
          // V = U u Ux u ... u Ux^(p-1)
          ElementSet v(n);
          std::vector<int> mem = umem.members();
          int pw = 0;
          for (int j = 0; j < p; ++j) {
            for (int y : mem) v.set(gr.mul(y, pw));
            pw = gr.mul(pw, x);
          }
          if (seen.insert(v).second) {
            std::vector<int> vgens = ugens;
            vgens.push_back(x);
            layers[it->first * p].push_back({v, std::move(vgens)});
          }
        }
      }
    }
  }

  if (!is_solvable(gr)) {
    // Perfect subgroups are invisible to cyclic extensions; close the found
    // set under pairwise joins, which reaches every subgroup.
    std::vector<std::pair<ElementSet, std::vector<int>>> pool;
    for (auto& [o, v] : layers)
      for (auto& e : v) pool.push_back(e);
    for (size_t i = 0; i < pool.size(); ++i)
      for (size_t j = 0; j < i; ++j) {
        std::vector<int> gens = pool[i].second;
        gens.insert(gens.end(), pool[j].second.begin(), pool[j].second.end());
        ElementSet join = generated_subgroup(gr, gens);
        if (seen.insert(join).second) {
          pool.push_back({join, gens});
          layers[join.count()].push_back({join, gens});
        }
      }
  }

  auto lat = std::make_shared<SubgroupLattice>();
  lat->group = g;
  for (auto& [o, v] : layers)
    for (auto& [mem, gens] : v) {
      SubgroupRecord r;
      r.member_set = mem;
      r.order = o;
      r.generator_indices = gens;
      lat->subgroups.push_back(std::move(r));
    }
  std::sort(lat->subgroups.begin(), lat->subgroups.end(),
            [](const SubgroupRecord& a, const SubgroupRecord& b) {
              if (a.order != b.order) return a.order < b.order;
              return a.member_set < b.member_set;
            });

  // Flags.
  for (SubgroupRecord& r : lat->subgroups) {
    r.is_abelian = true;
    for (int a : r.generator_indices)
      for (int b : r.generator_indices)
        if (gr.mul(a, b) != gr.mul(b, a)) r.is_abelian = false;
    if (r.order == 1) {
      r.is_elementary_abelian = true;
    } else {
      std::vector<int> pd = prime_divisors(r.order);
      r.is_elementary_abelian =
          r.is_abelian && pd.size() == 1 &&
          std::all_of(r.generator_indices.begin(), r.generator_indices.end(),
                      [&](int x) { return gr.element_order(x) == pd[0]; });
    }
    r.is_normal = true;
    for (int s : gr.generators())
      for (int h : r.generator_indices)
        if (!r.member_set.test(gr.conjugate(s, h))) r.is_normal = false;
  }

  // Ranks: scan contained elementary abelian records (they are all present).
  {
    std::vector<std::pair<int, const ElementSet*>> elabs;  // (rank ~ log_p order)
    for (const SubgroupRecord& r : lat->subgroups)
      if (r.is_elementary_abelian && r.order > 1) {
        int p = prime_divisors(r.order)[0];
        int rank = 0;
        for (int o = r.order; o > 1; o /= p) ++rank;
        elabs.push_back({rank, &r.member_set});
      }
    std::sort(elabs.begin(), elabs.end(),
              [](auto& a, auto& b) { return a.first > b.first; });
    for (SubgroupRecord& r : lat->subgroups) {
      r.rank = 0;
      for (auto& [rank, mem] : elabs) {
        if (rank <= r.rank) break;
        if (mem->is_subset_of(r.member_set)) r.rank = rank;
      }
    }
  }

  // Conjugacy classes of subgroups: orbits under conjugation by generators.
  {
    std::unordered_map<ElementSet, int, SetHash> pos;
    for (size_t i = 0; i < lat->subgroups.size(); ++i)
      pos[lat->subgroups[i].member_set] = static_cast<int>(i);
    int next_id = 0;
    for (size_t i = 0; i < lat->subgroups.size(); ++i) {
      if (lat->subgroups[i].conjugacy_class_id >= 0) continue;
      int id = next_id++;
      lat->class_representative.push_back(static_cast<int>(i));
      std::vector<int> orbit{static_cast<int>(i)};
      lat->subgroups[i].conjugacy_class_id = id;
      for (size_t head = 0; head < orbit.size(); ++head) {
        const ElementSet& cur = lat->subgroups[orbit[head]].member_set;
        for (int s : gr.generators()) {
          ElementSet img(n);
          for (int y : cur.members()) img.set(gr.conjugate(s, y));
          int j = pos.at(img);
          if (lat->subgroups[j].conjugacy_class_id < 0) {
            lat->subgroups[j].conjugacy_class_id = id;
            orbit.push_back(j);
          }
        }
      }
    }
    lat->num_classes = next_id;
  }

  lat->build_index();
  g->cache_lattice(lat);
  return g->cached_lattice();
}

// --- materialization ----------------------------------------------------------

SubgroupView materialize(const GroupPtr& g, const ElementSet& members) {
  SubgroupView view;
  view.parent = g;
  view.to_parent = members.members();  // ascending; identity 0 stays first
  const int k = static_cast<int>(view.to_parent.size());
  view.from_parent.assign(g->order(), -1);
  for (int i = 0; i < k; ++i) view.from_parent[view.to_parent[i]] = i;
  std::vector<int> flat(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      int prod = g->mul(view.to_parent[i], view.to_parent[j]);
      int local = view.from_parent[prod];
      if (local < 0) throw Error("materialize: set is not closed");
      flat[static_cast<size_t>(i) * k + j] = local;
    }
  view.group = make_group_from_validated_table(
      std::move(flat), k, g->label() + ":sub" + std::to_string(k));
  return view;
}

SubgroupView SubgroupView::whole_group(const GroupPtr& g) {
  SubgroupView view;
  view.parent = g;
  view.group = g;
  view.to_parent.resize(g->order());
  view.from_parent.resize(g->order());
  for (int i = 0; i < g->order(); ++i) {
    view.to_parent[i] = i;
    view.from_parent[i] = i;
  }
  return view;
}

// --- normal Q and the subgroup classification ---------------------------------

std::vector<SubgroupRecord> all_normal_q(const GroupPtr& g) {
  auto p_opt = g->p_group_prime();
  if (!p_opt || *p_opt == 2)
    throw NoSuchQError("requires an odd p-group");
  int p = *p_opt;
  ElementSet z = g->center_set();
  SubgroupRecord zr = make_record(*g, z);
  if (zr.rank != 1)
    throw NoSuchQError("requires a center of rank 1 (got rank " +
                       std::to_string(zr.rank) + ")");
  if (elementary_abelian_rank(*g) != 3)
    throw NoSuchQError("requires a group of rank 3");

  // The unique order-p subgroup of the cyclic-socle center.
  int zgen = -1;
  for (int x : z.members())
    if (x != 0 && g->element_order(x) == p) {
      zgen = x;
      break;
    }
  if (zgen < 0) throw NoSuchQError("center has no element of order p");

  std::vector<ElementSet> found;
  for (int x = 1; x < g->order(); ++x) {
    if (g->element_order(x) != p) continue;
    if (g->mul(x, zgen) != g->mul(zgen, x)) continue;
    ElementSet q = generated_subgroup(*g, {zgen, x});
    if (q.count() != p * p) continue;  // x inside <zgen>
    bool normal = true;
    for (int s : g->generators())
      if (!q.test(g->conjugate(s, x))) {
        normal = false;
        break;
      }
    if (normal) found.push_back(q);
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (found.empty())
    throw NoSuchQError(
        "no normal (p,p) subgroup meets the center: refutation witness for " +
        g->label());
  std::vector<SubgroupRecord> out;
  out.reserve(found.size());
  for (const ElementSet& q : found) out.push_back(make_record(*g, q));
  return out;
}

SubgroupRecord find_normal_q(const GroupPtr& g) { return all_normal_q(g)[0]; }

std::string to_string(SubgroupClass c) {
  switch (c) {
    case SubgroupClass::kCyclic:
      return "Cyclic";
    case SubgroupClass::kInCentralizerOfQ:
      return "InCentralizerOfQ";
    case SubgroupClass::kAbelianMaximalCyclic:
      return "AbelianMaximalCyclic";
    case SubgroupClass::kModular:
      return "ModularM";
  }
  return "?";
}

Classification classify_subgroup(const GroupPtr& g, const SubgroupRecord& q,
                                 const SubgroupRecord& h) {
  ElementSet z = g->center_set();
  ElementSet hz = h.member_set.intersect(z);
  if (hz.count() != 1)
    throw PreconditionError("classify_subgroup: H meets the center");
  auto p_opt = g->p_group_prime();
  if (!p_opt) throw PreconditionError("classify_subgroup: not a p-group");
  int p = *p_opt;

  Classification out;
  out.p = p;

  // 1) cyclic
  for (int x : h.member_set.members()) {
    if (g->element_order(x) == h.order) {
      out.tag = SubgroupClass::kCyclic;
      out.maximal_cyclic_order = h.order;
      out.witness_generator = x;
      return out;
    }
  }
  // 2) inside the centralizer of Q
  ElementSet cq = centralizer(*g, q.member_set);
  if (h.member_set.is_subset_of(cq)) {
    out.tag = SubgroupClass::kInCentralizerOfQ;
    return out;
  }
  // A cyclic subgroup of index p: element of order |H|/p generating a
  // maximal cyclic subgroup.
  int maxgen = -1;
  for (int x : h.member_set.members())
    if (g->element_order(x) * p == h.order) {
      maxgen = x;
      break;
    }
  if (maxgen >= 0 && h.is_abelian) {
    // 3) abelian of type (p, p^(n-1))
    out.tag = SubgroupClass::kAbelianMaximalCyclic;
    out.maximal_cyclic_order = h.order / p;
    out.witness_generator = maxgen;
    return out;
  }
  if (maxgen >= 0 && !h.is_abelian && p % 2 == 1) {
    // 4) modular M(p^n): nonabelian with a cyclic maximal subgroup, p odd
    out.tag = SubgroupClass::kModular;
    out.maximal_cyclic_order = h.order / p;
    out.witness_generator = maxgen;
    return out;
  }
  throw UnclassifiableError(
      "subgroup of order " + std::to_string(h.order) +
      " matches no classification shape: refutation witness");
}

}  // namespace grpcert

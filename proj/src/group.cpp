#include "grpcert/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "grpcert/characters.hpp"
#include "grpcert/subgroups.hpp"

namespace grpcert {

// --- ElementSet -------------------------------------------------------------

int ElementSet::count() const {
  int c = 0;
  for (std::uint64_t w : words_) c += __builtin_popcountll(w);
  return c;
}

bool ElementSet::is_subset_of(const ElementSet& o) const {
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool ElementSet::intersects(const ElementSet& o) const {
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

ElementSet ElementSet::intersect(const ElementSet& o) const {
  ElementSet r(size_);
  for (size_t i = 0; i < words_.size(); ++i)
    r.words_[i] = words_[i] & o.words_[i];
  return r;
}

ElementSet ElementSet::unite(const ElementSet& o) const {
  ElementSet r(size_);
  for (size_t i = 0; i < words_.size(); ++i)
    r.words_[i] = words_[i] | o.words_[i];
  return r;
}

std::vector<int> ElementSet::members() const {
  std::vector<int> out;
  out.reserve(count());
  for (size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t v = words_[w];
    while (v) {
      int b = __builtin_ctzll(v);
      out.push_back(static_cast<int>(w * 64 + b));
      v &= v - 1;
    }
  }
  return out;
}

size_t ElementSet::hash() const {
  size_t h = 0xcbf29ce484222325ull;
  for (std::uint64_t w : words_) {
    h ^= w;
    h *= 0x100000001b3ull;
  }
  return h;
}

bool operator<(const ElementSet& a, const ElementSet& b) {
  for (size_t i = 0; i < a.words_.size() && i < b.words_.size(); ++i) {
    if (a.words_[i] == b.words_[i]) continue;
    // Differing word: the set containing the lowest differing element first
    // is the smaller one.
    std::uint64_t diff = a.words_[i] ^ b.words_[i];
    std::uint64_t low = diff & (~diff + 1);
    return (a.words_[i] & low) != 0;
  }
  return a.words_.size() < b.words_.size();
}

// --- FiniteGroup ------------------------------------------------------------

namespace {

std::vector<int> greedy_generators(const std::vector<int>& table, int n) {
  std::vector<int> gens;
  std::vector<char> closed(n, 0);
  closed[0] = 1;
  int closed_count = 1;
  auto close_with = [&](int g) {
    std::vector<int> frontier;
    for (int x = 0; x < n; ++x)
      if (closed[x]) frontier.push_back(x);
    // products of existing closure with the new generator, breadth first
    std::vector<int> queue = frontier;
    while (!queue.empty()) {
      std::vector<int> next;
      for (int x : queue) {
        int y = table[static_cast<size_t>(x) * n + g];
        if (!closed[y]) {
          closed[y] = 1;
          ++closed_count;
          next.push_back(y);
        }
        for (int h : gens) {
          int z = table[static_cast<size_t>(x) * n + h];
          if (!closed[z]) {
            closed[z] = 1;
            ++closed_count;
            next.push_back(z);
          }
        }
      }
      queue = std::move(next);
    }
  };
  for (int x = 1; x < n && closed_count < n; ++x) {
    if (closed[x]) continue;
    gens.push_back(x);
    close_with(x);
  }
  return gens;
}

}  // namespace

GroupPtr make_group_from_validated_table(std::vector<int> table, int order,
                                         const std::string& label) {
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->order_ = order;
  g->table_ = std::move(table);
  g->label_ = label;
  g->finish_construction();
  return g;
}

void FiniteGroup::finish_construction() {
  const int n = order_;
  inverse_.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (mul(x, y) == 0) {
        inverse_[x] = y;
        break;
      }
    }
  }
  element_order_.assign(n, 1);
  long ex = 1;
  for (int x = 1; x < n; ++x) {
    int k = 1;
    int y = x;
    while (y != 0) {
      y = mul(y, x);
      ++k;
    }
    element_order_[x] = k;
    ex = std::lcm(ex, static_cast<long>(k));
  }
  exponent_ = static_cast<int>(ex);
  generators_ = greedy_generators(table_, n);
}

int FiniteGroup::power(int x, long e) const {
  long m = e % element_order_[x];
  if (m < 0) m += element_order_[x];
  int acc = 0;
  int base = x;
  while (m > 0) {
    if (m & 1) acc = mul(acc, base);
    base = mul(base, base);
    m >>= 1;
  }
  return acc;
}

bool FiniteGroup::is_abelian() const {
  for (int a : generators_)
    for (int b : generators_)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::optional<int> FiniteGroup::p_group_prime() const {
  if (order_ < 2) return std::nullopt;
  int m = order_;
  int p = 0;
  for (int q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      p = q;
      break;
    }
  }
  if (p == 0) p = m;
  while (m % p == 0) m /= p;
  if (m != 1) return std::nullopt;
  return p;
}

const ClassPartition& FiniteGroup::classes() const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    if (classes_) return *classes_;
  }
  auto part = std::make_shared<ClassPartition>();
  const int n = order_;
  part->class_of.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    if (part->class_of[x] >= 0) continue;
    int id = part->num_classes();
    part->representatives.push_back(x);
    int size = 0;
    for (int g = 0; g < n; ++g) {
      int y = conjugate(g, x);
      if (part->class_of[y] < 0) {
        part->class_of[y] = id;
        ++size;
      }
    }
    part->class_sizes.push_back(size);
  }
  std::lock_guard<std::mutex> lock(cache_mu_);
  if (!classes_) classes_ = part;
  return *classes_;
}

ElementSet FiniteGroup::center_set() const {
  ElementSet z(order_);
  for (int x = 0; x < order_; ++x) {
    bool central = true;
    for (int g : generators_) {
      if (mul(x, g) != mul(g, x)) {
        central = false;
        break;
      }
    }
    if (central) z.set(x);
  }
  return z;
}

std::shared_ptr<const SubgroupLattice> FiniteGroup::cached_lattice() const {
  std::lock_guard<std::mutex> lock(cache_mu_);
  return lattice_;
}
void FiniteGroup::cache_lattice(
    std::shared_ptr<const SubgroupLattice> l) const {
  std::lock_guard<std::mutex> lock(cache_mu_);
  if (!lattice_) lattice_ = std::move(l);
}
std::shared_ptr<const CharacterTable> FiniteGroup::cached_table() const {
  std::lock_guard<std::mutex> lock(cache_mu_);
  return table_cache_;
}
void FiniteGroup::cache_table(std::shared_ptr<const CharacterTable> t) const {
  std::lock_guard<std::mutex> lock(cache_mu_);
  if (!table_cache_) table_cache_ = std::move(t);
}

// --- construction from raw data ---------------------------------------------

GroupPtr FiniteGroup::from_cayley_table(
    const std::vector<std::vector<int>>& table, const std::string& label) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw NotAGroupError("empty table", 0, 0, 0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(table[i].size()) != n)
      throw NotAGroupError("table is not square", i, 0, 0);
    for (int j = 0; j < n; ++j)
      if (table[i][j] < 0 || table[i][j] >= n)
        throw NotAGroupError("entry out of range", i, j, table[i][j]);
  }
  // Locate the two-sided identity.
  int e = -1;
  for (int c = 0; c < n && e < 0; ++c) {
    bool ok = true;
    for (int x = 0; x < n; ++x)
      if (table[c][x] != x || table[x][c] != x) {
        ok = false;
        break;
      }
    if (ok) e = c;
  }
  if (e < 0) throw NotAGroupError("no two-sided identity", -1, -1, -1);

  // Relabel so the identity sits at index 0 (swap 0 <-> e).
  auto relab = [&](int x) { return x == 0 ? e : (x == e ? 0 : x); };
  std::vector<int> flat(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      flat[static_cast<size_t>(i) * n + j] = relab(table[relab(i)][relab(j)]);

  auto at = [&](int i, int j) { return flat[static_cast<size_t>(i) * n + j]; };
  // Inverses.
  for (int x = 0; x < n; ++x) {
    bool has = false;
    for (int y = 0; y < n; ++y)
      if (at(x, y) == 0 && at(y, x) == 0) {
        has = true;
        break;
      }
    if (!has) throw NotAGroupError("element without two-sided inverse", x, -1, -1);
  }
  // Associativity: exhaustive for small orders, deterministic sampling above.
  if (n <= 512) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (at(at(a, b), c) != at(a, at(b, c)))
            throw NotAGroupError("associativity fails", a, b, c);
  } else {
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_int_distribution<int> dist(0, n - 1);
    for (int t = 0; t < 200000; ++t) {
      int a = dist(rng), b = dist(rng), c = dist(rng);
      if (at(at(a, b), c) != at(a, at(b, c)))
        throw NotAGroupError("associativity fails", a, b, c);
    }
  }
  return make_group_from_validated_table(
      std::move(flat), n, label.empty() ? "cayley" : label);
}

GroupPtr FiniteGroup::from_permutations(int degree,
                                        const std::vector<std::vector<int>>& gens,
                                        const std::string& label,
                                        int order_cap) {
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != degree)
      throw BadSpecError("permutation degree mismatch");
    std::vector<char> seen(degree, 0);
    for (int v : g) {
      if (v < 0 || v >= degree || seen[v])
        throw BadSpecError("generator is not a bijection");
      seen[v] = 1;
    }
  }
  std::vector<int> identity(degree);
  std::iota(identity.begin(), identity.end(), 0);
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> elems;
  elems.push_back(identity);
  index[identity] = 0;
  for (size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : gens) {
      std::vector<int> prod(degree);
      for (int i = 0; i < degree; ++i) prod[i] = elems[head][g[i]];
      if (index.emplace(prod, static_cast<int>(elems.size())).second) {
        elems.push_back(prod);
        if (static_cast<int>(elems.size()) > order_cap)
          throw TooLargeError("permutation closure exceeds order cap " +
                              std::to_string(order_cap));
      }
    }
  }
  const int n = static_cast<int>(elems.size());
  std::vector<int> flat(static_cast<size_t>(n) * n);
  std::vector<int> prod(degree);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < degree; ++i) prod[i] = elems[a][elems[b][i]];
      flat[static_cast<size_t>(a) * n + b] = index.at(prod);
    }
  return make_group_from_validated_table(
      std::move(flat), n, label.empty() ? "perm" : label);
}

// --- catalog -----------------------------------------------------------------

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

GroupPtr heisenberg(int p) {
  // Upper unitriangular 3x3 matrices over F_p, as triples (a, b, c) with
  // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
  const int n = p * p * p;
  std::vector<int> flat(static_cast<size_t>(n) * n);
  auto idx = [&](int a, int b, int c) { return (a * p + b) * p + c; };
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int a2 = 0; a2 < p; ++a2)
          for (int b2 = 0; b2 < p; ++b2)
            for (int c2 = 0; c2 < p; ++c2)
              flat[static_cast<size_t>(idx(a, b, c)) * n + idx(a2, b2, c2)] =
                  idx((a + a2) % p, (b + b2) % p,
                      (c + c2 + a * b2) % p);
  return make_group_from_validated_table(std::move(flat), n, "");
}

// Quotient of g by a normal subgroup given as a member set. Element i of the
// quotient is the least member of the i-th coset (in ascending order of
// least members).
GroupPtr quotient_by_normal(const GroupPtr& g, const ElementSet& normal,
                            const std::string& label) {
  const int n = g->order();
  std::vector<int> coset_of(n, -1);
  std::vector<int> reps;
  std::vector<int> nm = normal.members();
  for (int x = 0; x < n; ++x) {
    if (coset_of[x] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int m : nm) coset_of[g->mul(x, m)] = id;
  }
  const int q = static_cast<int>(reps.size());
  std::vector<int> flat(static_cast<size_t>(q) * q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      flat[static_cast<size_t>(i) * q + j] = coset_of[g->mul(reps[i], reps[j])];
  return make_group_from_validated_table(std::move(flat), q, label);
}

}  // namespace

GroupPtr cyclic_group(int n) {
  if (n < 1) throw BadSpecError("cyclic group order must be positive");
  std::vector<int> flat(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      flat[static_cast<size_t>(i) * n + j] = (i + j) % n;
  return make_group_from_validated_table(std::move(flat), n,
                                         "cyclic(" + std::to_string(n) + ")");
}

GroupPtr abelian_group(const std::vector<int>& factor_orders) {
  if (factor_orders.empty()) throw BadSpecError("abelian() needs factors");
  long n = 1;
  for (int d : factor_orders) {
    if (d < 1) throw BadSpecError("abelian factor must be positive");
    n *= d;
    if (n > 2'000'000) throw TooLargeError("abelian group too large");
  }
  const int order = static_cast<int>(n);
  const int k = static_cast<int>(factor_orders.size());
  std::vector<int> flat(static_cast<size_t>(order) * order);
  std::vector<int> da(k), db(k);
  for (int a = 0; a < order; ++a) {
    int t = a;
    for (int i = k - 1; i >= 0; --i) {
      da[i] = t % factor_orders[i];
      t /= factor_orders[i];
    }
    for (int b = 0; b < order; ++b) {
      t = b;
      for (int i = k - 1; i >= 0; --i) {
        db[i] = t % factor_orders[i];
        t /= factor_orders[i];
      }
      int s = 0;
      for (int i = 0; i < k; ++i)
        s = s * factor_orders[i] + (da[i] + db[i]) % factor_orders[i];
      flat[static_cast<size_t>(a) * order + b] = s;
    }
  }
  std::string label = "abelian(";
  for (int i = 0; i < k; ++i)
    label += (i ? "," : "") + std::to_string(factor_orders[i]);
  label += ")";
  return make_group_from_validated_table(std::move(flat), order, label);
}

GroupPtr extraspecial_group(int p, int width, int exponent) {
  if (!is_prime(p) || p == 2)
    throw BadSpecError("extraspecial constructor requires an odd prime");
  if (width < 3 || width % 2 == 0)
    throw BadSpecError("extraspecial width must be odd and at least 3");
  if (exponent != p)
    throw BadSpecError("only exponent-p extraspecial groups are constructed");
  GroupPtr g = heisenberg(p);
  const int m = (width - 1) / 2;
  for (int i = 1; i < m; ++i) g = central_product(g, heisenberg(p), p);
  std::string label = "extraspecial(" + std::to_string(p) + "," +
                      std::to_string(width) + ",exp " + std::to_string(p) +
                      ")";
  // Rebuild with the label attached.
  std::vector<int> flat(static_cast<size_t>(g->order()) * g->order());
  for (int a = 0; a < g->order(); ++a)
    for (int b = 0; b < g->order(); ++b)
      flat[static_cast<size_t>(a) * g->order() + b] = g->mul(a, b);
  return make_group_from_validated_table(std::move(flat), g->order(), label);
}

GroupPtr modular_group(int p, int n) {
  if (!is_prime(p)) throw BadSpecError("modular group needs a prime");
  if (n < 3) throw BadSpecError("modular group M(p,n) needs n >= 3");
  long q = 1;
  for (int i = 0; i < n - 1; ++i) {
    q *= p;
    if (q * p > 2'000'000) throw TooLargeError("modular group too large");
  }
  const int xo = static_cast<int>(q);  // order of x
  long m = xo / p;                     // p^(n-2)
  const int order = xo * p;
  // (1 + p^(n-2))^j mod x-order, for j < p.
  std::vector<long> twist(p, 1);
  for (int j = 1; j < p; ++j) twist[j] = (twist[j - 1] * ((1 + m) % xo)) % xo;
  auto idx = [&](long a, int b) { return static_cast<int>(a * p + b); };
  std::vector<int> flat(static_cast<size_t>(order) * order);
  for (long a = 0; a < xo; ++a)
    for (int b = 0; b < p; ++b)
      for (long c = 0; c < xo; ++c)
        for (int d = 0; d < p; ++d)
          flat[static_cast<size_t>(idx(a, b)) * order + idx(c, d)] =
              idx((a + c * twist[b]) % xo, (b + d) % p);
  return make_group_from_validated_table(
      std::move(flat), order,
      "M(" + std::to_string(p) + "," + std::to_string(n) + ")");
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  long n = static_cast<long>(a->order()) * b->order();
  if (n > 2'000'000) throw TooLargeError("direct product too large");
  const int order = static_cast<int>(n);
  const int nb = b->order();
  std::vector<int> flat(static_cast<size_t>(order) * order);
  for (int x = 0; x < order; ++x)
    for (int y = 0; y < order; ++y)
      flat[static_cast<size_t>(x) * order + y] =
          a->mul(x / nb, y / nb) * nb + b->mul(x % nb, y % nb);
  return make_group_from_validated_table(
      std::move(flat), order,
      "product(" + a->label() + "*" + b->label() + ")");
}

GroupPtr central_product(const GroupPtr& a, const GroupPtr& b, int d) {
  // Pick central elements of maximal order on both sides (least index among
  // those), identify the order-d subgroups they generate.
  auto max_central = [](const GroupPtr& g) {
    ElementSet z = g->center_set();
    int best = 0;
    for (int x : z.members())
      if (g->element_order(x) > g->element_order(best)) best = x;
    return best;
  };
  int ca = max_central(a);
  int cb = max_central(b);
  int oa = a->element_order(ca);
  int ob = b->element_order(cb);
  if (d == 0) d = std::gcd(oa, ob);
  if (d < 1 || oa % d != 0 || ob % d != 0)
    throw BadSpecError("central product: no common central cyclic of order " +
                       std::to_string(d));
  GroupPtr prod = direct_product(a, b);
  const int nb = b->order();
  int u = a->power(ca, oa / d);
  int v = b->power(cb, ob / d);
  // N = <(u, v^-1)> inside the direct product.
  ElementSet normal(prod->order());
  int gen = u * nb + b->inv(v);
  int cur = 0;
  do {
    normal.set(cur);
    cur = prod->mul(cur, gen);
  } while (cur != 0);
  return quotient_by_normal(
      prod, normal,
      "centralproduct(" + a->label() + "*" + b->label() + ")");
}

std::vector<GroupPtr> standard_catalog(int max_order) {
  std::vector<GroupPtr> all = {
      cyclic_group(3),
      cyclic_group(9),
      cyclic_group(27),
      cyclic_group(81),
      cyclic_group(243),
      cyclic_group(5),
      cyclic_group(25),
      cyclic_group(125),
      cyclic_group(6),
      cyclic_group(8),
      abelian_group({3, 3}),
      abelian_group({9, 3}),
      abelian_group({3, 3, 3}),
      abelian_group({27, 3}),
      abelian_group({9, 9}),
      abelian_group({9, 3, 3}),
      abelian_group({3, 3, 3, 3}),
      abelian_group({27, 9}),
      abelian_group({5, 5}),
      abelian_group({25, 5}),
      abelian_group({5, 5, 5}),
      abelian_group({4, 2}),
      extraspecial_group(3, 3, 3),
      extraspecial_group(3, 5, 3),
      extraspecial_group(5, 3, 5),
      modular_group(3, 3),
      modular_group(3, 4),
      modular_group(3, 5),
      modular_group(5, 3),
      direct_product(extraspecial_group(3, 3, 3), cyclic_group(3)),
      central_product(extraspecial_group(3, 3, 3), cyclic_group(9)),
      central_product(extraspecial_group(3, 3, 3),
                      extraspecial_group(3, 3, 3)),
  };
  std::vector<GroupPtr> out;
  for (GroupPtr& g : all)
    if (g->order() <= max_order) out.push_back(std::move(g));
  return out;
}

AbelianBasis abelian_basis(const FiniteGroup& g) {
  if (!g.is_abelian()) throw BadGroupError("abelian_basis: group not abelian");
  AbelianBasis out;
  if (g.order() == 1) return out;
  // Element of maximal order; its span splits off as a direct factor.
  int top = 1;
  for (int x = 2; x < g.order(); ++x)
    if (g.element_order(x) > g.element_order(top)) top = x;
  const int d = g.element_order(top);
  std::vector<int> zpow(d);
  std::vector<int> dlog(g.order(), -1);
  int cur = 0;
  for (int k = 0; k < d; ++k) {
    zpow[k] = cur;
    dlog[cur] = k;
    cur = g.mul(cur, top);
  }
  ElementSet span(g.order());
  for (int k = 0; k < d; ++k) span.set(zpow[k]);

  auto self = g.shared_from_this();
  GroupPtr quot = quotient_by_normal(self, span, "");
  // Quotient element i is the least member of its coset, so it doubles as a
  // preimage in g.
  std::vector<int> reps;
  {
    std::vector<char> seen(g.order(), 0);
    for (int x = 0; x < g.order(); ++x) {
      if (seen[x]) continue;
      reps.push_back(x);
      for (int k = 0; k < d; ++k) seen[g.mul(x, zpow[k])] = 1;
    }
  }
  AbelianBasis sub = abelian_basis(*quot);
  out.generators.push_back(top);
  out.orders.push_back(d);
  for (size_t i = 0; i < sub.generators.size(); ++i) {
    int x = reps[sub.generators[i]];
    int r = sub.orders[i];
    int xr = g.power(x, r);
    int s = dlog[xr];
    if (s < 0 || s % r != 0)
      throw BadGroupError("abelian_basis: lift failed");  // unreachable
    int fixed = g.mul(x, g.inv(g.power(top, s / r)));
    out.generators.push_back(fixed);
    out.orders.push_back(r);
  }
  return out;
}

}  // namespace grpcert

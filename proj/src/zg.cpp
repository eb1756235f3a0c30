#include "grpcert/zg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "grpcert/parallel.hpp"

namespace grpcert {

namespace {

IMat kron(const IMat& a, const IMat& b) {
  IMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

// --- GLattice -------------------------------------------------------------------

struct GLattice::ActionCache {
  std::mutex mu;
  std::vector<std::shared_ptr<const IMat>> mats;
};

GLattice::GLattice(GroupPtr group, int rank, std::vector<IMat> generator_action,
                   std::vector<std::string> basis_labels)
    : group_(std::move(group)),
      rank_(rank),
      gen_action_(std::move(generator_action)),
      labels_(std::move(basis_labels)),
      cache_(std::make_shared<ActionCache>()) {
  if (gen_action_.size() != group_->generators().size())
    throw Error("lattice needs one action matrix per group generator");
  for (const IMat& m : gen_action_)
    if (m.rows() != rank_ || m.cols() != rank_)
      throw Error("action matrix has wrong shape");
  // BFS words over the generators.
  parent_.assign(group_->order(), {-1, -1});
  std::vector<int> queue{0};
  parent_[0] = {0, -1};
  for (size_t head = 0; head < queue.size(); ++head) {
    int x = queue[head];
    for (size_t gi = 0; gi < group_->generators().size(); ++gi) {
      int y = group_->mul(x, group_->generators()[gi]);
      if (parent_[y].first < 0) {
        parent_[y] = {x, static_cast<int>(gi)};
        queue.push_back(y);
      }
    }
  }
  cache_->mats.assign(group_->order(), nullptr);
}

const IMat& GLattice::action_of(int element) const {
  if (!cache_) throw Error("action_of on an empty lattice");
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (cache_->mats[element]) return *cache_->mats[element];
  }
  IMat result;
  if (element == 0) {
    result = IMat::Identity(rank_, rank_);
  } else {
    auto [prev, gi] = parent_[element];
    result = action_of(prev) * gen_action_[gi];
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->mats[element])
    cache_->mats[element] = std::make_shared<IMat>(std::move(result));
  return *cache_->mats[element];
}

IMat GLattice::norm_of(const ElementSet& members) const {
  IMat n = IMat::Zero(rank_, rank_);
  for (int x : members.members()) n += action_of(x);
  return n;
}

void GLattice::validate() const {
  // The BFS products define action_of; the homomorphism property holds iff
  // action_of(x * s) == action_of(x) * action_of(s) for all x and
  // generators s. Invertibility over Z follows from
  // action_of(x) action_of(x^-1) = I.
  for (int x = 0; x < group_->order(); ++x) {
    for (size_t gi = 0; gi < group_->generators().size(); ++gi) {
      int s = group_->generators()[gi];
      if (action_of(group_->mul(x, s)) != action_of(x) * gen_action_[gi])
        throw Error("lattice action is not a homomorphism");
    }
    if (action_of(x) * action_of(group_->inv(x)) !=
        IMat::Identity(rank_, rank_))
      throw Error("lattice action is not invertible over the integers");
  }
}

GLattice trivial_lattice(const GroupPtr& g, int rank) {
  std::vector<IMat> acts(g->generators().size(), IMat::Identity(rank, rank));
  return GLattice(g, rank, std::move(acts));
}

GLattice regular_lattice(const GroupPtr& g) {
  const int n = g->order();
  std::vector<IMat> acts;
  for (int s : g->generators()) {
    IMat m = IMat::Zero(n, n);
    for (int x = 0; x < n; ++x) m(g->mul(s, x), x) = 1;
    acts.push_back(std::move(m));
  }
  std::vector<std::string> labels;
  for (int x = 0; x < n; ++x) labels.push_back("e" + std::to_string(x));
  return GLattice(g, n, std::move(acts), std::move(labels));
}

GLattice coset_lattice(const GroupPtr& g, const ElementSet& h_members) {
  std::vector<int> coset_of(g->order(), -1);
  int cosets = 0;
  std::vector<int> hm = h_members.members();
  for (int x = 0; x < g->order(); ++x) {
    if (coset_of[x] >= 0) continue;
    for (int h : hm) coset_of[g->mul(x, h)] = cosets;
    ++cosets;
  }
  std::vector<IMat> acts;
  for (int s : g->generators()) {
    IMat m = IMat::Zero(cosets, cosets);
    std::vector<char> done(g->order(), 0);
    for (int x = 0; x < g->order(); ++x) {
      if (done[x]) continue;
      for (int h : hm) done[g->mul(x, h)] = 1;
      m(coset_of[g->mul(s, x)], coset_of[x]) = 1;
    }
    acts.push_back(std::move(m));
  }
  return GLattice(g, cosets, std::move(acts));
}

GLattice tensor_lattice(const GLattice& a, const GLattice& b) {
  if (a.group() != b.group())
    throw Error("tensor_lattice: different groups");
  std::vector<IMat> acts;
  for (size_t gi = 0; gi < a.generator_action().size(); ++gi)
    acts.push_back(kron(a.generator_action()[gi], b.generator_action()[gi]));
  return GLattice(a.group(), a.rank() * b.rank(), std::move(acts));
}

// --- complexes ------------------------------------------------------------------

void GChainComplex::validate() const {
  const int n = length();
  for (int k = 1; k <= n; ++k) {
    if (d[k].rows() != modules[k - 1].rank() || d[k].cols() != modules[k].rank())
      throw Error("boundary shape mismatch at degree " + std::to_string(k));
    if (k >= 2 && !(d[k - 1] * d[k]).isZero())
      throw Error("d o d != 0 at degree " + std::to_string(k));
    for (size_t gi = 0; gi < group->generators().size(); ++gi)
      if (modules[k - 1].generator_action()[gi] * d[k] !=
          d[k] * modules[k].generator_action()[gi])
        throw Error("boundary not equivariant at degree " + std::to_string(k));
  }
}

void FreeResolution::verify_exactness() const {
  complex.validate();
  const int n = complex.length();
  if (augmentation.rows() != 1 ||
      augmentation.cols() != complex.modules[0].rank())
    throw Error("augmentation shape mismatch");
  // Surjectivity of the augmentation: content 1.
  Int g = 0;
  for (int j = 0; j < augmentation.cols(); ++j)
    g = gcd_int(g, augmentation(0, j));
  if (g != 1) throw Error("augmentation is not surjective");
  if (n >= 1 && !(augmentation * complex.d[1]).isZero())
    throw Error("augmentation does not kill the image of d_1");
  // Exactness at degree 0: ker(aug) = im(d_1); at degrees 1..n-1:
  // ker(d_k) = im(d_{k+1}). Both directions via integral solvability.
  for (int k = 0; k < n; ++k) {
    const IMat upper = complex.d[k + 1];
    IMat kernel = k == 0 ? kernel_basis(augmentation) : kernel_basis(complex.d[k]);
    // im(upper) subseteq ker: holds by the complex property; equality needs
    // ker subseteq im over Z.
    try {
      solve_exact(upper, kernel);
    } catch (const Error&) {
      throw Error("resolution not exact at degree " + std::to_string(k));
    }
  }
}

namespace {

// The two-periodic resolution data of a cyclic group of order m, length n:
// boundaries alternate (t - 1) and the norm.
struct PeriodicFactor {
  int m;
  IMat shift;  // t acting on Z[C_m]
  IMat d_odd;  // t - 1
  IMat d_even; // 1 + t + ... + t^(m-1)
  IMat aug;    // 1 x m of ones
};

PeriodicFactor periodic_factor(int m) {
  PeriodicFactor f;
  f.m = m;
  f.shift = IMat::Zero(m, m);
  for (int x = 0; x < m; ++x) f.shift((x + 1) % m, x) = 1;
  f.d_odd = f.shift - IMat::Identity(m, m);
  f.d_even = IMat::Zero(m, m);
  IMat powt = IMat::Identity(m, m);
  for (int j = 0; j < m; ++j) {
    f.d_even += powt;
    powt = f.shift * powt;
  }
  f.aug = IMat::Ones(1, m);
  return f;
}

// A resolution over an abstract product of cyclic factors, tracked per
// factor so arbitrary products of factor generators can act.
struct FactorResolution {
  std::vector<int> orders;
  // modules[k]: list of summands, each a vector of per-factor degrees.
  std::vector<std::vector<std::vector<int>>> summands;
  std::vector<int> ranks;
  // boundary matrices between total degrees
  std::vector<IMat> d;
  IMat aug;
};

}  // namespace

FreeResolution resolution_from_parts(const GroupPtr& g,
                                     std::vector<GLattice> modules,
                                     std::vector<IMat> boundaries,
                                     IMat augmentation) {
  FreeResolution res;
  res.complex.group = g;
  res.complex.modules = std::move(modules);
  res.complex.d = std::move(boundaries);
  res.augmentation = std::move(augmentation);
  for (const GLattice& m : res.complex.modules) m.validate();
  res.verify_exactness();
  return res;
}

FreeResolution free_resolution(const GroupPtr& g, int length) {
  if (!g->is_abelian())
    throw UnsupportedGroupError(
        "free_resolution: built-in resolutions cover abelian groups only; "
        "supply one explicitly for " + g->label());
  AbelianBasis basis = abelian_basis(*g);
  const int nf = static_cast<int>(basis.orders.size());

  // Degrees of the factor complexes contributing to each total degree.
  std::vector<std::vector<std::vector<int>>> summands(length + 1);
  {
    std::vector<int> tuple(std::max(nf, 1), 0);
    std::function<void(int, int)> walk = [&](int pos, int remaining) {
      if (pos == nf) {
        int total = 0;
        for (int i = 0; i < nf; ++i) total += tuple[i];
        summands[total].push_back(std::vector<int>(tuple.begin(),
                                                   tuple.begin() + nf));
        return;
      }
      for (int d2 = 0; d2 <= remaining; ++d2) {
        tuple[pos] = d2;
        walk(pos + 1, remaining - d2);
      }
      tuple[pos] = 0;
    };
    if (nf == 0) {
      for (int k = 0; k <= 0; ++k) summands[0].push_back({});
    } else {
      walk(0, length);
    }
  }
  // Lexicographic summand order within a degree for reproducibility.
  for (auto& list : summands) std::sort(list.begin(), list.end());

  std::vector<PeriodicFactor> factors;
  for (int o : basis.orders) factors.push_back(periodic_factor(o));
  const int group_order = g->order();

  auto summand_rank = [&]() { return group_order; };
  std::vector<int> ranks(length + 1, 0);
  for (int k = 0; k <= length; ++k)
    ranks[k] = static_cast<int>(summands[k].size()) * summand_rank();
  if (g->order() == 1) {
    // Trivial group: one rank-1 module per degree.
    for (int k = 0; k <= length; ++k) ranks[k] = 1;
  }

  // Basis of a summand: the tensor of the factor group-ring bases, ordered
  // mixed-radix by factor. We materialize the boundary blocks directly.
  auto factor_identity = [&](int i) {
    return IMat::Identity(factors[i].m, factors[i].m);
  };
  auto block_for = [&](const std::vector<int>& from, int which) {
    // Boundary of factor `which` applied in the tensor, with Koszul sign
    // (-1)^(sum of degrees of earlier factors).
    IMat block = IMat::Identity(1, 1);
    for (int i = 0; i < nf; ++i) {
      IMat piece;
      if (i == which)
        piece = (from[i] % 2 == 1) ? factors[i].d_odd : factors[i].d_even;
      else
        piece = factor_identity(i);
      block = kron(block, piece);
    }
    int sign = 0;
    for (int i = 0; i < which; ++i) sign += from[i];
    if (sign % 2 == 1) block = -block;
    return block;
  };

  std::vector<IMat> d(length + 1);
  d[0] = IMat(0, 0);
  for (int k = 1; k <= length; ++k) {
    IMat m = IMat::Zero(ranks[k - 1], ranks[k]);
    if (g->order() > 1) {
      for (size_t sj = 0; sj < summands[k].size(); ++sj) {
        const std::vector<int>& from = summands[k][sj];
        for (int which = 0; which < nf; ++which) {
          if (from[which] == 0) continue;
          std::vector<int> to = from;
          to[which] -= 1;
          auto it = std::lower_bound(summands[k - 1].begin(),
                                     summands[k - 1].end(), to);
          int si = static_cast<int>(it - summands[k - 1].begin());
          m.block(si * group_order, static_cast<int>(sj) * group_order,
                  group_order, group_order) = block_for(from, which);
        }
      }
    }
    d[k] = std::move(m);
  }

  // Group action: per factor generator, the shift on its own tensor slot;
  // a group generator acts as the product given by its coordinates.
  std::vector<std::vector<int>> coords(g->order(),
                                       std::vector<int>(std::max(nf, 1), 0));
  {
    std::vector<int> tuple(std::max(nf, 1), 0);
    for (;;) {
      int x = 0;
      for (int i = 0; i < nf; ++i)
        x = g->mul(x, g->power(basis.generators[i], tuple[i]));
      coords[x] = tuple;
      int i = nf - 1;
      while (i >= 0 && ++tuple[i] == basis.orders[i]) tuple[i--] = 0;
      if (i < 0) break;
    }
  }
  auto summand_action = [&](int gen_element) {
    IMat act = IMat::Identity(1, 1);
    for (int i = 0; i < nf; ++i) {
      IMat p = IMat::Identity(factors[i].m, factors[i].m);
      for (int t = 0; t < coords[gen_element][i]; ++t) p = factors[i].shift * p;
      act = kron(act, p);
    }
    return act;
  };

  FreeResolution res;
  res.complex.group = g;
  for (int k = 0; k <= length; ++k) {
    std::vector<IMat> acts;
    for (int s : g->generators()) {
      IMat block = summand_action(s);
      IMat full = IMat::Zero(ranks[k], ranks[k]);
      int count = g->order() == 1 ? 1 : static_cast<int>(summands[k].size());
      for (int j = 0; j < count; ++j)
        full.block(j * block.rows(), j * block.cols(), block.rows(),
                   block.cols()) = block;
      acts.push_back(std::move(full));
    }
    if (g->generators().empty()) acts.clear();
    res.complex.modules.emplace_back(g, ranks[k], std::move(acts));
  }
  res.complex.d = std::move(d);
  IMat aug = IMat::Ones(1, ranks[0]);
  res.augmentation = std::move(aug);
  res.verify_exactness();
  return res;
}

Syzygy syzygy(const FreeResolution& p, int n) {
  if (n < 0 || n > p.complex.length())
    throw Error("syzygy degree out of range");
  Syzygy out;
  out.degree = n;
  const GroupPtr& g = p.complex.group;
  if (n == 0) {
    out.lattice = trivial_lattice(g, 1);
    out.inclusion = IMat::Identity(1, 1);
    return out;
  }
  const IMat boundary = n == 1 ? p.augmentation : p.complex.d[n - 1];
  IMat k = kernel_basis(boundary);
  std::vector<IMat> acts;
  for (size_t gi = 0; gi < g->generators().size(); ++gi) {
    const IMat& big = p.complex.modules[n - 1].generator_action()[gi];
    acts.push_back(solve_exact(k, big * k));
  }
  out.lattice = GLattice(g, static_cast<int>(k.cols()), std::move(acts));
  out.inclusion = std::move(k);
  return out;
}

std::vector<Cocycle> surjective_cocycles(const FreeResolution& p, int n,
                                         Int bound) {
  Syzygy omega = syzygy(p, n);
  const int k = omega.lattice.rank();

  // Fixed functionals on the syzygy: rows r with r A_s = r for all
  // generators, i.e. transpose-kernel of the stacked (A_s^T - I).
  auto fixed_rows = [&](const GLattice& lat) {
    const int rk = lat.rank();
    int gens = static_cast<int>(lat.generator_action().size());
    IMat stacked(std::max(gens, 1) * rk, rk);
    if (gens == 0) {
      stacked = IMat::Zero(rk, rk);
    } else {
      for (int gi = 0; gi < gens; ++gi)
        stacked.block(gi * rk, 0, rk, rk) =
            lat.generator_action()[gi].transpose() - IMat::Identity(rk, rk);
    }
    return kernel_basis(stacked);  // rk x f, columns are fixed co-vectors
  };
  IMat fix = fixed_rows(omega.lattice);
  const int f = static_cast<int>(fix.cols());
  std::vector<Cocycle> out;
  if (f == 0) return out;

  // Coboundaries: equivariant functionals on C_{n-1}, restricted along the
  // inclusion.
  IMat fix_big = fixed_rows(p.complex.modules[n - 1]);
  IMat cob = omega.inclusion.transpose() * fix_big;  // k x (#big functionals)
  HermiteResult cob_h = hermite(cob);

  auto reduce_mod_cob = [&](IVec v) {
    for (int j = 0; j < cob_h.rank; ++j) {
      int pr = cob_h.pivot_rows[j];
      Int piv = cob_h.h(pr, j);
      Int q = v(pr) / piv;
      if (v(pr) % piv != 0 && ((v(pr) < 0) != (piv < 0))) --q;
      if (q != 0) v -= q * cob_h.h.col(j);
    }
    return v;
  };

  // Enumerate the fixed lattice points with sup-norm <= bound through the
  // pivot rows of the fixed basis.
  HermiteResult fix_h = hermite(fix);
  if (fix_h.rank != f) throw Error("fixed basis is not independent");
  IMat pivots(f, f);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j) pivots(i, j) = fix(fix_h.pivot_rows[i], j);

  std::vector<IVec> candidates;
  std::vector<Int> box(f, -bound);
  for (;;) {
    IMat v(f, 1);
    for (int i = 0; i < f; ++i) v(i, 0) = box[i];
    bool integral = true;
    IMat c;
    try {
      c = solve_exact(pivots, v);
    } catch (const Error&) {
      integral = false;
    }
    if (integral) {
      IVec r = fix * c.col(0);
      bool in_box = true;
      Int gcd_all = 0;
      for (int i = 0; i < k; ++i) {
        if (r(i) > bound || r(i) < -bound) in_box = false;
        gcd_all = gcd_int(gcd_all, r(i));
      }
      if (in_box && gcd_all == 1) candidates.push_back(r);
    }
    int i = f - 1;
    while (i >= 0 && ++box[i] > bound) box[i--] = -bound;
    if (i < 0) break;
  }

  // Deduplicate modulo coboundaries, deterministically: keep the least
  // representative per residue.
  std::vector<std::pair<std::vector<Int>, IVec>> residues;
  for (const IVec& r : candidates) {
    IVec res = reduce_mod_cob(r);
    std::vector<Int> key(res.data(), res.data() + res.size());
    bool known = false;
    for (auto& [k2, rep] : residues)
      if (k2 == key) {
        // Prefer the lexicographically least original vector.
        for (int i = 0; i < k; ++i) {
          if (r(i) == rep(i)) continue;
          if (r(i) < rep(i)) rep = r;
          break;
        }
        known = true;
        break;
      }
    if (!known) residues.push_back({key, r});
  }
  std::sort(residues.begin(), residues.end(),
            [](const auto& a, const auto& b) {
              for (size_t i = 0; i < a.first.size(); ++i)
                if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
              return false;
            });
  for (auto& [key, rep] : residues) {
    Cocycle c;
    c.map = rep.transpose();
    c.trivial_class =
        std::all_of(key.begin(), key.end(), [](Int v) { return v == 0; });
    out.push_back(std::move(c));
  }
  return out;
}

GChainComplex build_c_zeta(const FreeResolution& p, int n,
                           const IRow& zeta_hat) {
  if (n < 2) throw PreconditionError("build_c_zeta: needs n >= 2");
  const GroupPtr& g = p.complex.group;
  Syzygy omega = syzygy(p, n);
  const int k = omega.lattice.rank();
  if (zeta_hat.cols() != k) throw Error("cocycle has wrong length");

  Int content = 0;
  for (int i = 0; i < k; ++i) content = gcd_int(content, zeta_hat(0, i));
  if (content != 1)
    throw NotSurjectiveError("cocycle is not surjective onto the integers");
  for (size_t gi = 0; gi < g->generators().size(); ++gi)
    if (zeta_hat * omega.lattice.generator_action()[gi] != zeta_hat)
      throw NotEquivariantError("cocycle is not equivariant");

  // L = kernel of the cocycle inside C_{n-1}; pure, so the quotient is free.
  IMat l = omega.inclusion * kernel_basis(zeta_hat);
  CompletionResult comp = pure_completion(l);
  const int big = p.complex.modules[n - 1].rank();
  const int q = big - static_cast<int>(l.cols());
  IMat projection = comp.w_inv.bottomRows(q);  // quotient coordinates
  IMat section = comp.w.rightCols(q);

  std::vector<IMat> acts;
  for (size_t gi = 0; gi < g->generators().size(); ++gi) {
    const IMat& m = p.complex.modules[n - 1].generator_action()[gi];
    // L must be stable or the quotient action is ill-defined.
    solve_exact(l, m * l);
    acts.push_back(projection * m * section);
  }
  GLattice quotient(g, q, std::move(acts));

  GChainComplex c;
  c.group = g;
  for (int i = 0; i <= n - 2; ++i) c.modules.push_back(p.complex.modules[i]);
  c.modules.push_back(std::move(quotient));
  c.d.resize(n);
  c.d[0] = IMat(0, 0);
  for (int i = 1; i <= n - 2; ++i) c.d[i] = p.complex.d[i];
  c.d[n - 1] = p.complex.d[n - 1] * section;
  c.validate();

  std::vector<HomologyGroup> h = homology(c);
  bool ok = h[0].is_free_of_rank(1) && h[n - 1].is_free_of_rank(1);
  for (int i = 1; i < n - 1; ++i)
    if (!h[i].is_zero()) ok = false;
  if (!ok)
    throw Error("truncated complex does not have sphere homology");
  return c;
}

GChainComplex tensor_complexes(const GChainComplex& a, const GChainComplex& b) {
  if (a.group != b.group) throw Error("tensor_complexes: different groups");
  const GroupPtr& g = a.group;
  const int la = a.length();
  const int lb = b.length();
  GChainComplex c;
  c.group = g;

  // Summand (i, j) contributes to degree i + j; order summands by i.
  std::vector<std::vector<std::pair<int, int>>> summands(la + lb + 1);
  for (int i = 0; i <= la; ++i)
    for (int j = 0; j <= lb; ++j) summands[i + j].push_back({i, j});
  std::vector<std::vector<int>> offsets(la + lb + 1);
  std::vector<int> ranks(la + lb + 1, 0);
  for (int k = 0; k <= la + lb; ++k)
    for (auto [i, j] : summands[k]) {
      offsets[k].push_back(ranks[k]);
      ranks[k] += a.modules[i].rank() * b.modules[j].rank();
    }

  for (int k = 0; k <= la + lb; ++k) {
    std::vector<IMat> acts;
    for (size_t gi = 0; gi < g->generators().size(); ++gi) {
      IMat m = IMat::Zero(ranks[k], ranks[k]);
      for (size_t t = 0; t < summands[k].size(); ++t) {
        auto [i, j] = summands[k][t];
        IMat block = kron(a.modules[i].generator_action()[gi],
                          b.modules[j].generator_action()[gi]);
        m.block(offsets[k][t], offsets[k][t], block.rows(), block.cols()) =
            block;
      }
      acts.push_back(std::move(m));
    }
    c.modules.emplace_back(g, ranks[k], std::move(acts));
  }

  c.d.resize(la + lb + 1);
  c.d[0] = IMat(0, 0);
  auto summand_offset = [&](int k, int i, int j) {
    for (size_t t = 0; t < summands[k].size(); ++t)
      if (summands[k][t] == std::make_pair(i, j)) return offsets[k][t];
    throw Error("tensor summand lookup failed");
  };
  for (int k = 1; k <= la + lb; ++k) {
    IMat m = IMat::Zero(ranks[k - 1], ranks[k]);
    for (size_t t = 0; t < summands[k].size(); ++t) {
      auto [i, j] = summands[k][t];
      int col = offsets[k][t];
      if (i >= 1) {
        IMat block =
            kron(a.d[i], IMat::Identity(b.modules[j].rank(),
                                        b.modules[j].rank()));
        m.block(summand_offset(k - 1, i - 1, j), col, block.rows(),
                block.cols()) = block;
      }
      if (j >= 1) {
        IMat block = kron(
            IMat::Identity(a.modules[i].rank(), a.modules[i].rank()), b.d[j]);
        if (i % 2 == 1) block = -block;  // Koszul sign
        m.block(summand_offset(k - 1, i, j - 1), col, block.rows(),
                block.cols()) = block;
      }
    }
    c.d[k] = std::move(m);
  }
  c.validate();
  return c;
}

std::vector<HomologyGroup> homology(const GChainComplex& c) {
  const int n = c.length();
  std::vector<HomologyGroup> out(n + 1);
  for (int k = 0; k <= n; ++k) {
    IMat kernel = k == 0 ? IMat(IMat::Identity(c.modules[0].rank(),
                                               c.modules[0].rank()))
                         : kernel_basis(c.d[k]);
    CokernelShape shape;
    if (k == n) {
      shape.free_rank = static_cast<int>(kernel.cols());
    } else {
      IMat x = solve_exact(kernel, c.d[k + 1]);
      shape = cokernel_shape(x, static_cast<int>(kernel.cols()));
    }
    out[k].free_rank = shape.free_rank;
    out[k].torsion = shape.torsion;
  }
  return out;
}

TateReport tate_01(const GLattice& m, const ElementSet& subgroup) {
  const GroupPtr& g = m.group();
  TateReport report;
  report.subgroup_members = subgroup.members();
  SubgroupRecord rec = make_record(*g, subgroup);
  {
    // The vanishing criterion is stated at p-groups.
    int o = rec.order;
    int primes = 0;
    for (int q = 2; q <= o; ++q)
      if (o % q == 0) {
        ++primes;
        while (o % q == 0) o /= q;
      }
    if (primes > 1) throw PreconditionError("tate_01: subgroup is not a p-group");
  }
  const int rk = m.rank();
  IMat norm = m.norm_of(subgroup);
  const std::vector<int>& gens = rec.generator_indices;

  // Fixed sublattice M^H.
  IMat stacked(std::max<size_t>(gens.size(), 1) * rk, rk);
  if (gens.empty()) {
    stacked = IMat::Zero(rk, rk);
  } else {
    for (size_t i = 0; i < gens.size(); ++i)
      stacked.block(static_cast<int>(i) * rk, 0, rk, rk) =
          m.action_of(gens[i]) - IMat::Identity(rk, rk);
  }
  IMat fixed = kernel_basis(stacked);
  // H^0 = M^H / norm(M).
  {
    IMat x = solve_exact(fixed, norm);
    HermiteResult hx = hermite(x);
    CokernelShape shape =
        cokernel_shape(hx.h, static_cast<int>(fixed.cols()));
    if (shape.free_rank != 0)
      throw Error("tate_01: H^0 has free rank (not annihilated by |H|?)");
    report.h_zero = shape.torsion;
  }
  // H^{-1} = ker(norm) / (augmentation ideal) M.
  {
    IMat kernel = kernel_basis(norm);
    IMat span(rk, static_cast<Eigen::Index>(subgroup.count()) * gens.size() * rk);
    Eigen::Index col = 0;
    for (int h : subgroup.members())
      for (int s : gens) {
        span.block(0, col, rk, rk) =
            m.action_of(h) * (m.action_of(s) - IMat::Identity(rk, rk));
        col += rk;
      }
    IMat span_basis = hermite(span.leftCols(col)).h;
    IMat x = span_basis.cols() == 0
                 ? IMat(kernel.cols(), 0)
                 : solve_exact(kernel, span_basis);
    CokernelShape shape = cokernel_shape(x, static_cast<int>(kernel.cols()));
    if (shape.free_rank != 0)
      throw Error("tate_01: H^{-1} has free rank");
    report.h_minus1 = shape.torsion;
  }
  report.projective = report.h_zero.empty() && report.h_minus1.empty();
  return report;
}

ProjectivityCertificate projectivity_certificate(
    const GChainComplex& c, const std::vector<ElementSet>& subgroups,
    int threads) {
  ProjectivityCertificate out;
  const int nm = static_cast<int>(c.modules.size());
  const int ns = static_cast<int>(subgroups.size());
  out.reports.assign(nm, std::vector<TateReport>(ns));
  parallel_for(nm * ns, threads, [&](int idx) {
    int mi = idx / ns;
    int si = idx % ns;
    out.reports[mi][si] = tate_01(c.modules[mi], subgroups[si]);
  });
  for (const auto& row : out.reports)
    for (const TateReport& r : row)
      if (!r.projective) out.all_projective = false;
  return out;
}

TateReport permutation_tensor_check(const GroupPtr& g,
                                    const ElementSet& h_members,
                                    const GLattice& m) {
  TateReport res_check = tate_01(m, h_members);
  if (!res_check.projective)
    throw PreconditionError(
        "permutation_tensor_check: the restriction to the subgroup is not "
        "projective");
  if (!g->p_group_prime() && g->order() > 1)
    throw UnsupportedGroupError(
        "permutation_tensor_check: implemented for p-groups");
  GLattice tensor = tensor_lattice(coset_lattice(g, h_members), m);
  ElementSet whole(g->order());
  for (int x = 0; x < g->order(); ++x) whole.set(x);
  return tate_01(tensor, whole);
}

SphericalClassCertificate find_spherical_classes(const GroupPtr& g, int n,
                                                 int r, Int bound,
                                                 int threads) {
  SphericalClassCertificate out;
  auto lattice = all_subgroups(g);
  for (int cid = 0; cid < lattice->num_classes; ++cid) {
    const SubgroupRecord& rec =
        lattice->subgroups[lattice->class_representative[cid]];
    if (rec.rank <= r) out.checked_subgroups.push_back(rec.member_set);
  }
  if (r == 0) {
    // A zero-fold product is a point; only the trivial group acts freely.
    if (g->order() == 1) {
      out.found = true;
      out.outcome = "found";
      GChainComplex c;
      c.group = g;
      c.modules.push_back(trivial_lattice(g, 1));
      c.d.push_back(IMat(0, 0));
      out.total_homology = homology(c);
      out.certificate = projectivity_certificate(c, out.checked_subgroups,
                                                 threads);
      return out;
    }
    out.outcome = "search-exhausted";
    return out;
  }

  FreeResolution p = free_resolution(g, n);
  std::vector<Cocycle> cands = surjective_cocycles(p, n, bound);
  if (cands.empty()) {
    out.outcome = "search-exhausted";
    return out;
  }
  std::vector<GChainComplex> pieces;
  for (const Cocycle& c : cands)
    pieces.push_back(build_c_zeta(p, n, c.map));

  // Expected homology of a product of r spheres of dimension n-1.
  auto expected_rank = [&](int k) -> Int {
    if (k % (n - 1) != 0) return 0;
    int s = k / (n - 1);
    if (s > r) return 0;
    Int binom = 1;
    for (int i = 0; i < s; ++i) binom = binom * (r - i) / (i + 1);
    return binom;
  };

  std::vector<int> tuple(r, 0);
  for (;;) {
    GChainComplex c = pieces[tuple[0]];
    for (int i = 1; i < r; ++i) c = tensor_complexes(c, pieces[tuple[i]]);
    std::vector<HomologyGroup> h = homology(c);
    bool hom_ok = true;
    for (int k = 0; k <= c.length(); ++k)
      if (!h[k].is_free_of_rank(expected_rank(k))) hom_ok = false;
    if (hom_ok) {
      ProjectivityCertificate cert =
          projectivity_certificate(c, out.checked_subgroups, threads);
      if (cert.all_projective) {
        out.found = true;
        out.outcome = "found";
        for (int i = 0; i < r; ++i) out.classes.push_back(cands[tuple[i]].map);
        out.total_homology = std::move(h);
        out.certificate = std::move(cert);
        return out;
      }
    }
    int i = r - 1;
    while (i >= 0 && ++tuple[i] == static_cast<int>(cands.size()))
      tuple[i--] = 0;
    if (i < 0) break;
  }
  out.outcome = "search-exhausted";
  return out;
}

}  // namespace grpcert

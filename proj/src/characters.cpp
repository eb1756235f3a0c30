#include "grpcert/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace grpcert {

// --- ClassFunction ------------------------------------------------------------

ClassFunction::ClassFunction(GroupPtr group, std::vector<Cyclotomic> values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != group_->classes().num_classes())
    throw Error("class function has wrong number of values");
}

const Cyclotomic& ClassFunction::at_element(int element) const {
  return values_[group_->classes().class_of[element]];
}

namespace {
void require_same_group(const ClassFunction& a, const ClassFunction& b) {
  if (a.group() != b.group())
    throw Error("class functions live on different groups");
}
}  // namespace

ClassFunction operator+(const ClassFunction& a, const ClassFunction& b) {
  require_same_group(a, b);
  std::vector<Cyclotomic> v = a.values();
  for (size_t i = 0; i < v.size(); ++i) v[i] += b.values()[i];
  return ClassFunction(a.group(), std::move(v));
}

ClassFunction operator-(const ClassFunction& a, const ClassFunction& b) {
  require_same_group(a, b);
  std::vector<Cyclotomic> v = a.values();
  for (size_t i = 0; i < v.size(); ++i) v[i] -= b.values()[i];
  return ClassFunction(a.group(), std::move(v));
}

ClassFunction operator*(const Cyclotomic& c, const ClassFunction& f) {
  std::vector<Cyclotomic> v = f.values();
  for (Cyclotomic& x : v) x *= c;
  return ClassFunction(f.group(), std::move(v));
}

ClassFunction operator*(const ClassFunction& a, const ClassFunction& b) {
  require_same_group(a, b);
  std::vector<Cyclotomic> v = a.values();
  for (size_t i = 0; i < v.size(); ++i) v[i] *= b.values()[i];
  return ClassFunction(a.group(), std::move(v));
}

bool operator==(const ClassFunction& a, const ClassFunction& b) {
  require_same_group(a, b);
  return a.values() == b.values();
}

// --- modular helpers for the Dixon path ----------------------------------------

namespace {

using ModVec = std::vector<long>;
using ModMat = std::vector<ModVec>;

long pow_mod(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = (r * b) % m;
    b = (b * b) % m;
    e >>= 1;
  }
  return r;
}

long inv_mod(long a, long m) { return pow_mod(((a % m) + m) % m, m - 2, m); }

bool is_prime_long(long p) {
  if (p < 2) return false;
  for (long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

long least_primitive_root(long p) {
  std::vector<long> factors;
  long phi = p - 1, m = phi;
  for (long q = 2; q * q <= m; ++q)
    if (m % q == 0) {
      factors.push_back(q);
      while (m % q == 0) m /= q;
    }
  if (m > 1) factors.push_back(m);
  for (long g = 2; g < p; ++g) {
    bool ok = true;
    for (long q : factors)
      if (pow_mod(g, phi / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw Error("no primitive root found");
}

// Characteristic polynomial of a square matrix over F_p via Hessenberg
// reduction; returns coefficients c[0..d] with c[d] = 1 of det(xI - M).
ModVec char_poly_mod(ModMat m, long p) {
  const int d = static_cast<int>(m.size());
  for (int c = 0; c + 2 < d; ++c) {
    int pivot = -1;
    for (int r = c + 1; r < d; ++r)
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != c + 1) {
      std::swap(m[pivot], m[c + 1]);
      for (int r = 0; r < d; ++r) std::swap(m[r][pivot], m[r][c + 1]);
    }
    long piv_inv = inv_mod(m[c + 1][c], p);
    for (int r = c + 2; r < d; ++r) {
      if (m[r][c] == 0) continue;
      long f = (m[r][c] * piv_inv) % p;
      for (int j = 0; j < d; ++j)
        m[r][j] = ((m[r][j] - f * m[c + 1][j]) % p + p) % p;
      for (int i = 0; i < d; ++i)
        m[i][c + 1] = (m[i][c + 1] + f * m[i][r]) % p;
    }
  }
  // det(xI - H) by the Hessenberg recurrence.
  std::vector<ModVec> polys(d + 1);
  polys[0] = {1};
  for (int k = 1; k <= d; ++k) {
    ModVec cur(k + 1, 0);
    // (x - h[k-1][k-1]) * polys[k-1]
    for (int t = 0; t < k; ++t) {
      cur[t + 1] = (cur[t + 1] + polys[k - 1][t]) % p;
      cur[t] = ((cur[t] - m[k - 1][k - 1] * polys[k - 1][t]) % p + p) % p;
    }
    long sub = 1;  // product of subdiagonal entries
    for (int i = 2; i <= k; ++i) {
      sub = (sub * m[k - i + 1][k - i]) % p;
      if (sub == 0) break;
      long coef = (m[k - i][k - 1] * sub) % p;
      if (coef == 0) continue;
      for (int t = 0; t <= k - i; ++t)
        cur[t] = ((cur[t] - coef * polys[k - i][t]) % p + p) % p;
    }
    polys[k] = std::move(cur);
  }
  return polys[d];
}

std::vector<long> poly_roots_mod(const ModVec& poly, long p) {
  std::vector<long> roots;
  for (long x = 0; x < p; ++x) {
    long acc = 0;
    for (int t = static_cast<int>(poly.size()) - 1; t >= 0; --t)
      acc = (acc * x + poly[t]) % p;
    if (acc == 0) roots.push_back(x);
  }
  return roots;
}

// Nullspace basis of m over F_p (columns of the result).
ModMat nullspace_mod(ModMat m, long p) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  std::vector<int> pivot_col_of_row;
  std::vector<char> is_pivot(cols, 0);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[pr], m[r]);
    long inv = inv_mod(m[r][c], p);
    for (int j = c; j < cols; ++j) m[r][j] = (m[r][j] * inv) % p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      long f = m[i][c];
      for (int j = c; j < cols; ++j)
        m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
    }
    pivot_col_of_row.push_back(c);
    is_pivot[c] = 1;
    ++r;
  }
  ModMat basis;
  for (int c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    ModVec v(cols, 0);
    v[c] = 1;
    for (int i = 0; i < r; ++i)
      v[pivot_col_of_row[i]] = (p - m[i][c]) % p;
    basis.push_back(std::move(v));
  }
  // Return as columns.
  ModMat out(cols, ModVec(basis.size(), 0));
  for (size_t j = 0; j < basis.size(); ++j)
    for (int i = 0; i < cols; ++i) out[i][j] = basis[j][i];
  return out;
}

// One common-eigenvector subspace during the Dixon split: unit-pivot column
// basis in the ambient k-dimensional class space.
struct Subspace {
  ModMat basis;            // k x d, column t has 1 at pivot_rows[t]
  std::vector<int> pivot_rows;
  int dim() const { return static_cast<int>(pivot_rows.size()); }
};

Subspace echelonize(ModMat vectors, long p) {
  // vectors: k x d (columns are the spanning set).
  const int k = static_cast<int>(vectors.size());
  const int d = k == 0 ? 0 : static_cast<int>(vectors[0].size());
  Subspace s;
  int col = 0;
  for (int row = 0; row < k && col < d; ++row) {
    int pc = -1;
    for (int c = col; c < d; ++c)
      if (vectors[row][c] != 0) {
        pc = c;
        break;
      }
    if (pc < 0) continue;
    for (int r2 = 0; r2 < k; ++r2) std::swap(vectors[r2][col], vectors[r2][pc]);
    long inv = inv_mod(vectors[row][col], p);
    for (int r2 = 0; r2 < k; ++r2)
      vectors[r2][col] = (vectors[r2][col] * inv) % p;
    for (int c = 0; c < d; ++c) {
      if (c == col || vectors[row][c] == 0) continue;
      long f = vectors[row][c];
      for (int r2 = 0; r2 < k; ++r2)
        vectors[r2][c] =
            ((vectors[r2][c] - f * vectors[r2][col]) % p + p) % p;
    }
    s.pivot_rows.push_back(row);
    ++col;
  }
  if (col != d) throw Error("dixon: dependent eigenvectors");
  s.basis = std::move(vectors);
  return s;
}

struct LiftFailure {};  // internal: retry with the next prime

}  // namespace

// --- character table ------------------------------------------------------------

namespace {

// Character table of an abelian group through its dual: rows are indexed by
// tuples over the cyclic basis, values are roots of unity.
std::vector<ClassFunction> abelian_irreducibles(const GroupPtr& g) {
  const FiniteGroup& gr = *g;
  AbelianBasis basis = abelian_basis(gr);
  const int k = gr.order();
  const int n = gr.exponent();
  const int nb = static_cast<int>(basis.generators.size());
  // Coordinates of every element over the basis.
  std::vector<std::vector<int>> coords(k);
  {
    std::vector<int> tuple(nb, 0);
    for (;;) {
      int x = 0;
      for (int i = 0; i < nb; ++i)
        x = gr.mul(x, gr.power(basis.generators[i], tuple[i]));
      coords[x] = tuple;
      int i = nb - 1;
      while (i >= 0 && ++tuple[i] == basis.orders[i]) tuple[i--] = 0;
      if (i < 0) break;
    }
  }
  const ClassPartition& cls = gr.classes();
  std::vector<ClassFunction> irr;
  std::vector<int> dual(nb, 0);
  for (;;) {
    std::vector<Cyclotomic> values(cls.num_classes());
    for (int c = 0; c < cls.num_classes(); ++c) {
      int x = cls.representatives[c];
      long e = 0;
      for (int i = 0; i < nb; ++i)
        e = (e + static_cast<long>(dual[i]) * coords[x][i] *
                     (n / basis.orders[i])) %
            n;
      values[c] = Cyclotomic::zeta(n, e);
    }
    irr.emplace_back(g, std::move(values));
    if (nb == 0) break;
    int i = nb - 1;
    while (i >= 0 && ++dual[i] == basis.orders[i]) dual[i--] = 0;
    if (i < 0) break;
  }
  return irr;
}

std::vector<ClassFunction> dixon_irreducibles(const GroupPtr& g) {
  const FiniteGroup& gr = *g;
  const ClassPartition& cls = gr.classes();
  const int k = cls.num_classes();
  const long n = gr.order();
  const int exponent = gr.exponent();

  std::vector<std::vector<int>> class_members(k);
  for (int x = 0; x < n; ++x) class_members[cls.class_of[x]].push_back(x);
  std::vector<int> inv_class(k);
  for (int c = 0; c < k; ++c)
    inv_class[c] = cls.class_of[gr.inv(cls.representatives[c])];
  long max_class = 0;
  for (int c = 0; c < k; ++c)
    max_class = std::max(max_class, static_cast<long>(cls.class_sizes[c]));

  // Deterministic prime search: least l = 1 (mod exponent) above the bound.
  long bound = static_cast<long>(2.0 * std::sqrt(static_cast<double>(n)) *
                                 static_cast<double>(max_class)) +
               1;
  long l = ((bound / exponent) + 1) * exponent + 1;
  if (exponent == 1) l = bound + 1;

  for (int attempt = 0; attempt < 64; ++l) {
    if (exponent > 1 && (l - 1) % exponent != 0) continue;
    if (!is_prime_long(l)) continue;
    ++attempt;
    try {
      // Structure constants for one class at a time:
      // a_i[j][c] = #{(x,y) in C_i x C_j : xy = rep_c}.
      auto class_matrix = [&](int i) {
        ModMat ai(k, ModVec(k, 0));
        for (int x : class_members[i]) {
          int xinv = gr.inv(x);
          for (int c = 0; c < k; ++c) {
            int y = gr.mul(xinv, cls.representatives[c]);
            ai[cls.class_of[y]][c] += 1;
          }
        }
        for (int j = 0; j < k; ++j)
          for (int c = 0; c < k; ++c) ai[j][c] %= l;
        return ai;
      };

      // Split the class space into common eigenvectors.
      std::vector<Subspace> spaces;
      {
        ModMat id(k, ModVec(k, 0));
        for (int i = 0; i < k; ++i) id[i][i] = 1;
        Subspace all;
        all.basis = id;
        all.pivot_rows.resize(k);
        std::iota(all.pivot_rows.begin(), all.pivot_rows.end(), 0);
        spaces.push_back(std::move(all));
      }
      for (int i = 1; i < k; ++i) {
        bool any_big = false;
        for (const Subspace& s : spaces)
          if (s.dim() > 1) any_big = true;
        if (!any_big) break;
        ModMat ai = class_matrix(i);
        std::vector<Subspace> next;
        for (Subspace& s : spaces) {
          if (s.dim() == 1) {
            next.push_back(std::move(s));
            continue;
          }
          const int d = s.dim();
          // Images A_i * basis ((A_i b)[r] = sum_c a_i[r][c] b[c]), then the
          // restriction read off the unit pivot rows.
          ModMat img(k, ModVec(d, 0));
          for (int r = 0; r < k; ++r)
            for (int m2 = 0; m2 < k; ++m2) {
              long arm = ai[r][m2];
              if (arm == 0) continue;
              for (int t = 0; t < d; ++t)
                img[r][t] = (img[r][t] + arm * s.basis[m2][t]) % l;
            }
          ModMat restr(d, ModVec(d, 0));
          for (int srow = 0; srow < d; ++srow)
            for (int t = 0; t < d; ++t)
              restr[srow][t] = img[s.pivot_rows[srow]][t];
          ModVec cp = char_poly_mod(restr, l);
          std::vector<long> roots = poly_roots_mod(cp, l);
          if (roots.size() <= 1) {
            next.push_back(std::move(s));
            continue;
          }
          for (long lambda : roots) {
            ModMat shifted = restr;
            for (int t = 0; t < d; ++t)
              shifted[t][t] = ((shifted[t][t] - lambda) % l + l) % l;
            ModMat ns = nullspace_mod(shifted, l);  // d x e
            const int e = ns.empty() ? 0 : static_cast<int>(ns[0].size());
            if (e == 0) continue;
            ModMat ambient(k, ModVec(e, 0));
            for (int r = 0; r < k; ++r)
              for (int c = 0; c < e; ++c) {
                long acc = 0;
                for (int t = 0; t < d; ++t)
                  acc = (acc + s.basis[r][t] * ns[t][c]) % l;
                ambient[r][c] = acc;
              }
            next.push_back(echelonize(std::move(ambient), l));
          }
        }
        spaces = std::move(next);
      }
      if (static_cast<int>(spaces.size()) != k) throw LiftFailure{};

      // Normalize eigenvectors so the identity-class coordinate is 1.
      std::vector<ModVec> omega(k, ModVec(k, 0));
      for (int t = 0; t < k; ++t) {
        if (spaces[t].dim() != 1) throw LiftFailure{};
        ModVec w(k);
        for (int r = 0; r < k; ++r) w[r] = spaces[t].basis[r][0];
        if (w[0] == 0) throw LiftFailure{};
        long inv = inv_mod(w[0], l);
        for (int r = 0; r < k; ++r) w[r] = (w[r] * inv) % l;
        omega[t] = std::move(w);
      }

      // Degrees from the orthogonality of central characters.
      long sqrt_n = static_cast<long>(std::sqrt(static_cast<double>(n)));
      while ((sqrt_n + 1) * (sqrt_n + 1) <= n) ++sqrt_n;
      std::vector<long> degree(k);
      for (int t = 0; t < k; ++t) {
        long s = 0;
        for (int c = 0; c < k; ++c) {
          long term = (omega[t][c] * omega[t][inv_class[c]]) % l;
          s = (s + term * inv_mod(cls.class_sizes[c], l)) % l;
        }
        if (s == 0) throw LiftFailure{};
        long d2 = ((n % l) * inv_mod(s, l)) % l;
        long found = 0;
        for (long cand = 1; cand <= sqrt_n; ++cand)
          if ((cand * cand) % l == d2) {
            found = cand;
            break;
          }
        if (found == 0) throw LiftFailure{};
        degree[t] = found;
      }

      // Character values mod l, then the Fourier lift to exact cyclotomics.
      long root = least_primitive_root(l);
      long omega_exp = pow_mod(root, (l - 1) / exponent, l);
      std::vector<std::vector<Cyclotomic>> values(
          k, std::vector<Cyclotomic>(k));
      std::vector<ModVec> chi_mod(k, ModVec(k));
      for (int t = 0; t < k; ++t)
        for (int c = 0; c < k; ++c)
          chi_mod[t][c] =
              (((degree[t] * omega[t][c]) % l) * inv_mod(cls.class_sizes[c], l)) %
              l;
      for (int c = 0; c < k; ++c) {
        int rep = cls.representatives[c];
        int m = gr.element_order(rep);
        std::vector<int> power_class(m);
        int y = 0;
        for (int j = 0; j < m; ++j) {
          power_class[j] = cls.class_of[y];
          y = gr.mul(y, rep);
        }
        long zm = pow_mod(omega_exp, exponent / m, l);
        long zm_inv = inv_mod(zm, l);
        long m_inv = inv_mod(m, l);
        for (int t = 0; t < k; ++t) {
          Cyclotomic val;
          for (int s2 = 0; s2 < m; ++s2) {
            long acc = 0;
            long zpow = 1;  // zm^{-j*s2}
            long step = pow_mod(zm_inv, s2, l);
            for (int j = 0; j < m; ++j) {
              acc = (acc + chi_mod[t][power_class[j]] * zpow) % l;
              zpow = (zpow * step) % l;
            }
            acc = (acc * m_inv) % l;
            if (acc > degree[t]) throw LiftFailure{};
            if (acc != 0)
              val += Rational(acc) *
                     Cyclotomic::zeta(exponent,
                                      static_cast<long>(s2) * (exponent / m));
          }
          values[t][c] = std::move(val);
        }
      }

      std::vector<ClassFunction> irr;
      irr.reserve(k);
      for (int t = 0; t < k; ++t) irr.emplace_back(g, std::move(values[t]));
      return irr;
    } catch (const LiftFailure&) {
      continue;  // deterministic retry with the next admissible prime
    }
  }
  throw Error("character table: modular lift failed for all primes tried");
}

}  // namespace

std::shared_ptr<const CharacterTable> character_table(const GroupPtr& g,
                                                      int order_cap) {
  if (auto cached = g->cached_table()) return cached;
  if (g->order() > order_cap)
    throw TooLargeError("character table capped at order " +
                        std::to_string(order_cap));
  std::vector<ClassFunction> irr =
      g->is_abelian() ? abelian_irreducibles(g) : dixon_irreducibles(g);

  // Deterministic row order: by degree, then lexicographic values.
  std::sort(irr.begin(), irr.end(),
            [](const ClassFunction& x, const ClassFunction& y) {
              Rational dx = x.degree().rational_value();
              Rational dy = y.degree().rational_value();
              if (dx != dy) return dx < dy;
              for (size_t c = 0; c < x.values().size(); ++c) {
                if (x.values()[c] != y.values()[c])
                  return x.values()[c] < y.values()[c];
              }
              return false;
            });

  auto table = std::make_shared<CharacterTable>();
  table->group_ = g;
  table->irr_ = std::move(irr);
  for (const ClassFunction& chi : table->irr_) {
    Rational d = chi.degree().rational_value();
    if (!d.is_nonneg_integer() || d.is_zero())
      throw Error("character table: bad degree");
    table->degrees_.push_back(d.num());
  }
  table->verify_orthogonality();
  g->cache_table(table);
  return g->cached_table();
}

void CharacterTable::verify_orthogonality() const {
  const ClassPartition& cls = group_->classes();
  const int k = static_cast<int>(irr_.size());
  if (k != cls.num_classes())
    throw Error("character count differs from class count");
  Int sum_sq = 0;
  for (Int d : degrees_) sum_sq = checked_add(sum_sq, checked_mul(d, d));
  if (sum_sq != group_->order())
    throw Error("degrees do not satisfy sum d^2 = |G|");

  if (group_->is_abelian()) {
    // Products of rows are again rows, so both orthogonality relations
    // reduce to: the values of each nontrivial row sum to zero.
    for (int t = 0; t < k; ++t) {
      Cyclotomic s;
      bool trivial = true;
      for (int c = 0; c < k; ++c) {
        s += irr_[t].values()[c];
        if (irr_[t].values()[c] != Cyclotomic::one()) trivial = false;
      }
      Cyclotomic expect = trivial ? Cyclotomic(Rational(group_->order()))
                                  : Cyclotomic::zero();
      if (s != expect) throw Error("row sum orthogonality failed");
    }
    return;
  }

  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Cyclotomic ip = inner_product(irr_[i], irr_[j]);
      Cyclotomic expect = i == j ? Cyclotomic::one() : Cyclotomic::zero();
      if (ip != expect) throw Error("row orthogonality failed");
    }
  // Column orthogonality.
  for (int c1 = 0; c1 < k; ++c1)
    for (int c2 = c1; c2 < k; ++c2) {
      Cyclotomic s;
      for (int t = 0; t < k; ++t)
        s += irr_[t].values()[c1] * irr_[t].values()[c2].conj();
      Cyclotomic expect =
          c1 == c2 ? Cyclotomic(Rational(group_->order(), cls.class_sizes[c1]))
                   : Cyclotomic::zero();
      if (s != expect) throw Error("column orthogonality failed");
    }
}

// --- restriction / induction ----------------------------------------------------

ClassFunction restrict_to(const ClassFunction& chi, const SubgroupView& h) {
  if (chi.group() != h.parent)
    throw Error("restrict_to: view belongs to a different group");
  const ClassPartition& cls = h.group->classes();
  std::vector<Cyclotomic> v(cls.num_classes());
  for (int c = 0; c < cls.num_classes(); ++c)
    v[c] = chi.at_element(h.to_parent[cls.representatives[c]]);
  return ClassFunction(h.group, std::move(v));
}

ClassFunction induce_from(const ClassFunction& phi, const SubgroupView& h) {
  if (phi.group() != h.group)
    throw Error("induce_from: class function not on the subgroup");
  const GroupPtr& g = h.parent;
  const ClassPartition& cls = g->classes();
  const Rational scale(1, h.group->order());
  std::vector<Cyclotomic> v(cls.num_classes());
  for (int c = 0; c < cls.num_classes(); ++c) {
    int z = cls.representatives[c];
    Cyclotomic acc;
    for (int x = 0; x < g->order(); ++x) {
      int conj = g->mul(g->mul(x, z), g->inv(x));
      int local = h.from_parent[conj];
      if (local >= 0) acc += phi.at_element(local);
    }
    v[c] = Cyclotomic(scale) * acc;
  }
  return ClassFunction(g, std::move(v));
}

Cyclotomic inner_product(const ClassFunction& chi, const ClassFunction& psi) {
  require_same_group(chi, psi);
  const ClassPartition& cls = chi.group()->classes();
  Cyclotomic acc;
  for (int c = 0; c < cls.num_classes(); ++c)
    acc += Rational(cls.class_sizes[c]) * chi.values()[c] *
           psi.values()[c].conj();
  return Cyclotomic(Rational(1, chi.group()->order())) * acc;
}

Decomposition decompose(const ClassFunction& chi) {
  auto table = character_table(chi.group());
  Decomposition out;
  out.is_character = true;
  out.witness_index = -1;
  for (int i = 0; i < table->size(); ++i) {
    Cyclotomic m = inner_product(chi, table->irreducibles()[i]);
    bool good = m.is_rational() && m.rational_value().is_nonneg_integer();
    if (!good && out.is_character) {
      out.is_character = false;
      out.witness_index = i;
    }
    out.multiplicities.push_back(std::move(m));
  }
  if (out.is_character) {
    // Reconstruction must give chi back exactly.
    std::vector<Cyclotomic> recon(chi.values().size());
    for (int i = 0; i < table->size(); ++i) {
      if (out.multiplicities[i].is_zero()) continue;
      for (size_t c = 0; c < recon.size(); ++c)
        recon[c] += out.multiplicities[i] * table->irreducibles()[i].values()[c];
    }
    if (recon != chi.values())
      throw Error("decompose: reconstruction mismatch (table invalid?)");
  }
  return out;
}

bool is_character(const ClassFunction& chi) { return decompose(chi).is_character; }

ClassFunction trivial_character(const GroupPtr& g) {
  return ClassFunction(
      g, std::vector<Cyclotomic>(g->classes().num_classes(), Cyclotomic::one()));
}

ClassFunction regular_character(const GroupPtr& g) {
  std::vector<Cyclotomic> v(g->classes().num_classes());
  v[g->classes().class_of[0]] = Cyclotomic(Rational(g->order()));
  return ClassFunction(g, std::move(v));
}

ClassFunction reduced_regular(const GroupPtr& g) {
  std::vector<Cyclotomic> v(g->classes().num_classes(),
                            Cyclotomic(Rational(-1)));
  v[g->classes().class_of[0]] = Cyclotomic(Rational(g->order() - 1));
  return ClassFunction(g, std::move(v));
}

Rational fixed_subspace_dimension(const ClassFunction& chi, int element) {
  const FiniteGroup& g = *chi.group();
  int o = g.element_order(element);
  Cyclotomic acc;
  int y = 0;
  for (int j = 0; j < o; ++j) {
    acc += chi.at_element(y);
    y = g.mul(y, element);
  }
  Cyclotomic dim = Cyclotomic(Rational(1, o)) * acc;
  if (!dim.is_rational())
    throw Error("fixed subspace dimension is not rational");
  return dim.rational_value();
}

namespace {
void require_character(const ClassFunction& chi, const char* who) {
  if (!is_character(chi))
    throw NotACharacterError(std::string(who) +
                             ": class function is not a character");
}
}  // namespace

FpfResult is_strictly_fpf(const ClassFunction& chi) {
  require_character(chi, "is_strictly_fpf");
  const ClassPartition& cls = chi.group()->classes();
  for (int c = 0; c < cls.num_classes(); ++c) {
    int x = cls.representatives[c];
    if (x == 0) continue;
    if (!fixed_subspace_dimension(chi, x).is_zero())
      return {false, {x}};
  }
  return {true, {}};
}

FpfResult is_top_rank_fpf(const ClassFunction& chi, int rank) {
  require_character(chi, "is_top_rank_fpf");
  const GroupPtr& h = chi.group();
  ElementSet all(h->order());
  for (int x = 0; x < h->order(); ++x) all.set(x);
  for (const ElementSet& e : elementary_abelian_of_rank(*h, all, rank)) {
    Cyclotomic acc;
    std::vector<int> mem = e.members();
    for (int x : mem) acc += chi.at_element(x);
    Cyclotomic fixed = Cyclotomic(Rational(1, static_cast<Int>(mem.size()))) * acc;
    if (!fixed.is_zero()) return {false, mem};
  }
  return {true, {}};
}

// --- dimension functions ----------------------------------------------------------

DimensionFunction::DimensionFunction(
    GroupPtr group, std::shared_ptr<const SubgroupLattice> lattice,
    std::vector<Int> n_by_class)
    : group_(std::move(group)),
      lattice_(std::move(lattice)),
      n_(std::move(n_by_class)) {}

Int DimensionFunction::at_subgroup(const ElementSet& members) const {
  return n_[lattice_->class_of(members)];
}

DimensionFunction dimension_function(const ClassFunction& chi, int order_cap) {
  require_character(chi, "dimension_function");
  const GroupPtr& g = chi.group();
  auto lattice = all_subgroups(g, order_cap);
  std::vector<Int> n(lattice->num_classes);
  for (int cid = 0; cid < lattice->num_classes; ++cid) {
    const SubgroupRecord& rec =
        lattice->subgroups[lattice->class_representative[cid]];
    Cyclotomic acc;
    for (int x : rec.member_set.members()) acc += chi.at_element(x);
    Cyclotomic val = Cyclotomic(Rational(1, rec.order)) * acc;
    if (!val.is_rational() || !val.rational_value().is_nonneg_integer())
      throw NotACharacterError("dimension function value is not a "
                               "non-negative integer");
    n[cid] = val.rational_value().num();
  }
  return DimensionFunction(g, lattice, std::move(n));
}

}  // namespace grpcert

#include "grpcert/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace grpcert {

namespace {

// Per-conductor data: phi and the expansion of z^j (phi <= j < N) over the
// power basis, from reduction modulo the cyclotomic polynomial.
struct ConductorTable {
  int n = 1;
  int phi = 1;
  std::vector<std::vector<Int>> high_powers;  // high_powers[j - phi]
};

std::vector<Int> poly_div_exact(std::vector<Int> num,
                                const std::vector<Int>& den) {
  // Exact division of integer polynomials, denominator monic.
  int dn = static_cast<int>(num.size()) - 1;
  int dd = static_cast<int>(den.size()) - 1;
  std::vector<Int> quot(dn - dd + 1, 0);
  for (int k = dn - dd; k >= 0; --k) {
    Int c = num[k + dd];
    quot[k] = c;
    if (c == 0) continue;
    for (int i = 0; i <= dd; ++i)
      num[k + i] = checked_sub(num[k + i], checked_mul(c, den[i]));
  }
  return quot;
}

const ConductorTable& conductor_table(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ConductorTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto tab = std::make_unique<ConductorTable>();
  tab->n = n;
  const std::vector<Int>& phi_n = cyclotomic_polynomial(n);
  tab->phi = static_cast<int>(phi_n.size()) - 1;
  // z^j for j in [phi, n): reduce x^j by the monic cyclotomic polynomial.
  std::vector<std::vector<Int>> rows;
  for (int j = tab->phi; j < n; ++j) {
    std::vector<Int> row(tab->phi, 0);
    if (j == tab->phi) {
      for (int i = 0; i < tab->phi; ++i) row[i] = -phi_n[i];
    } else {
      // x * previous row, reduced.
      const std::vector<Int>& prev = rows.back();
      std::vector<Int> shifted(tab->phi, 0);
      Int top = prev[tab->phi - 1];
      for (int i = tab->phi - 1; i >= 1; --i) shifted[i] = prev[i - 1];
      if (top != 0)
        for (int i = 0; i < tab->phi; ++i)
          shifted[i] =
              checked_add(shifted[i], checked_mul(top, -phi_n[i]));
      row = shifted;
    }
    rows.push_back(row);
  }
  tab->high_powers = std::move(rows);
  const ConductorTable& ref = *tab;
  cache.emplace(n, std::move(tab));
  return ref;
}

}  // namespace

int euler_phi(int n) {
  int result = n;
  int m = n;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

const std::vector<Int>& cyclotomic_polynomial(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Int>> cache;
  std::lock_guard<std::mutex> lock(mu);

  // Iterative fill so recursion does not re-enter the lock.
  for (int m = 1; m <= n; ++m) {
    if (cache.count(m) || n % m != 0) continue;
    std::vector<Int> num(m + 1, 0);  // x^m - 1
    num[0] = -1;
    num[m] = 1;
    for (int d = 1; d < m; ++d)
      if (m % d == 0) num = poly_div_exact(std::move(num), cache.at(d));
    cache.emplace(m, std::move(num));
  }
  return cache.at(n);
}

namespace {

// acc += coef * z^power over the power basis of the given conductor.
void add_power(std::vector<Rational>& acc, const Rational& coef, int conductor,
               long power) {
  const ConductorTable& tab = conductor_table(conductor);
  power %= conductor;
  if (power < 0) power += conductor;
  if (power < tab.phi) {
    acc[power] += coef;
    return;
  }
  const std::vector<Int>& row = tab.high_powers[power - tab.phi];
  for (int i = 0; i < tab.phi; ++i)
    if (row[i] != 0) acc[i] += coef * Rational(row[i]);
}

}  // namespace

Cyclotomic Cyclotomic::zeta(int conductor, long power) {
  if (conductor < 1) throw Error("conductor must be positive");
  Cyclotomic v;
  v.conductor_ = conductor;
  v.coeffs_.assign(euler_phi(conductor), Rational(0));
  add_power(v.coeffs_, Rational(1), conductor, power);
  v.shrink();
  return v;
}

bool Cyclotomic::is_zero() const {
  for (const Rational& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (!coeffs_[i].is_zero()) return false;
  return true;
}

Rational Cyclotomic::rational_value() const {
  if (!is_rational()) throw Error("cyclotomic value is not rational: " + str());
  return coeffs_[0];
}

Cyclotomic Cyclotomic::lifted_to(int conductor) const {
  if (conductor == conductor_) return *this;
  if (conductor % conductor_ != 0)
    throw Error("cannot lift conductor " + std::to_string(conductor_) +
                " into " + std::to_string(conductor));
  long step = conductor / conductor_;
  Cyclotomic out;
  out.conductor_ = conductor;
  out.coeffs_.assign(euler_phi(conductor), Rational(0));
  for (size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j].is_zero()) continue;
    add_power(out.coeffs_, coeffs_[j], conductor, step * static_cast<long>(j));
  }
  return out;
}

Cyclotomic Cyclotomic::galois(long a) const {
  long n = conductor_;
  long am = ((a % n) + n) % n;
  if (std::gcd(am, n) != 1)
    throw Error("galois exponent not coprime to conductor");
  Cyclotomic out;
  out.conductor_ = conductor_;
  out.coeffs_.assign(coeffs_.size(), Rational(0));
  for (size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j].is_zero()) continue;
    add_power(out.coeffs_, coeffs_[j], conductor_, am * static_cast<long>(j));
  }
  out.shrink();
  return out;
}

void Cyclotomic::shrink() {
  if (conductor_ != 1 && is_rational()) {
    Rational r = coeffs_[0];
    conductor_ = 1;
    coeffs_.assign(1, r);
  }
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic out = *this;
  for (Rational& c : out.coeffs_) c = -c;
  return out;
}

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
  int n = static_cast<int>(lcm_int(a.conductor_, b.conductor_));
  Cyclotomic x = a.lifted_to(n);
  Cyclotomic y = b.lifted_to(n);
  for (size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
  x.shrink();
  return x;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
  return a + (-b);
}

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  int n = static_cast<int>(lcm_int(a.conductor_, b.conductor_));
  Cyclotomic x = a.lifted_to(n);
  Cyclotomic y = b.lifted_to(n);
  const ConductorTable& tab = conductor_table(n);
  int phi = tab.phi;
  std::vector<Rational> conv(2 * phi - 1, Rational(0));
  for (int i = 0; i < phi; ++i) {
    if (x.coeffs_[i].is_zero()) continue;
    for (int j = 0; j < phi; ++j) {
      if (y.coeffs_[j].is_zero()) continue;
      conv[i + j] += x.coeffs_[i] * y.coeffs_[j];
    }
  }
  Cyclotomic out;
  out.conductor_ = n;
  out.coeffs_.assign(phi, Rational(0));
  for (int e = static_cast<int>(conv.size()) - 1; e >= 0; --e) {
    if (conv[e].is_zero()) continue;
    int deg = e;
    if (deg >= n) deg -= n;  // z^n = 1
    if (deg < phi) {
      out.coeffs_[deg] += conv[e];
    } else {
      const std::vector<Int>& row = tab.high_powers[deg - phi];
      for (int i = 0; i < phi; ++i)
        if (row[i] != 0) out.coeffs_[i] += conv[e] * Rational(row[i]);
    }
  }
  out.shrink();
  return out;
}

Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) {
  if (b.is_zero()) throw Error("cyclotomic division by zero");
  if (b.is_rational()) {
    Cyclotomic out = a;
    for (Rational& c : out.coeffs_) c /= b.coeffs_[0];
    out.shrink();
    return out;
  }
  // Solve (multiplication-by-b) * v = a over the common field by Gaussian
  // elimination on the rational matrix of the multiplication map.
  int n = static_cast<int>(lcm_int(a.conductor_, b.conductor_));
  Cyclotomic x = a.lifted_to(n);
  Cyclotomic y = b.lifted_to(n);
  int phi = euler_phi(n);
  std::vector<std::vector<Rational>> m(phi,
                                       std::vector<Rational>(phi + 1));
  for (int j = 0; j < phi; ++j) {
    Cyclotomic col = y * Cyclotomic::zeta(n, j);
    col = col.lifted_to(n);
    for (int i = 0; i < phi; ++i) m[i][j] = col.coefficients()[i];
  }
  for (int i = 0; i < phi; ++i) m[i][phi] = x.coeffs_[i];
  for (int col = 0, row = 0; col < phi && row < phi; ++col, ++row) {
    int pivot = -1;
    for (int r = row; r < phi; ++r)
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw Error("singular multiplication map in division");
    std::swap(m[pivot], m[row]);
    Rational inv = Rational(1) / m[row][col];
    for (int c = col; c <= phi; ++c) m[row][c] *= inv;
    for (int r = 0; r < phi; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (int c = col; c <= phi; ++c) m[r][c] -= f * m[row][c];
    }
  }
  Cyclotomic out;
  out.conductor_ = n;
  out.coeffs_.resize(phi);
  for (int i = 0; i < phi; ++i) out.coeffs_[i] = m[i][phi];
  out.shrink();
  return out;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  int n = static_cast<int>(lcm_int(a.conductor_, b.conductor_));
  Cyclotomic x = a.lifted_to(n);
  Cyclotomic y = b.lifted_to(n);
  return x.coeffs_ == y.coeffs_;
}

bool operator<(const Cyclotomic& a, const Cyclotomic& b) {
  int n = static_cast<int>(lcm_int(a.conductor_, b.conductor_));
  Cyclotomic x = a.lifted_to(n);
  Cyclotomic y = b.lifted_to(n);
  for (size_t i = 0; i < x.coeffs_.size(); ++i) {
    if (x.coeffs_[i] != y.coeffs_[i]) return x.coeffs_[i] < y.coeffs_[i];
  }
  return false;
}

std::string Cyclotomic::str() const {
  if (is_rational()) return coeffs_[0].str();
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << coeffs_[i].str();
    if (i > 0) os << "*z" << conductor_ << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace grpcert

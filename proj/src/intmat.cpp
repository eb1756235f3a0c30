#include "grpcert/intmat.hpp"

#include <cstdlib>

namespace grpcert {

namespace {

// a - q*b with overflow checks.
inline Int submul(Int a, Int q, Int b) {
  return checked_sub(a, checked_mul(q, b));
}

void col_axpy(IMat& m, int dst, int src, Int q) {
  if (q == 0) return;
  for (int r = 0; r < m.rows(); ++r)
    m(r, dst) = submul(m(r, dst), q, m(r, src));
}

void row_axpy(IMat& m, int dst, int src, Int q) {
  if (q == 0) return;
  for (int c = 0; c < m.cols(); ++c)
    m(dst, c) = submul(m(dst, c), q, m(src, c));
}

// Floor division (hermite canonical reduction needs floor, not truncation).
inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

HermiteResult hermite(const IMat& a) {
  HermiteResult res;
  IMat w = a;
  const int m = static_cast<int>(w.rows());
  const int n = static_cast<int>(w.cols());
  res.u = IMat::Identity(n, n);
  int c = 0;
  for (int r = 0; r < m && c < n; ++r) {
    // Gcd-reduce the entries of row r across columns >= c.
    for (;;) {
      int best = -1;
      Int best_abs = 0;
      int nonzero = 0;
      for (int j = c; j < n; ++j) {
        Int v = w(r, j);
        if (v == 0) continue;
        ++nonzero;
        Int av = v < 0 ? -v : v;
        if (best < 0 || av < best_abs) {
          best = j;
          best_abs = av;
        }
      }
      if (nonzero == 0) {
        best = -1;
        break;
      }
      if (best != c) {
        w.col(c).swap(w.col(best));
        res.u.col(c).swap(res.u.col(best));
      }
      if (nonzero == 1) break;
      for (int j = c + 1; j < n; ++j) {
        if (w(r, j) == 0) continue;
        Int q = w(r, j) / w(r, c);
        col_axpy(w, j, c, q);
        col_axpy(res.u, j, c, q);
      }
    }
    if (w(r, c) == 0) continue;  // no pivot in this row
    if (w(r, c) < 0) {
      w.col(c) = -w.col(c);
      res.u.col(c) = -res.u.col(c);
    }
    for (int j = 0; j < c; ++j) {
      Int q = floor_div(w(r, j), w(r, c));
      col_axpy(w, j, c, q);
      col_axpy(res.u, j, c, q);
    }
    res.pivot_rows.push_back(r);
    ++c;
  }
  res.rank = c;
  res.h = w.leftCols(c);
  return res;
}

SmithResult smith(const IMat& a) {
  SmithResult res;
  IMat w = a;
  const int m = static_cast<int>(w.rows());
  const int n = static_cast<int>(w.cols());
  res.u = IMat::Identity(m, m);
  res.u_inv = IMat::Identity(m, m);
  res.v = IMat::Identity(n, n);
  res.v_inv = IMat::Identity(n, n);

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    w.row(i).swap(w.row(j));
    res.u.row(i).swap(res.u.row(j));
    res.u_inv.col(i).swap(res.u_inv.col(j));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    w.col(i).swap(w.col(j));
    res.v.col(i).swap(res.v.col(j));
    res.v_inv.row(i).swap(res.v_inv.row(j));
  };
  auto row_op = [&](int dst, int src, Int q) {  // row dst -= q * row src
    row_axpy(w, dst, src, q);
    row_axpy(res.u, dst, src, q);
    // u_inv gets the inverse op on columns: col src += q * col dst
    col_axpy(res.u_inv, src, dst, -q);
  };
  auto col_op = [&](int dst, int src, Int q) {  // col dst -= q * col src
    col_axpy(w, dst, src, q);
    col_axpy(res.v, dst, src, q);
    row_axpy(res.v_inv, src, dst, -q);
  };
  auto negate_row = [&](int i) {
    w.row(i) = -w.row(i);
    res.u.row(i) = -res.u.row(i);
    res.u_inv.col(i) = -res.u_inv.col(i);
  };

  int t = 0;
  const int lim = std::min(m, n);
  while (t < lim) {
    // Locate a pivot of minimal absolute value in the trailing block.
    int pr = -1, pc = -1;
    Int best = 0;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        Int v = w(i, j);
        if (v == 0) continue;
        Int av = v < 0 ? -v : v;
        if (pr < 0 || av < best) {
          pr = i;
          pc = j;
          best = av;
        }
      }
    if (pr < 0) break;  // trailing block is zero
    swap_rows(t, pr);
    swap_cols(t, pc);
    if (w(t, t) < 0) negate_row(t);

    bool clean = true;
    for (int i = t + 1; i < m; ++i) {
      if (w(i, t) == 0) continue;
      Int q = w(i, t) / w(t, t);
      row_op(i, t, q);
      if (w(i, t) != 0) clean = false;
    }
    for (int j = t + 1; j < n; ++j) {
      if (w(t, j) == 0) continue;
      Int q = w(t, j) / w(t, t);
      col_op(j, t, q);
      if (w(t, j) != 0) clean = false;
    }
    if (!clean) continue;  // remainders became new, smaller pivots

    // Divisibility repair: the pivot must divide the whole trailing block.
    bool divides = true;
    for (int i = t + 1; i < m && divides; ++i)
      for (int j = t + 1; j < n; ++j)
        if (w(i, j) % w(t, t) != 0) {
          // Fold row i into the pivot row and restart this pivot.
          row_op(t, i, Int(-1));
          divides = false;
          break;
        }
    if (!divides) continue;
    ++t;
  }
  res.rank = t;
  res.d = w;
  return res;
}

std::vector<Int> SmithResult::nontrivial_factors() const {
  std::vector<Int> out;
  for (int i = 0; i < rank; ++i)
    if (d(i, i) != 1) out.push_back(d(i, i));
  return out;
}

IMat kernel_basis(const IMat& a) {
  if (a.cols() == 0) return IMat(a.cols(), 0);
  if (a.rows() == 0) return IMat::Identity(a.cols(), a.cols());
  HermiteResult h = hermite(a);
  return h.u.rightCols(a.cols() - h.rank);
}

IMat solve_exact(const IMat& a, const IMat& b) {
  if (a.rows() != b.rows()) throw Error("solve_exact: shape mismatch");
  if (a.cols() == 0) {
    if (!b.isZero()) throw Error("solve_exact: no integral solution");
    return IMat(0, b.cols());
  }
  HermiteResult h = hermite(a);
  IMat y = IMat::Zero(a.cols(), b.cols());
  for (int col = 0; col < b.cols(); ++col) {
    IVec rhs = b.col(col);
    IVec yk = IVec::Zero(a.cols());
    for (int k = 0; k < h.rank; ++k) {
      int pr = h.pivot_rows[static_cast<size_t>(k)];
      Int128 acc = rhs(pr);
      for (int t = 0; t < k; ++t)
        acc -= Int128(h.h(pr, t)) * Int128(yk(t));
      Int piv = h.h(pr, k);
      Int num = narrow(acc);
      if (num % piv != 0) throw Error("solve_exact: no integral solution");
      yk(k) = num / piv;
    }
    y.col(col) = yk;
  }
  IMat x = h.u * y;
  if (a * x != b) throw Error("solve_exact: no integral solution");
  return x;
}

CompletionResult pure_completion(const IMat& l) {
  const int m = static_cast<int>(l.rows());
  const int k = static_cast<int>(l.cols());
  SmithResult s = smith(l);
  if (s.rank != k) throw Error("pure_completion: columns not independent");
  for (int i = 0; i < k; ++i)
    if (s.d(i, i) != 1) throw Error("pure_completion: lattice is not pure");
  // l = u_inv * [I;0] * v_inv, so the first k columns of u_inv span the same
  // lattice as l (v_inv is unimodular), and u_inv is the completion.
  CompletionResult out;
  out.w = s.u_inv;
  out.w_inv = s.u;
  (void)m;
  return out;
}

CokernelShape cokernel_shape(const IMat& a, int ambient_rank) {
  CokernelShape out;
  SmithResult s = smith(a);
  out.free_rank = ambient_rank - s.rank;
  out.torsion = s.nontrivial_factors();
  return out;
}

}  // namespace grpcert

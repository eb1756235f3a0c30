#pragma once

#include <Eigen/Dense>
#include <vector>

#include "grpcert/numbers.hpp"

namespace grpcert {

// Dense integer matrices; every elimination below is exact and unimodular,
// with overflow-checked updates.
using IMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using IRow = Eigen::Matrix<Int, 1, Eigen::Dynamic>;

// Column-style Hermite normal form: A * U = [H | 0] with U unimodular and H
// the canonical basis of the column lattice of A (pivot rows increasing,
// positive pivots, entries left of a pivot reduced into [0, pivot)).
struct HermiteResult {
  IMat h;        // m x rank
  IMat u;        // n x n unimodular
  int rank = 0;  // number of pivot columns
  std::vector<int> pivot_rows;
};
HermiteResult hermite(const IMat& a);

// Smith normal form with full transforms: u * A * v = d, u and v unimodular,
// d diagonal with positive entries in a divisibility chain.
struct SmithResult {
  IMat d;
  IMat u, u_inv;  // m x m
  IMat v, v_inv;  // n x n
  int rank = 0;
  // Diagonal entries > 1 (the nontrivial invariant factors of the cokernel
  // restricted to the image part).
  std::vector<Int> nontrivial_factors() const;
};
SmithResult smith(const IMat& a);

// Basis of the integer kernel {x : Ax = 0}; columns span the full (pure)
// kernel lattice.
IMat kernel_basis(const IMat& a);

// Solves A * X = B over the integers; throws if no integral solution exists.
// When the columns of A are linearly independent the solution is unique.
IMat solve_exact(const IMat& a, const IMat& b);

// For L with linearly independent columns spanning a pure sublattice of Z^m:
// returns unimodular W (and its inverse) whose first cols(L) columns span the
// same lattice. Throws if the lattice is not pure.
struct CompletionResult {
  IMat w, w_inv;
};
CompletionResult pure_completion(const IMat& l);

// Structure of coker(A : Z^n -> Z^m) as free rank plus invariant factors > 1.
struct CokernelShape {
  int free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1, divisibility chain
  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
};
CokernelShape cokernel_shape(const IMat& a, int ambient_rank);

}  // namespace grpcert

#pragma once

#include <array>
#include <vector>

#include "s3def/modmath.hpp"

namespace s3def {

// Dense matrix over Z/p^j, row-major.
struct ModMatrix {
  u64 p = 0;
  unsigned j = 0;
  u128 mod = 0;
  size_t rows = 0, cols = 0;
  std::vector<u128> e;

  ModMatrix() = default;
  ModMatrix(u64 p, unsigned j, size_t rows, size_t cols);
  static ModMatrix identity(u64 p, unsigned j, size_t n);

  u128& at(size_t r, size_t c) { return e[r * cols + c]; }
  const u128& at(size_t r, size_t c) const { return e[r * cols + c]; }
  void set_signed(size_t r, size_t c, i128 value);

  ModMatrix operator*(const ModMatrix& o) const;
  ModMatrix operator+(const ModMatrix& o) const;
  ModMatrix operator-(const ModMatrix& o) const;
  ModMatrix scaled(i128 c) const;
  bool operator==(const ModMatrix& o) const;
  bool operator!=(const ModMatrix& o) const { return !(*this == o); }

  ModMatrix hstack(const ModMatrix& o) const;       // [this | o]
  ModMatrix top_rows(size_t n) const;
  std::vector<u128> col(size_t c) const;
  std::vector<u128> apply(const std::vector<u128>& x) const;
  bool is_zero() const;
};

// U * A * V = diag(p^val), U and V invertible, valuations non-decreasing
// (valuation j stands for a zero diagonal entry). Deterministic: pivots are
// chosen by minimal valuation, ties by lowest (row, col).
struct SmithResult {
  std::vector<unsigned> val;
  ModMatrix U, V;
};
SmithResult smith_normal_form(const ModMatrix& A);

// Count of unit elementary divisors.
unsigned rank_units(const ModMatrix& A);

// Generators of { x : A x = 0 }, as columns. May be empty (trivial kernel).
ModMatrix kernel_mod(const ModMatrix& A);

// Cyclic decomposition of the column span: exponents k of the factors
// Z/p^k, descending.
std::vector<unsigned> submodule_invariants(const ModMatrix& gens);

bool in_colspace(const ModMatrix& gens, const std::vector<u128>& x);
bool submodules_equal(const ModMatrix& A, const ModMatrix& B);

// Generators of colspace(A) meet colspace(B).
ModMatrix intersect_submodules(const ModMatrix& A, const ModMatrix& B);

// An S3-action on R^n, R = Z/p^j with p > 3: matrices for the generators
// sigma (order 2) and tau (order 3) with sigma tau sigma = tau^2.
struct S3Module {
  ModMatrix sigma, tau;

  // Validates the relations; throws bad_action on failure, small_prime for
  // p <= 3 (the projector arithmetic needs 6 invertible).
  static S3Module make(const ModMatrix& sigma, const ModMatrix& tau);

  size_t dim() const { return sigma.rows; }
  // All six group elements: 1, t, t^2, s, st, st^2.
  std::vector<ModMatrix> elements() const;
  // Multiplicities (trivial, sign, standard), via unit-rank of the central
  // idempotents. Ranks are read off the Smith form: traces are ambiguous
  // once p^j is at most the dimension.
  std::array<unsigned, 3> multiplicities() const;
  // Columns g*x over the six group elements.
  ModMatrix span_of_orbit(const std::vector<u128>& x) const;
};

// R^2 with sigma = diag(1,-1), tau = [[-1/2,1/2],[-3/2,-1/2]]: the unique
// 2-dimensional irreducible, in the basis used across the project.
S3Module standard_residual_module(u64 p, unsigned j);

// Permutation module R^3 (sigma = (23), tau = (123)), optionally twisted by
// the sign character.
S3Module permutation_module(u64 p, unsigned j, bool sign_twist);

// Exactness and structure report for the scaled diagonal embedding
//   phi: E -> E1 + E2 + E3,  phi(v) = (p^ell v, T v),  ell = min(i, j)
// with T the difference intertwiner, and its cokernel P of rank 4. The
// component images inside P meet pairwise and triply in a single cyclic
// Z/p^ell, sitting inside the sign line.
struct DegenerateModelReport {
  u64 p = 0;
  unsigned j = 0, i = 0, ell = 0;
  bool phi_equivariant = false;
  bool pi_equivariant = false;
  bool pi_phi_zero = false;
  bool kernel_is_image = false;
  std::array<unsigned, 3> middle_type{};    // expected (1,1,2)
  std::array<unsigned, 3> quotient_type{};  // expected (1,1,1)
  bool types_ok = false;
  std::vector<unsigned> pairwise_invariants;  // from image1 meet image2
  bool intersections_ok = false;
  bool inertia_applicable = false;  // the span claims assume i >= j
  bool inertia_ok = false;

  bool ok() const {
    return phi_equivariant && pi_equivariant && pi_phi_zero &&
           kernel_is_image && types_ok && intersections_ok &&
           (!inertia_applicable || inertia_ok);
  }
};

// require_inertia: throw hypothesis_not_met instead of silently skipping
// the span checks when i < j.
DegenerateModelReport verify_degenerate_model(u64 p, unsigned j, unsigned i,
                                              bool require_inertia = false);

}  // namespace s3def

#include "s3def/s3_modules.hpp"

#include <algorithm>

#include "s3def/errors.hpp"

namespace s3def {

ModMatrix::ModMatrix(u64 p_, unsigned j_, size_t rows_, size_t cols_)
    : p(p_), j(j_), rows(rows_), cols(cols_), e(rows_ * cols_, 0) {
  mod = pow_u128_checked(p_, j_);
}

ModMatrix ModMatrix::identity(u64 p, unsigned j, size_t n) {
  ModMatrix m(p, j, n, n);
  for (size_t k = 0; k < n; ++k) m.at(k, k) = 1;
  return m;
}

void ModMatrix::set_signed(size_t r, size_t c, i128 value) {
  at(r, c) = reduce_signed(value, mod);
}

static void check_rings(const ModMatrix& a, const ModMatrix& b) {
  if (a.p != b.p || a.j != b.j)
    throw wrong_field("matrix arithmetic over different rings");
}

ModMatrix ModMatrix::operator*(const ModMatrix& o) const {
  check_rings(*this, o);
  if (cols != o.rows) throw bad_action("matrix product shape mismatch");
  ModMatrix r(p, j, rows, o.cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t k = 0; k < cols; ++k) {
      u128 a = at(i, k);
      if (a == 0) continue;
      for (size_t c = 0; c < o.cols; ++c)
        r.at(i, c) = (r.at(i, c) + mulmod128(a, o.at(k, c), mod)) % mod;
    }
  return r;
}

ModMatrix ModMatrix::operator+(const ModMatrix& o) const {
  check_rings(*this, o);
  if (rows != o.rows || cols != o.cols)
    throw bad_action("matrix sum shape mismatch");
  ModMatrix r = *this;
  for (size_t k = 0; k < e.size(); ++k) r.e[k] = (r.e[k] + o.e[k]) % mod;
  return r;
}

ModMatrix ModMatrix::operator-(const ModMatrix& o) const {
  check_rings(*this, o);
  if (rows != o.rows || cols != o.cols)
    throw bad_action("matrix difference shape mismatch");
  ModMatrix r = *this;
  for (size_t k = 0; k < e.size(); ++k)
    r.e[k] = (r.e[k] + mod - o.e[k]) % mod;
  return r;
}

ModMatrix ModMatrix::scaled(i128 c) const {
  ModMatrix r = *this;
  u128 cc = reduce_signed(c, mod);
  for (auto& x : r.e) x = mulmod128(x, cc, mod);
  return r;
}

bool ModMatrix::operator==(const ModMatrix& o) const {
  return p == o.p && j == o.j && rows == o.rows && cols == o.cols && e == o.e;
}

ModMatrix ModMatrix::hstack(const ModMatrix& o) const {
  check_rings(*this, o);
  if (rows != o.rows) throw bad_action("hstack row mismatch");
  ModMatrix r(p, j, rows, cols + o.cols);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t c = 0; c < cols; ++c) r.at(i, c) = at(i, c);
    for (size_t c = 0; c < o.cols; ++c) r.at(i, cols + c) = o.at(i, c);
  }
  return r;
}

ModMatrix ModMatrix::top_rows(size_t n) const {
  ModMatrix r(p, j, n, cols);
  std::copy(e.begin(), e.begin() + n * cols, r.e.begin());
  return r;
}

std::vector<u128> ModMatrix::col(size_t c) const {
  std::vector<u128> v(rows);
  for (size_t i = 0; i < rows; ++i) v[i] = at(i, c);
  return v;
}

std::vector<u128> ModMatrix::apply(const std::vector<u128>& x) const {
  if (x.size() != cols) throw bad_action("apply shape mismatch");
  std::vector<u128> y(rows, 0);
  for (size_t i = 0; i < rows; ++i)
    for (size_t c = 0; c < cols; ++c)
      y[i] = (y[i] + mulmod128(at(i, c), x[c] % mod, mod)) % mod;
  return y;
}

bool ModMatrix::is_zero() const {
  for (u128 x : e)
    if (x != 0) return false;
  return true;
}

SmithResult smith_normal_form(const ModMatrix& A0) {
  ModMatrix A = A0;
  const u64 p = A.p;
  const unsigned j = A.j;
  const u128 mod = A.mod;
  ModMatrix U = ModMatrix::identity(p, j, A.rows);
  ModMatrix V = ModMatrix::identity(p, j, A.cols);
  auto valof = [&](u128 x) -> unsigned {
    return x == 0 ? j : valuation_u128(x, p, j);
  };
  auto swap_rows = [&](ModMatrix& M, size_t r1, size_t r2) {
    if (r1 == r2) return;
    for (size_t c = 0; c < M.cols; ++c) std::swap(M.at(r1, c), M.at(r2, c));
  };
  auto swap_cols = [&](ModMatrix& M, size_t c1, size_t c2) {
    if (c1 == c2) return;
    for (size_t r = 0; r < M.rows; ++r) std::swap(M.at(r, c1), M.at(r, c2));
  };
  // row[r] -= m * row[k]
  auto row_sub = [&](ModMatrix& M, size_t r, size_t k, u128 m) {
    for (size_t c = 0; c < M.cols; ++c) {
      u128 t = mulmod128(m, M.at(k, c), mod);
      M.at(r, c) = (M.at(r, c) + mod - t) % mod;
    }
  };
  auto col_sub = [&](ModMatrix& M, size_t c, size_t k, u128 m) {
    for (size_t r = 0; r < M.rows; ++r) {
      u128 t = mulmod128(m, M.at(r, k), mod);
      M.at(r, c) = (M.at(r, c) + mod - t) % mod;
    }
  };
  auto row_scale = [&](ModMatrix& M, size_t r, u128 c) {
    for (size_t cc = 0; cc < M.cols; ++cc)
      M.at(r, cc) = mulmod128(M.at(r, cc), c, mod);
  };

  size_t t = std::min(A.rows, A.cols);
  SmithResult res;
  for (size_t k = 0; k < t; ++k) {
    size_t br = k, bc = k;
    unsigned bestv = j;
    for (size_t r = k; r < A.rows; ++r)
      for (size_t c = k; c < A.cols; ++c) {
        unsigned v = valof(A.at(r, c));
        if (v < bestv) {
          bestv = v;
          br = r;
          bc = c;
        }
      }
    if (bestv == j) break;  // remaining block is zero
    swap_rows(A, k, br);
    swap_rows(U, k, br);
    swap_cols(A, k, bc);
    swap_cols(V, k, bc);
    u128 piv = A.at(k, k);
    u128 unit = piv;
    for (unsigned s = 0; s < bestv; ++s) unit /= p;
    u128 iu = invmod128(unit, mod);
    // Pivot has minimal valuation, so every multiplier below is exact.
    for (size_t r = 0; r < A.rows; ++r) {
      if (r == k || A.at(r, k) == 0) continue;
      u128 q = A.at(r, k);
      for (unsigned s = 0; s < bestv; ++s) q /= p;
      u128 m = mulmod128(q, iu, mod);
      row_sub(A, r, k, m);
      row_sub(U, r, k, m);
    }
    for (size_t c = 0; c < A.cols; ++c) {
      if (c == k || A.at(k, c) == 0) continue;
      u128 q = A.at(k, c);
      for (unsigned s = 0; s < bestv; ++s) q /= p;
      u128 m = mulmod128(q, iu, mod);
      col_sub(A, c, k, m);
      col_sub(V, c, k, m);
    }
    row_scale(A, k, iu);
    row_scale(U, k, iu);
    res.val.push_back(bestv);
  }
  res.val.resize(t, j);
  res.U = std::move(U);
  res.V = std::move(V);
  return res;
}

unsigned rank_units(const ModMatrix& A) {
  auto s = smith_normal_form(A);
  unsigned r = 0;
  for (unsigned v : s.val)
    if (v == 0) ++r;
  return r;
}

ModMatrix kernel_mod(const ModMatrix& A) {
  auto s = smith_normal_form(A);
  const unsigned j = A.j;
  size_t t = std::min(A.rows, A.cols);
  std::vector<size_t> keep;
  for (size_t k = 0; k < A.cols; ++k)
    if (k >= t || s.val[k] > 0) keep.push_back(k);
  ModMatrix K(A.p, A.j, A.cols, keep.size());
  for (size_t out = 0; out < keep.size(); ++out) {
    size_t k = keep[out];
    u128 scale = (k < t) ? pow_u128_checked(A.p, j - s.val[k]) : 1;
    for (size_t r = 0; r < A.cols; ++r)
      K.at(r, out) = mulmod128(s.V.at(r, k), scale, A.mod);
  }
  return K;
}

std::vector<unsigned> submodule_invariants(const ModMatrix& gens) {
  auto s = smith_normal_form(gens);
  std::vector<unsigned> inv;
  for (unsigned v : s.val)
    if (v < gens.j) inv.push_back(gens.j - v);
  std::sort(inv.rbegin(), inv.rend());
  return inv;
}

bool in_colspace(const ModMatrix& gens, const std::vector<u128>& x) {
  auto s = smith_normal_form(gens);
  std::vector<u128> y = s.U.apply(x);
  size_t t = std::min(gens.rows, gens.cols);
  for (size_t k = 0; k < gens.rows; ++k) {
    unsigned need = (k < t) ? s.val[k] : gens.j;
    u128 yk = y[k];
    if (yk == 0) continue;
    if (valuation_u128(yk, gens.p, gens.j) < need) return false;
  }
  return true;
}

bool submodules_equal(const ModMatrix& A, const ModMatrix& B) {
  check_rings(A, B);
  if (A.rows != B.rows) throw bad_action("submodules in different spaces");
  for (size_t c = 0; c < A.cols; ++c)
    if (!in_colspace(B, A.col(c))) return false;
  for (size_t c = 0; c < B.cols; ++c)
    if (!in_colspace(A, B.col(c))) return false;
  return true;
}

ModMatrix intersect_submodules(const ModMatrix& A, const ModMatrix& B) {
  check_rings(A, B);
  if (A.rows != B.rows) throw bad_action("submodules in different spaces");
  ModMatrix C = A.hstack(B.scaled(-1));
  ModMatrix K = kernel_mod(C);       // (A.cols + B.cols) x r
  ModMatrix top = K.top_rows(A.cols);
  return A * top;
}

S3Module S3Module::make(const ModMatrix& sigma, const ModMatrix& tau) {
  check_rings(sigma, tau);
  if (sigma.p <= 3) throw small_prime("S3Module needs p > 3");
  if (sigma.rows != sigma.cols || tau.rows != tau.cols ||
      sigma.rows != tau.rows)
    throw bad_action("generator matrices must be square, same size");
  ModMatrix I = ModMatrix::identity(sigma.p, sigma.j, sigma.rows);
  if (sigma * sigma != I) throw bad_action("sigma^2 != 1");
  if (tau * tau * tau != I) throw bad_action("tau^3 != 1");
  if (sigma * tau * sigma != tau * tau) throw bad_action("sigma tau sigma != tau^2");
  return S3Module{sigma, tau};
}

std::vector<ModMatrix> S3Module::elements() const {
  ModMatrix I = ModMatrix::identity(sigma.p, sigma.j, sigma.rows);
  ModMatrix t2 = tau * tau;
  return {I, tau, t2, sigma, sigma * tau, sigma * t2};
}

std::array<unsigned, 3> S3Module::multiplicities() const {
  auto g = elements();
  ModMatrix sum = g[0], alt = g[0];
  for (int k = 1; k < 3; ++k) {
    sum = sum + g[k];
    alt = alt + g[k];
  }
  for (int k = 3; k < 6; ++k) {
    sum = sum + g[k];
    alt = alt - g[k];
  }
  u128 inv6 = invmod128(6, sigma.mod);
  ModMatrix e1 = sum.scaled(static_cast<i128>(inv6));
  ModMatrix echi = alt.scaled(static_cast<i128>(inv6));
  ModMatrix eeps =
      ModMatrix::identity(sigma.p, sigma.j, sigma.rows) - e1 - echi;
  unsigned m1 = rank_units(e1);
  unsigned mchi = rank_units(echi);
  unsigned r = rank_units(eeps);
  if (r % 2 != 0) throw bad_action("two-dimensional component has odd rank");
  return {m1, mchi, r / 2};
}

ModMatrix S3Module::span_of_orbit(const std::vector<u128>& x) const {
  auto g = elements();
  ModMatrix out(sigma.p, sigma.j, sigma.rows, g.size());
  for (size_t k = 0; k < g.size(); ++k) {
    auto y = g[k].apply(x);
    for (size_t r = 0; r < y.size(); ++r) out.at(r, k) = y[r];
  }
  return out;
}

S3Module standard_residual_module(u64 p, unsigned j) {
  ModMatrix s(p, j, 2, 2), t(p, j, 2, 2);
  u128 mod = s.mod;
  u128 inv2 = invmod128(2, mod);
  s.set_signed(0, 0, 1);
  s.set_signed(1, 1, -1);
  t.at(0, 0) = mod - inv2;                    // -1/2
  t.at(0, 1) = inv2;                          //  1/2
  t.at(1, 0) = mod - mulmod128(3, inv2, mod); // -3/2
  t.at(1, 1) = mod - inv2;                    // -1/2
  return S3Module::make(s, t);
}

S3Module permutation_module(u64 p, unsigned j, bool sign_twist) {
  ModMatrix s(p, j, 3, 3), t(p, j, 3, 3);
  i128 u = sign_twist ? -1 : 1;
  // sigma = (23), tau = (123): tau e1 = e2, tau e2 = e3, tau e3 = e1.
  s.set_signed(0, 0, u);
  s.set_signed(2, 1, u);
  s.set_signed(1, 2, u);
  t.set_signed(1, 0, 1);
  t.set_signed(2, 1, 1);
  t.set_signed(0, 2, 1);
  return S3Module::make(s, t);
}

namespace {

// Difference intertwiner T v = (v3 - v2, v1 - v3, v2 - v1) as a matrix.
ModMatrix difference_intertwiner(u64 p, unsigned j) {
  ModMatrix T(p, j, 3, 3);
  T.set_signed(0, 1, -1);
  T.set_signed(0, 2, 1);
  T.set_signed(1, 0, 1);
  T.set_signed(1, 2, -1);
  T.set_signed(2, 0, -1);
  T.set_signed(2, 1, 1);
  return T;
}

// Block-diagonal action on a-coords (plain permutation) and b-coords
// (sign-twisted permutation).
S3Module middle_module(u64 p, unsigned j) {
  S3Module V = permutation_module(p, j, false);
  S3Module W = permutation_module(p, j, true);
  ModMatrix s(p, j, 6, 6), t(p, j, 6, 6);
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < 3; ++c) {
      s.at(r, c) = V.sigma.at(r, c);
      s.at(3 + r, 3 + c) = W.sigma.at(r, c);
      t.at(r, c) = V.tau.at(r, c);
      t.at(3 + r, 3 + c) = W.tau.at(r, c);
    }
  return S3Module::make(s, t);
}

// Quotient action on (z1, z2, z3, w): permutation on z, sign on w.
S3Module quotient_module(u64 p, unsigned j) {
  S3Module V = permutation_module(p, j, false);
  ModMatrix s(p, j, 4, 4), t(p, j, 4, 4);
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < 3; ++c) {
      s.at(r, c) = V.sigma.at(r, c);
      t.at(r, c) = V.tau.at(r, c);
    }
  s.set_signed(3, 3, -1);
  t.set_signed(3, 3, 1);
  return S3Module::make(s, t);
}

}  // namespace

DegenerateModelReport verify_degenerate_model(u64 p, unsigned j, unsigned i,
                                              bool require_inertia) {
  if (p <= 3) throw small_prime("verify_degenerate_model needs p > 3");
  if (j == 0) throw bad_action("verify_degenerate_model needs j >= 1");
  if (require_inertia && i < j)
    throw hypothesis_not_met("inertia span claims assume i >= j");

  DegenerateModelReport rep;
  rep.p = p;
  rep.j = j;
  rep.i = i;
  rep.ell = std::min(i, j);

  S3Module E = standard_residual_module(p, j);
  S3Module M = middle_module(p, j);
  S3Module P = quotient_module(p, j);
  u128 mod = M.sigma.mod;
  u128 pl = pow_u128_checked(p, rep.ell) % mod;
  ModMatrix T = difference_intertwiner(p, j);

  // phi in the basis f1 = (-2,1,1), f2 = (0,1,-1) of the sum-zero plane:
  // columns (p^ell f, T f).
  ModMatrix phi(p, j, 6, 2);
  const i128 f1[3] = {-2, 1, 1};
  const i128 f2[3] = {0, 1, -1};
  for (size_t r = 0; r < 3; ++r) {
    phi.at(r, 0) = mulmod128(pl, reduce_signed(f1[r], mod), mod);
    phi.at(r, 1) = mulmod128(pl, reduce_signed(f2[r], mod), mod);
  }
  std::vector<u128> v1(3), v2(3);
  for (size_t r = 0; r < 3; ++r) {
    v1[r] = reduce_signed(f1[r], mod);
    v2[r] = reduce_signed(f2[r], mod);
  }
  auto t1 = T.apply(v1), t2 = T.apply(v2);
  for (size_t r = 0; r < 3; ++r) {
    phi.at(3 + r, 0) = t1[r];
    phi.at(3 + r, 1) = t2[r];
  }

  // pi: (x, y) -> (x + (p^ell / 3) T y, sum y).
  ModMatrix pi(p, j, 4, 6);
  u128 c3 = mulmod128(pl, invmod128(3, mod), mod);
  for (size_t r = 0; r < 3; ++r) {
    pi.at(r, r) = 1;
    for (size_t cc = 0; cc < 3; ++cc)
      pi.at(r, 3 + cc) = mulmod128(c3, T.at(r, cc), mod);
  }
  for (size_t cc = 0; cc < 3; ++cc) pi.at(3, 3 + cc) = 1;

  rep.phi_equivariant =
      (phi * E.sigma == M.sigma * phi) && (phi * E.tau == M.tau * phi);
  rep.pi_equivariant =
      (pi * M.sigma == P.sigma * pi) && (pi * M.tau == P.tau * pi);
  rep.pi_phi_zero = (pi * phi).is_zero();
  rep.kernel_is_image = submodules_equal(kernel_mod(pi), phi);
  rep.middle_type = M.multiplicities();
  rep.quotient_type = P.multiplicities();
  rep.types_ok = rep.middle_type == std::array<unsigned, 3>{1, 1, 2} &&
                 rep.quotient_type == std::array<unsigned, 3>{1, 1, 1} &&
                 E.multiplicities() == std::array<unsigned, 3>{0, 0, 1};

  // Images of the three component copies inside the quotient.
  std::vector<ModMatrix> bars;
  for (size_t k = 0; k < 3; ++k) {
    ModMatrix axes(p, j, 6, 2);
    axes.at(k, 0) = 1;
    axes.at(3 + k, 1) = 1;
    bars.push_back(pi * axes);
  }
  // Expected intersection: the p^(j-ell) multiples of the sign axis.
  ModMatrix wline(p, j, 4, 1);
  wline.at(3, 0) = pow_u128_checked(p, j - rep.ell) % mod;
  ModMatrix i12 = intersect_submodules(bars[0], bars[1]);
  ModMatrix i13 = intersect_submodules(bars[0], bars[2]);
  ModMatrix i23 = intersect_submodules(bars[1], bars[2]);
  ModMatrix itriple = intersect_submodules(i12, bars[2]);
  rep.pairwise_invariants = submodule_invariants(i12);
  std::vector<unsigned> expect_inv;
  if (rep.ell > 0) expect_inv.push_back(rep.ell);
  rep.intersections_ok =
      submodules_equal(i12, wline) && submodules_equal(i13, wline) &&
      submodules_equal(i23, wline) && submodules_equal(itriple, wline) &&
      rep.pairwise_invariants == expect_inv &&
      submodule_invariants(i13) == expect_inv &&
      submodule_invariants(i23) == expect_inv &&
      submodule_invariants(itriple) == expect_inv;

  rep.inertia_applicable = (i >= j);
  if (rep.inertia_applicable) {
    ModMatrix r_span = P.span_of_orbit(bars[0].col(0));
    ModMatrix s_span = P.span_of_orbit(bars[0].col(1));
    ModMatrix zblock(p, j, 4, 3);
    for (size_t k = 0; k < 3; ++k) zblock.at(k, k) = 1;
    ModMatrix waxis(p, j, 4, 1);
    waxis.at(3, 0) = 1;
    ModMatrix full = ModMatrix::identity(p, j, 4);
    rep.inertia_ok = submodules_equal(r_span, zblock) &&
                     submodules_equal(s_span, waxis) &&
                     submodules_equal(r_span.hstack(s_span), full);
  }
  return rep;
}

}  // namespace s3def

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "s3def/s3_modules.hpp"

using namespace s3def;

namespace {

ModMatrix from_rows(u64 p, unsigned j, std::vector<std::vector<i64>> rows) {
  ModMatrix m(p, j, rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) m.set_signed(r, c, rows[r][c]);
  return m;
}

// All R-linear combinations of the columns, as explicit coordinate tuples.
std::set<std::vector<u64>> span_set(const ModMatrix& gens) {
  std::set<std::vector<u64>> out;
  u64 q = static_cast<u64>(gens.mod);
  u64 total = 1;
  for (size_t k = 0; k < gens.cols; ++k) total *= q;
  std::vector<u128> coef(gens.cols, 0);
  for (u64 it = 0; it < total; ++it) {
    u64 x = it;
    for (size_t k = 0; k < gens.cols; ++k) {
      coef[k] = x % q;
      x /= q;
    }
    auto y = gens.apply(coef);
    std::vector<u64> key(y.size());
    for (size_t r = 0; r < y.size(); ++r) key[r] = static_cast<u64>(y[r]);
    out.insert(key);
  }
  if (gens.cols == 0) out.insert(std::vector<u64>(gens.rows, 0));
  return out;
}

std::set<std::vector<u64>> kernel_set(const ModMatrix& A) {
  std::set<std::vector<u64>> out;
  u64 q = static_cast<u64>(A.mod);
  u64 total = 1;
  for (size_t k = 0; k < A.cols; ++k) total *= q;
  std::vector<u128> x(A.cols, 0);
  for (u64 it = 0; it < total; ++it) {
    u64 v = it;
    for (size_t k = 0; k < A.cols; ++k) {
      x[k] = v % q;
      v /= q;
    }
    auto y = A.apply(x);
    bool zero = true;
    for (u128 c : y) zero = zero && (c == 0);
    if (zero) {
      std::vector<u64> key(x.size());
      for (size_t k = 0; k < x.size(); ++k) key[k] = static_cast<u64>(x[k]);
      out.insert(key);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("smith normal form") {
  auto A = from_rows(5, 3, {{5, 10}, {15, 50}});
  auto s = smith_normal_form(A);
  CHECK(s.val == std::vector<unsigned>{1, 1});
  // U A V is the diagonal of p-powers.
  ModMatrix D = s.U * A * s.V;
  ModMatrix expect(5, 3, 2, 2);
  expect.at(0, 0) = 5;
  expect.at(1, 1) = 5;
  CHECK(D == expect);
  CHECK(rank_units(s.U) == 2);  // invertible
  CHECK(rank_units(s.V) == 2);
  CHECK(submodule_invariants(A) == std::vector<unsigned>{2, 2});

  auto B = from_rows(5, 2, {{1, 2, 0}, {3, 4, 5}});
  auto sb = smith_normal_form(B);
  CHECK(sb.val.size() == 2);
  CHECK(sb.val[0] == 0);
  ModMatrix DB = sb.U * B * sb.V;
  for (size_t r = 0; r < 2; ++r)
    for (size_t c = 0; c < 3; ++c)
      if (r != c) CHECK(DB.at(r, c) == 0);
  CHECK(DB.at(0, 0) == 1);

  ModMatrix Z(5, 2, 2, 2);
  auto sz = smith_normal_form(Z);
  CHECK(sz.val == std::vector<unsigned>{2, 2});
  CHECK(submodule_invariants(Z).empty());
}

TEST_CASE("kernels against enumeration") {
  std::vector<ModMatrix> cases = {
      from_rows(5, 2, {{5, 0}, {0, 1}}),
      from_rows(5, 2, {{5, 10, 0}, {0, 5, 5}}),
      from_rows(5, 2, {{1, 2}, {3, 4}, {5, 6}}),
      from_rows(5, 2, {{0, 0}, {0, 0}}),
      from_rows(5, 2, {{5, 15}, {10, 50}}),
      from_rows(7, 2, {{7, 1}, {21, 3}}),
  };
  for (const auto& A : cases) {
    ModMatrix K = kernel_mod(A);
    // Every generator really is in the kernel.
    for (size_t c = 0; c < K.cols; ++c) {
      auto y = A.apply(K.col(c));
      for (u128 v : y) CHECK(v == 0);
    }
    CHECK(span_set(K) == kernel_set(A));
  }
}

TEST_CASE("column span membership by enumeration") {
  auto A = from_rows(5, 2, {{5, 15}, {10, 50}});
  auto S = span_set(A);
  int count = 0;
  for (u64 a = 0; a < 25; ++a)
    for (u64 b = 0; b < 25; ++b) {
      bool in = in_colspace(A, {a, b});
      bool expect = S.count({a, b}) > 0;
      if (in != expect) ++count;
    }
  CHECK(count == 0);
  CHECK(submodules_equal(A, from_rows(5, 2, {{5, 0}, {0, 5}})));
  CHECK(!submodules_equal(A, from_rows(5, 2, {{1, 0}, {0, 5}})));
}

TEST_CASE("submodule intersection against enumeration") {
  struct Pair {
    ModMatrix A, B;
  };
  std::vector<Pair> cases = {
      {from_rows(5, 2, {{1}, {0}}), from_rows(5, 2, {{1}, {5}})},
      {from_rows(5, 2, {{5, 15}, {10, 50}}), from_rows(5, 2, {{5, 0}, {0, 5}})},
      {from_rows(5, 2, {{1, 0}, {0, 5}}), from_rows(5, 2, {{0}, {1}})},
      {from_rows(7, 1, {{1, 2}, {2, 4}, {1, 1}}), from_rows(7, 1, {{3}, {6}, {2}})},
  };
  for (const auto& [A, B] : cases) {
    ModMatrix I = intersect_submodules(A, B);
    auto SA = span_set(A), SB = span_set(B);
    std::set<std::vector<u64>> expect;
    for (const auto& v : SA)
      if (SB.count(v)) expect.insert(v);
    CHECK(span_set(I) == expect);
    // Invariants match the enumerated group order.
    u64 order = 1;
    for (unsigned k : submodule_invariants(I))
      for (unsigned s = 0; s < k; ++s) order *= A.p;
    CHECK(order == expect.size());
  }
}

TEST_CASE("s3 module validation") {
  auto E = standard_residual_module(5, 3);
  CHECK(E.dim() == 2);
  CHECK(E.multiplicities() == std::array<unsigned, 3>{0, 0, 1});
  CHECK_THROWS_AS(standard_residual_module(3, 2), small_prime);

  auto bad_sigma = from_rows(5, 2, {{1, 1}, {0, 1}});
  auto I2 = ModMatrix::identity(5, 2, 2);
  CHECK_THROWS_AS(S3Module::make(bad_sigma, I2), bad_action);
  auto tau = standard_residual_module(5, 2).tau;
  CHECK_THROWS_AS(S3Module::make(I2, tau), bad_action);  // s t s != t^2
}

TEST_CASE("multiplicities of named modules") {
  CHECK(permutation_module(5, 2, false).multiplicities() ==
        std::array<unsigned, 3>{1, 0, 1});
  CHECK(permutation_module(5, 2, true).multiplicities() ==
        std::array<unsigned, 3>{0, 1, 1});

  // Regular representation: left translation on s^a t^b, index 3a + b.
  for (u64 p : {5ULL, 101ULL}) {
    for (unsigned j : {1u, 2u}) {
      ModMatrix s(p, j, 6, 6), t(p, j, 6, 6);
      for (unsigned a = 0; a < 2; ++a)
        for (unsigned b = 0; b < 3; ++b) {
          s.at(3 * (1 - a) + b, 3 * a + b) = 1;
          unsigned bt = (b + (a ? 2 : 1)) % 3;
          t.at(3 * a + bt, 3 * a + b) = 1;
        }
      auto reg = S3Module::make(s, t);
      // j = 1, p = 5: the trace of a projector cannot distinguish rank 1
      // from rank 6; the Smith-form rank must.
      CHECK(reg.multiplicities() == std::array<unsigned, 3>{1, 1, 2});
    }
  }

  // tau = 1 factors through the quotient of order two.
  auto sg = from_rows(5, 2, {{1, 0, 0}, {0, 1, 0}, {0, 0, -1}});
  auto flat = S3Module::make(sg, ModMatrix::identity(5, 2, 3));
  CHECK(flat.multiplicities() == std::array<unsigned, 3>{2, 1, 0});
}

TEST_CASE("degenerate model grid") {
  for (u64 p : {5ULL, 7ULL, 101ULL}) {
    for (unsigned j : {1u, 2u, 3u}) {
      for (unsigned i : {0u, 1u, 2u, 3u, 5u}) {
        auto rep = verify_degenerate_model(p, j, i);
        CHECK(rep.ok());
        CHECK(rep.ell == std::min(i, j));
        std::vector<unsigned> expect;
        if (rep.ell > 0) expect.push_back(rep.ell);
        CHECK(rep.pairwise_invariants == expect);
        CHECK(rep.middle_type == std::array<unsigned, 3>{1, 1, 2});
        CHECK(rep.quotient_type == std::array<unsigned, 3>{1, 1, 1});
        CHECK(rep.inertia_applicable == (i >= j));
      }
    }
  }
  CHECK_THROWS_AS(verify_degenerate_model(5, 3, 1, true), hypothesis_not_met);
  CHECK(verify_degenerate_model(5, 1, 3, true).ok());
  CHECK_THROWS_AS(verify_degenerate_model(3, 1, 1), small_prime);
}

TEST_CASE("degenerate model intersections by enumeration") {
  // Rebuild the two component images inside the rank-4 quotient from their
  // closed form and intersect them literally.
  for (unsigned j : {1u, 2u}) {
    for (unsigned i : {0u, 1u, 2u, 3u}) {
      const u64 p = 5;
      unsigned ell = std::min(i, j);
      u128 mod = pow_u128_checked(p, j);
      u128 c3 = mulmod128(pow_u128_checked(p, ell) % mod,
                          invmod128(3, mod), mod);
      ModMatrix P1(p, j, 4, 2), P2(p, j, 4, 2);
      P1.at(0, 0) = 1;
      P1.at(1, 1) = c3;
      P1.at(2, 1) = (mod - c3) % mod;
      P1.at(3, 1) = 1;
      P2.at(1, 0) = 1;
      P2.at(0, 1) = (mod - c3) % mod;
      P2.at(2, 1) = c3;
      P2.at(3, 1) = 1;
      auto S1 = span_set(P1), S2 = span_set(P2);
      std::set<std::vector<u64>> expect;
      for (const auto& v : S1)
        if (S2.count(v)) expect.insert(v);
      // The brute-force intersection is the predicted cyclic piece on the
      // last axis.
      std::set<std::vector<u64>> predicted;
      u64 step = 1;
      for (unsigned s = 0; s < j - ell; ++s) step *= p;
      for (u64 t = 0; t < static_cast<u64>(mod); t += step)
        predicted.insert({0, 0, 0, t});
      CHECK(expect == predicted);
      CHECK(span_set(intersect_submodules(P1, P2)) == expect);
      auto rep = verify_degenerate_model(p, j, i);
      std::vector<unsigned> inv;
      if (ell > 0) inv.push_back(ell);
      CHECK(rep.pairwise_invariants == inv);
    }
  }
}

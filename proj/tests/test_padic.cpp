#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "s3def/padic.hpp"

using namespace s3def;

namespace {

QuadElt qe(const LocalQuadField& K, i128 a, i128 b) { return QuadElt(K, a, b); }

QuadElt eval_cubic(const std::vector<i64>& f, const QuadElt& z) {
  QuadElt r(z.K, 0, 0);
  for (size_t i = f.size(); i-- > 0;) r = r * z + qe(z.K, f[i], 0);
  return r;
}

// x^3 + 7x - 12: discriminant -5260, the running example throughout.
const std::vector<i64> kCubic{-12, 7, 0, 1};

}  // namespace

TEST_CASE("PadicInt basics") {
  PadicInt x(5, 3, -12);
  CHECK(x.v == 113);
  CHECK(x.valuation() == 0);
  PadicInt y(5, 3, 50);
  CHECK(y.valuation() == 2);
  CHECK((x + y).v == (113 + 50) % 125);
  CHECK((x * x).v == (113 * 113) % 125);
  CHECK((-y).v == 75);
  CHECK(PadicInt(5, 3, 0).valuation() == 3);
  CHECK((x * x.inverse()).v == 1);
  CHECK_THROWS_AS(y.inverse(), not_unit);
  CHECK(x.pow(4).v == powmod128(113, 4, 125));
  // Joint precision: equality and arithmetic land at the smaller N.
  PadicInt x2(5, 2, 113 + 25);
  CHECK(x == x2);
  CHECK((x + x2).N == 2);
  CHECK(x.reduce_to(1).v == 3);
  CHECK_THROWS_AS(x.reduce_to(4), precision_too_low);
  CHECK_THROWS_AS(x + PadicInt(7, 3, 1), wrong_field);
}

TEST_CASE("roots mod p") {
  CHECK(roots_mod_p(kCubic, 5) == std::vector<u64>{2, 4});
  // Large-p path goes through gcd(x^p - x, f) and residue splitting.
  std::vector<i64> g{-385, 167, -23, 1};  // (x-5)(x-7)(x-11)
  CHECK(roots_mod_p(g, 1000003) == std::vector<u64>{5, 7, 11});
  std::vector<i64> two{80779853376LL, -777777, 1};  // (x-123456)(x-654321)
  CHECK(roots_mod_p(two, 1000003) == std::vector<u64>{123456, 654321});
  std::vector<i64> none{1, 0, 1};  // x^2 + 1, p = 3 mod 4
  CHECK(roots_mod_p(none, 1000003).empty());
  std::vector<i64> sq{9, -6, 1};  // (x-3)^2: distinct-root count is one
  CHECK(roots_mod_p(sq, 1000003) == std::vector<u64>{3});
  std::vector<i64> cubefree{2, -1, 0, 1};  // x^3 - x + 2: no roots mod 5
  CHECK(roots_mod_p(cubefree, 5).empty());
}

TEST_CASE("hensel lift") {
  CHECK(hensel_lift_root(kCubic, 2, 5, 1) == 2);
  CHECK(hensel_lift_root(kCubic, 2, 5, 3) == 62);
  u128 r6 = hensel_lift_root(kCubic, 2, 5, 6);
  CHECK(eval_poly_mod(kCubic, r6, pow_u128_checked(5, 6)) == 0);
  CHECK(r6 % 125 == 62);
  CHECK_THROWS_AS(hensel_lift_root(kCubic, 1, 5, 3), not_root);
  CHECK_THROWS_AS(hensel_lift_root(kCubic, 4, 5, 3), not_simple_root);
  std::vector<i64> dbl{1, -2, 1};  // (x-1)^2
  CHECK_THROWS_AS(hensel_lift_root(dbl, 1, 7, 3), not_simple_root);
}

TEST_CASE("sqrt mod prime powers") {
  CHECK(sqrt_mod_prime_power(19, 5, 2) == 12);  // 12^2 = 144 = 19 + 125
  u128 m = pow_u128_checked(7, 5);
  for (u64 x = 1; x < 120; ++x) {
    if (x % 7 == 0) continue;
    u128 a = mulmod128(x, x, m);
    u128 r = sqrt_mod_prime_power(a, 7, 5);
    CHECK(mulmod128(r, r, m) == a);
    u64 x7 = x % 7;
    CHECK(static_cast<u64>(r % 7) == std::min(x7, 7 - x7));
  }
  CHECK_THROWS_AS(sqrt_mod_prime_power(3, 7, 4), not_root);
  CHECK_THROWS_AS(sqrt_mod_prime_power(14, 7, 4), not_unit);
}

TEST_CASE("teichmuller lifts") {
  CHECK(teichmuller(2, 5, 3) == 57);  // 57^2 = -1 mod 125
  CHECK(teichmuller(10, 5, 3) == 0);
  u128 m = pow_u128_checked(7, 5);
  for (u64 a = 1; a < 7; ++a) {
    u128 t = teichmuller(a, 7, 5);
    CHECK(t % 7 == a);
    CHECK(powmod128(t, 6, m) == 1);
    CHECK(teichmuller(t, 7, 5) == t);
  }
}

TEST_CASE("pth power index in Z_p") {
  // Image of the unit 14x - 19 at the Q_5-root of the running cubic.
  CHECK(powmod128(849, 4, 125) == 101);
  CHECK(pth_power_index_qp(849, 5, 2, 3) == 1);
  CHECK(pth_power_index_qp(2, 7, 3, 4) == 0);
  CHECK(pth_power_index_qp(128, 7, 3, 4) == 1);  // 2^7
  CHECK_THROWS_AS(pth_power_index_qp(2, 5, 3, 3), precision_too_low);
  CHECK_THROWS_AS(pth_power_index_qp(10, 5, 1, 3), not_unit);

  // Exhaustive oracle: the valuation criterion against the literal sets of
  // p-th and p^2-th powers mod p^4.
  for (u64 p : {5ULL, 7ULL}) {
    u64 m = p * p * p * p;
    std::vector<uint8_t> s1(m, 0), s2(m, 0);
    for (u64 x = 1; x < m; ++x) {
      if (x % p == 0) continue;
      s1[static_cast<u64>(powmod128(x, p, m))] = 1;
      s2[static_cast<u64>(powmod128(x, p * p, m))] = 1;
    }
    int mismatches = 0;
    for (u64 u = 1; u < m; ++u) {
      if (u % p == 0) continue;
      unsigned expect = s2[u] ? 2 : (s1[u] ? 1 : 0);
      if (pth_power_index_qp(u, p, 2, 4) != expect) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("pth roots of unity in local fields") {
  CHECK(contains_pth_roots_of_unity(11, 1, 5));
  CHECK(!contains_pth_roots_of_unity(7, 1, 5));
  CHECK(contains_pth_roots_of_unity(121, 2, 5));  // 121 = 1 mod 5
  CHECK(!contains_pth_roots_of_unity(25, 2, 5));  // char 5, e < p - 1
  CHECK(contains_pth_roots_of_unity(5, 4, 5));
  CHECK(!contains_pth_roots_of_unity(49, 1, 7));
}

TEST_CASE("quadratic extension construction") {
  auto Kr = make_quadratic_extension(10, 5, 3);
  CHECK(Kr.ramified);
  CHECK(Kr.e() == 2);
  CHECK(Kr.residue_size() == 5);
  CHECK(Kr.m_precision() == 6);
  auto Ku = make_quadratic_extension(2, 5, 3);
  CHECK(!Ku.ramified);
  CHECK(Ku.f() == 2);
  CHECK(Ku.residue_size() == 25);
  CHECK(Ku.m_precision() == 3);
  CHECK_THROWS_AS(make_quadratic_extension(11, 5, 3), square_discriminant);
  CHECK_THROWS_AS(make_quadratic_extension(-1, 5, 3), square_discriminant);
  CHECK_THROWS_AS(make_quadratic_extension(50, 5, 3), bad_valuation);
  CHECK_THROWS_AS(make_quadratic_extension(0, 5, 3), bad_valuation);
  CHECK_THROWS_AS(make_quadratic_extension(2, 4, 3), small_prime);
  CHECK_THROWS_AS(make_quadratic_extension(5, 2, 3), small_prime);
}

TEST_CASE("quadratic field arithmetic") {
  auto K = make_quadratic_extension(3, 7, 4);  // unramified
  QuadElt z = qe(K, 2, 1);
  CHECK(z.norm() == 1);  // 4 - 3
  CHECK(z.trace() == 4);
  CHECK(z * z.inverse() == qe(K, 1, 0));
  QuadElt w = qe(K, 5, -2);
  CHECK(z.conj() * w.conj() == (z * w).conj());
  u128 m = K.mod;
  CHECK((z * w).norm() == mulmod128(z.norm(), w.norm(), m));
  CHECK(z.pow(3) == z * z * z);
  CHECK(z.pow(0) == qe(K, 1, 0));

  auto Kr = make_quadratic_extension(10, 5, 3);
  CHECK(qe(Kr, 0, 1).v_m() == 1);   // sqrt(10)
  CHECK(qe(Kr, 5, 0).v_m() == 2);
  CHECK(qe(Kr, 0, 5).v_m() == 3);
  CHECK(qe(Kr, 0, 0).v_m() == 6);
  CHECK(qe(Kr, 3, 4).v_m() == 0);
  CHECK_THROWS_AS(qe(Kr, 0, 1).inverse(), not_unit);
  // Products add valuations below the cap.
  CHECK((qe(Kr, 5, 0) * qe(Kr, 0, 1)).v_m() == 3);
  QuadElt one_plus = qe(Kr, 1, 5);
  CHECK(one_plus.one_mod_mk(3));
  CHECK(!one_plus.one_mod_mk(4));
  CHECK_THROWS_AS(one_plus.one_mod_mk(7), precision_too_low);
  CHECK_THROWS_AS(qe(Kr, 1, 0) + qe(K, 1, 0), wrong_field);
  CHECK(qe(Kr, 1 + 25, 6).reduce_to(2) == qe(Kr.at_precision(2), 1, 6));
}

TEST_CASE("embedding a cubic root into its quadratic completion") {
  auto K = make_quadratic_extension(10, 5, 3);
  QuadElt z = quad_embed_cubic_root(kCubic, K);
  CHECK(z.K.N == 2);  // one digit spent on the discriminant valuation
  CHECK(z.a == 19);
  CHECK(z.b == 6);
  CHECK(eval_cubic(kCubic, z) == qe(z.K, 0, 0));

  // Same field, different generator: 15/10 is a square unit in Z_5.
  auto K15 = make_quadratic_extension(15, 5, 3);
  QuadElt z15 = quad_embed_cubic_root(kCubic, K15);
  CHECK(z15.a == 19);
  CHECK(z15.b == 7);
  CHECK(eval_cubic(kCubic, z15) == qe(z15.K, 0, 0));

  // Higher working precision refines, never contradicts.
  auto K4 = make_quadratic_extension(10, 5, 4);
  QuadElt z4 = quad_embed_cubic_root(kCubic, K4);
  CHECK(z4.K.N == 3);
  CHECK(z4.a % 25 == 19);
  CHECK(z4.b % 25 == 6);
  CHECK(eval_cubic(kCubic, z4) == qe(z4.K, 0, 0));

  // Unit image 14*theta - 19 under the embedding, and its power index.
  QuadElt u = qe(z.K, 14, 0) * z + qe(z.K, -19, 0);
  CHECK(u.a == 22);
  CHECK(u.b == 9);
  CHECK(quad_unit_power_index(u, 2) == 0);
  QuadElt u4 = qe(z4.K, 14, 0) * z4 + qe(z4.K, -19, 0);
  CHECK(quad_unit_power_index(u4, 2) == 0);

  // Unramified target: x^3 - 1 = (x - 1)(x^2 + x + 1) over Q_5.
  std::vector<i64> zeta{-1, 0, 0, 1};
  auto Ku = make_quadratic_extension(2, 5, 3);
  QuadElt z3 = quad_embed_cubic_root(zeta, Ku);
  CHECK(z3.K.N == 3);
  CHECK(z3.a == 62);
  CHECK(z3.b == 22);
  CHECK(eval_cubic(zeta, z3) == qe(z3.K, 0, 0));
  CHECK((z3 * z3 + z3 + qe(z3.K, 1, 0)) == qe(z3.K, 0, 0));
  // A root of unity is a p^i-th power for every i: the Teichmuller group
  // has order prime to p, so the index saturates at whatever the precision
  // can certify.
  CHECK(quad_unit_power_index(z3, 1) == 1);
  CHECK(quad_unit_power_index(z3, 2) == 2);  // e = 1: precision 3 suffices
  CHECK_THROWS_AS(quad_unit_power_index(z3, 3), precision_too_low);
  auto Ku5 = make_quadratic_extension(2, 5, 5);
  QuadElt z3hi = quad_embed_cubic_root(zeta, Ku5);
  CHECK(quad_unit_power_index(z3hi, 3) == 3);

  // Mismatched targets.
  CHECK_THROWS_AS(quad_embed_cubic_root(kCubic, Ku), wrong_field);
  auto K5r = make_quadratic_extension(5, 5, 3);
  CHECK_THROWS_AS(quad_embed_cubic_root(kCubic, K5r), wrong_field);
  CHECK_THROWS_AS(quad_embed_cubic_root(zeta, K), wrong_field);

  // Degenerate factorizations.
  std::vector<i64> split{-6, 11, -6, 1};  // (x-1)(x-2)(x-3)
  CHECK_THROWS_AS(quad_embed_cubic_root(split, K), no_quadratic_factor);
  std::vector<i64> deep{-54, 83, -30, 1};  // (x-1)(x-2)(x-27)
  auto K6 = make_quadratic_extension(10, 5, 6);
  CHECK_THROWS_AS(quad_embed_cubic_root(deep, K6), no_quadratic_factor);
  CHECK_THROWS_AS(quad_embed_cubic_root(deep, K4), precision_too_low);
  std::vector<i64> norootp{2, -1, 0, 1};  // x^3 - x + 2, no root mod 5
  CHECK_THROWS_AS(quad_embed_cubic_root(norootp, K), no_quadratic_factor);
  std::vector<i64> eis{5, 5, 0, 1};  // triple root 0 mod 5
  CHECK_THROWS_AS(quad_embed_cubic_root(eis, K), not_simple_root);
}

TEST_CASE("quad unit power index against exhaustive enumeration") {
  SUBCASE("ramified") {
    auto K = make_quadratic_extension(10, 5, 3);
    const u64 M = 125;
    std::vector<uint8_t> s1(M * M, 0), s2(M * M, 0);
    for (u64 a = 0; a < M; ++a) {
      if (a % 5 == 0) continue;
      for (u64 b = 0; b < M; ++b) {
        QuadElt z5 = qe(K, a, b).pow(5);
        QuadElt z25 = z5.pow(5);
        s1[static_cast<u64>(z5.a) * M + static_cast<u64>(z5.b)] = 1;
        s2[static_cast<u64>(z25.a) * M + static_cast<u64>(z25.b)] = 1;
      }
    }
    int mismatches = 0;
    for (u64 a = 0; a < M; ++a) {
      if (a % 5 == 0) continue;
      for (u64 b = 0; b < M; ++b) {
        unsigned expect = s2[a * M + b] ? 2 : (s1[a * M + b] ? 1 : 0);
        if (quad_unit_power_index(qe(K, a, b), 2) != expect) ++mismatches;
      }
    }
    CHECK(mismatches == 0);
  }
  SUBCASE("unramified") {
    auto K = make_quadratic_extension(2, 5, 3);
    const u64 M = 125;
    std::vector<uint8_t> s1(M * M, 0);
    for (u64 a = 0; a < M; ++a) {
      for (u64 b = 0; b < M; ++b) {
        if (a % 5 == 0 && b % 5 == 0) continue;
        QuadElt z5 = qe(K, a, b).pow(5);
        s1[static_cast<u64>(z5.a) * M + static_cast<u64>(z5.b)] = 1;
      }
    }
    int mismatches = 0;
    for (u64 a = 0; a < M; ++a) {
      for (u64 b = 0; b < M; ++b) {
        if (a % 5 == 0 && b % 5 == 0) continue;
        unsigned expect = s1[a * M + b] ? 1 : 0;
        if (quad_unit_power_index(qe(K, a, b), 1) != expect) ++mismatches;
      }
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("power index chain and scalar compatibility") {
  auto Kr = make_quadratic_extension(10, 5, 5);
  auto Ku = make_quadratic_extension(2, 5, 5);
  for (const auto& K : {Kr, Ku}) {
    for (i64 a : {1, 2, 3, 7, 22}) {
      for (i64 b : {0, 1, 6, 9}) {
        QuadElt z = qe(K, a, b);
        unsigned idx = quad_unit_power_index(z, 2);
        CHECK(quad_unit_power_index(z.pow(5), 2) == std::min(idx + 1, 2u));
        CHECK(quad_unit_power_index(z.pow(25), 2) == 2);
      }
    }
  }
  // Rational units have the same index in Q_p and in either completion.
  for (u64 u : {2ULL, 3ULL, 849ULL, 101ULL, 7ULL, 26ULL}) {
    unsigned base = pth_power_index_qp(u, 5, 2, 5);
    CHECK(quad_unit_power_index(qe(Kr, static_cast<i128>(u), 0), 2) == base);
    CHECK(quad_unit_power_index(qe(Ku, static_cast<i128>(u), 0), 2) == base);
  }
  // Error paths.
  CHECK_THROWS_AS(quad_unit_power_index(qe(Kr, 0, 1), 2), not_unit);
  auto K3 = make_quadratic_extension(2, 3, 4);
  CHECK_THROWS_AS(quad_unit_power_index(qe(K3, 2, 1), 1), small_prime);
}

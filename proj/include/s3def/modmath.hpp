#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "s3def/errors.hpp"

namespace s3def {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

std::string to_string_u128(u128 x);
std::string to_string_i128(i128 x);
// Parses a decimal string (optionally signed for the i128 variant); throws
// out_of_range on overflow or junk.
u128 parse_u128(const std::string& s);

inline u64 mulmod64(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}
u64 powmod64(u64 a, u64 e, u64 m);
u64 invmod64(u64 a, u64 m);  // throws not_unit if gcd(a, m) != 1

// Multiplication mod m for moduli that may exceed 2^64 (shift-and-add; the
// call sites are all desk-scale so the O(bits) loop is fine).
u128 mulmod128(u128 a, u128 b, u128 m);
u128 powmod128(u128 a, u128 e, u128 m);
u128 invmod128(u128 a, u128 m);  // throws not_unit if gcd(a, m) != 1
u128 gcd128(u128 a, u128 b);

// p^n with an overflow check (throws precision_too_low past 2^126).
u128 pow_u128_checked(u64 p, unsigned n);

// v_p(x) for x != 0; returns the sentinel `cap` when p^cap | x.
unsigned valuation_u128(u128 x, u64 p, unsigned cap);

inline u128 reduce_signed(i128 c, u128 m) {
  i128 r = c % static_cast<i128>(m);
  if (r < 0) r += static_cast<i128>(m);
  return static_cast<u128>(r);
}

// Representative of v mod m in (-m/2, m/2].
inline i128 centered(u128 v, u128 m) {
  v %= m;
  if (v > m / 2) return static_cast<i128>(v) - static_cast<i128>(m);
  return static_cast<i128>(v);
}

// Kronecker symbol (a|n) for n > 0, a arbitrary sign.
int kronecker(i64 a, u64 n);

// Square root mod an odd prime via Tonelli-Shanks; requires (a|p) = 1,
// throws not_root otherwise. Returns the root r with r <= p - r.
u64 sqrt_mod_prime(u64 a, u64 p);

// Deterministic Miller-Rabin, exact for all n < 2^64 (first thirteen prime
// bases, complete below 3.317e24).
bool is_prime_u64(u64 n);

// Same thirteen bases lifted to 128-bit arithmetic: still deterministic for
// n < 3.317e24, strong probable-prime beyond that. Throws bound_too_large
// for n >= 2^126 (mulmod128 ceiling).
bool is_probable_prime_u128(u128 n);

u128 isqrt_u128(u128 n);
inline bool is_square_u128(u128 n) {
  u128 r = isqrt_u128(n);
  return r * r == n;
}

// Prime factorization, ascending, as (prime, exponent) pairs; trial division
// then Brent's rho. Primality of cofactors certified only below 3.317e24
// (see is_probable_prime_u128).
std::vector<std::pair<u128, unsigned>> factor_u128(u128 n);

std::vector<u64> primes_up_to(u64 limit);

}  // namespace s3def

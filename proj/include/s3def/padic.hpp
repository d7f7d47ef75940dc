#pragma once

#include <vector>

#include "s3def/modmath.hpp"

namespace s3def {

// Element of Z_p known mod p^N. Arithmetic between operands with the same p
// lands at the smaller of the two precisions.
struct PadicInt {
  u64 p = 0;
  unsigned N = 0;
  u128 mod = 0;  // p^N
  u128 v = 0;    // representative in [0, mod)

  PadicInt() = default;
  PadicInt(u64 p, unsigned N, i128 value);

  PadicInt operator+(const PadicInt& o) const;
  PadicInt operator-(const PadicInt& o) const;
  PadicInt operator*(const PadicInt& o) const;
  PadicInt operator-() const;
  // Agreement at the joint precision (requires same p).
  bool operator==(const PadicInt& o) const;
  bool operator!=(const PadicInt& o) const { return !(*this == o); }

  bool is_unit() const { return v % p != 0; }
  unsigned valuation() const;           // v_p, capped at N
  PadicInt inverse() const;             // throws not_unit
  PadicInt pow(u128 e) const;
  PadicInt reduce_to(unsigned M) const; // M <= N, else precision_too_low
};

// f(x) mod m, with f[i] the coefficient of x^i.
u128 eval_poly_mod(const std::vector<i64>& f, u128 x, u128 m);

// Distinct roots of f mod p, ascending. Handles any degree; the split of
// gcd(f, x^p - x) walks shift parameters deterministically, so the result
// does not depend on hidden state.
std::vector<u64> roots_mod_p(const std::vector<i64>& f, u64 p);

// Newton-lift a simple root of f from mod p to mod p^N. Requires
// f(r0) = 0 mod p (not_root) and f'(r0) != 0 mod p (not_simple_root).
u128 hensel_lift_root(const std::vector<i64>& f, u64 r0, u64 p, unsigned N);

// sqrt of a unit square mod p^M (p odd); returns the root whose mod-p
// reduction is the smaller of the pair. Throws not_unit if p | a,
// not_root if a is a non-residue.
u128 sqrt_mod_prime_power(u128 a, u64 p, unsigned M);

// The (p-1)-st root of unity congruent to a mod p (0 for p | a), mod p^N.
u128 teichmuller(u128 a, u64 p, unsigned N);

// Largest i <= max_i with u in (Z_p^x)^(p^i), decided by the criterion
// u^(p-1) = 1 mod p^(i+1). Requires N >= max_i + 1.
unsigned pth_power_index_qp(u128 u, u64 p, unsigned max_i, unsigned N);

// True when a local field with residue field of size q and absolute
// ramification index e contains the p-th roots of unity (p > 2).
bool contains_pth_roots_of_unity(u64 q, unsigned e, u64 p);

// Q_p(sqrt(d)) for odd p, v_p(d) in {0,1}. Elements carry coordinates
// a + b sqrt(d) with a, b mod p^N; the maximal-ideal precision of such an
// element is 2N when ramified, N when unramified.
struct LocalQuadField {
  u64 p = 0;
  i64 d = 0;
  unsigned N = 0;
  bool ramified = false;
  u128 mod = 0;    // p^N
  u128 d_mod = 0;  // d reduced into [0, mod)

  unsigned e() const { return ramified ? 2 : 1; }
  unsigned f() const { return ramified ? 1 : 2; }
  u128 residue_size() const { return ramified ? p : static_cast<u128>(p) * p; }
  unsigned m_precision() const { return ramified ? 2 * N : N; }
  LocalQuadField at_precision(unsigned M) const;
};

// Throws bad_valuation unless v_p(d) in {0,1}, square_discriminant when d is
// a square unit (the extension would be trivial).
LocalQuadField make_quadratic_extension(i64 d, u64 p, unsigned N);

struct QuadElt {
  LocalQuadField K;
  u128 a = 0, b = 0;

  QuadElt() = default;
  QuadElt(const LocalQuadField& K, i128 a, i128 b);

  QuadElt operator+(const QuadElt& o) const;
  QuadElt operator-(const QuadElt& o) const;
  QuadElt operator*(const QuadElt& o) const;
  bool operator==(const QuadElt& o) const;
  bool operator!=(const QuadElt& o) const { return !(*this == o); }

  QuadElt conj() const;
  u128 norm() const;   // a^2 - d b^2 mod p^N
  u128 trace() const;  // 2a mod p^N
  unsigned v_m() const;  // valuation in the maximal ideal, capped
  bool is_unit() const { return v_m() == 0; }
  QuadElt inverse() const;  // throws not_unit
  QuadElt pow(u128 e) const;
  // z = 1 mod m^k; requires k <= m_precision.
  bool one_mod_mk(unsigned k) const;
  QuadElt reduce_to(unsigned M) const;
};

// Largest i <= max_i with z in (O_K^x)^(p^i), for p > 3 (small_prime
// otherwise). Splits z = omega * z1 with omega the Teichmuller part and
// tests z1 = 1 mod m^(1+ie). Throws precision_too_low only when the
// valuation saturates below the precision needed to certify max_i.
unsigned quad_unit_power_index(const QuadElt& z, unsigned max_i);

// The root in K \ Q_p of a monic integer cubic whose Q_p-factorization is
// (linear)(quadratic), as an element of K at the precision the input data
// supports (at most K.N). Throws no_quadratic_factor when f has three
// Q_p-roots or none, not_simple_root on a triple root mod p, wrong_field
// when the quadratic factor generates a different quadratic extension.
// Of the two conjugate roots, returns the one whose sqrt(d)-coordinate has
// leading centered base-p digit in [1, (p-1)/2].
QuadElt quad_embed_cubic_root(const std::vector<i64>& f,
                              const LocalQuadField& K);

}  // namespace s3def

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "s3def/modmath.hpp"

namespace s3def {

// Exponents of T1^a T2^b T3^c.
using Mono = std::array<unsigned, 3>;

inline unsigned mono_degree(const Mono& m) { return m[0] + m[1] + m[2]; }

// Graded order; within a degree T1 comes before T2 before T3, so the first
// reported discrepancy is deterministic.
struct GrlexLess {
  bool operator()(const Mono& a, const Mono& b) const {
    unsigned da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da < db;
    return a > b;
  }
};

std::string mono_to_string(const Mono& m);

// Element of (Z/p^N)[[T1,T2,T3]] truncated past total degree D.
struct TruncSeries {
  u64 p = 0;
  unsigned N = 0, D = 0;
  u128 mod = 0;
  std::map<Mono, u128, GrlexLess> c;

  TruncSeries() = default;
  TruncSeries(u64 p, unsigned N, unsigned D);
  static TruncSeries constant(u64 p, unsigned N, unsigned D, i128 value);
  static TruncSeries variable(u64 p, unsigned N, unsigned D, unsigned k);

  u128 coeff(const Mono& m) const;
  u128 constant_term() const { return coeff({0, 0, 0}); }
  bool is_zero() const { return c.empty(); }

  TruncSeries operator+(const TruncSeries& o) const;
  TruncSeries operator-(const TruncSeries& o) const;
  TruncSeries operator*(const TruncSeries& o) const;
  TruncSeries scaled(i128 k) const;
  bool operator==(const TruncSeries& o) const;
  bool operator!=(const TruncSeries& o) const { return !(*this == o); }

  // Value at T_k = t_k (each t_k mod p^N); exact mod p^min(N, D+1) when
  // every v_p(t_k) >= 1.
  u128 evaluate(u128 t1, u128 t2, u128 t3) const;
};

// Newton iterations; both need the constant term to behave: a unit for the
// inverse (not_unit otherwise), exactly 1 for the square root
// (bad_constant_term otherwise).
TruncSeries inverse(const TruncSeries& a);
TruncSeries sqrt_series(const TruncSeries& a);

struct Mat2 {
  TruncSeries a, b, c, d;  // [[a, b], [c, d]]

  static Mat2 identity(u64 p, unsigned N, unsigned D);
  Mat2 operator*(const Mat2& o) const;
  Mat2 operator+(const Mat2& o) const;
  Mat2 operator-(const Mat2& o) const;
  bool operator==(const Mat2& o) const;
  bool operator!=(const Mat2& o) const { return !(*this == o); }
  TruncSeries det() const;
  bool is_zero() const;
};

// [[h, f], [g, h]] with h = sqrt(1 + f g); determinant 1 identically.
// f and g must have zero constant term (nonzero_constant_term otherwise).
Mat2 eta_matrix(const TruncSeries& f, const TruncSeries& g);

// Degree-one agreement, mod p, of (f, g) with the standard ramified image
// (T3, -3 T3).
bool first_order_matches_v(const TruncSeries& f, const TruncSeries& g);

// The explicit lift over Z/p^N [[T1,T2,T3]]/(deg > D): constant matrices of
// prime-to-p order for sigma and tau, diagonal unipotent u, and
// v = s + T3 J with J = [[0,1],[-3,0]], s = sqrt(1 - 3 T3^2).
struct Deformation {
  u64 p = 0;
  unsigned N = 0, D = 0;
  bool two_parameter = false;
  Mat2 sigma, tau, u, v;
  TruncSeries f, g;  // off-diagonal entries of v
};

// two_parameter: u = diag(1+T1, 1+T2) instead of the scalar diag(1+T1, 1+T1).
Deformation make_deformation(u64 p, unsigned N, unsigned D,
                             bool two_parameter = false);

struct RelationCheck {
  std::string name;
  bool ok = false;
  std::string detail;  // first offending entry/monomial when not ok
};

struct DeformationReport {
  u64 p = 0;
  unsigned N = 0, D = 0;
  bool two_parameter = false;
  std::vector<RelationCheck> relations;
  bool ok() const {
    for (const auto& r : relations)
      if (!r.ok) return false;
    return true;
  }
};

DeformationReport verify_deformation(const Deformation& d);

struct Rational {
  i64 num = 0;
  i64 den = 1;
};

struct LociReport {
  unsigned precision = 0;  // congruences are certified mod p^precision
  std::string caveat;
  std::string f_value, g_value;  // decimal, mod p^precision
  bool reducible = false;
  bool ordinary = false;
  bool dihedral = false;
};

// Substitutes T_k = t_k. Each t_k needs v_p >= 1 and a denominator prime to
// p (bad_valuation / not_unit otherwise); throws precision_too_low when
// min(N, D+1) < 2.
LociReport evaluate_loci(const Deformation& d, Rational t1, Rational t2,
                         Rational t3);

}  // namespace s3def

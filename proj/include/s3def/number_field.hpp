#pragma once

#include <array>
#include <string>
#include <vector>

#include "s3def/modmath.hpp"

namespace s3def {

// Monic integer cubic x^3 + c2 x^2 + c1 x + c0.
struct Cubic {
  i64 c2 = 0, c1 = 0, c0 = 0;
};

i128 cubic_disc(const Cubic& f);
// A monic integer cubic is reducible over Q exactly when it has an integer
// root (necessarily dividing c0).
bool cubic_has_integer_root(const Cubic& f);

using Vec3 = std::array<i128, 3>;
using Mat3 = std::array<Vec3, 3>;

// The maximal order of Q[x]/(f). Integral basis
//   w_i = (basis[i][0] + basis[i][1] th + basis[i][2] th^2) / den
// in Hermite form with w_0 = 1. Elements are integer coordinate vectors in
// the w-basis throughout this module. mult[i][j] gives the coordinates of
// w_i w_j; theta_pow[k] gives the coordinates of th^k.
struct CubicField {
  Cubic f;
  i128 poly_disc = 0;
  i128 disc = 0;
  u64 index = 1;  // [O_K : Z[th]]
  Mat3 basis;
  i128 den = 1;
  std::array<std::array<Vec3, 3>, 3> mult;
  Mat3 theta_pow;
  std::vector<std::pair<u64, unsigned>> disc_factors;  // of |disc|, ascending
};

// Throws reducible for cubics with a rational root and bound_too_large when
// the discriminant is past what the factorization layer certifies.
CubicField make_cubic_field(const Cubic& f);

Vec3 mul_elements(const CubicField& K, const Vec3& a, const Vec3& b);
// Determinant of multiplication by a on the w-basis.
i128 element_norm(const CubicField& K, const Vec3& a);
// Inverse of a unit (norm +-1); throws not_unit otherwise.
Vec3 unit_inverse(const CubicField& K, const Vec3& a);
// Numerators of a over the power basis: a = (n0 + n1 th + n2 th^2) / K.den.
Vec3 theta_numerator(const CubicField& K, const Vec3& a);

// N(x w0 + y w1 + z w2) as a ternary cubic form; coefficients in the order
// x^3, x^2 y, x^2 z, x y^2, x y z, x z^2, y^3, y^2 z, y z^2, z^3.
std::array<i128, 10> norm_form(const CubicField& K);
i128 norm_form_value(const std::array<i128, 10>& nf, i128 x, i128 y, i128 z);

// Integral ideals as row-Hermite-form bases in w-coordinates.
struct Ideal {
  Mat3 h;
};
struct PrimeIdeal {
  u64 q = 0;
  unsigned e = 1, f = 1;
  Ideal lat;
};

Ideal hnf_ideal(const std::vector<Vec3>& rows);  // rows must span rank 3
Ideal principal_ideal(const CubicField& K, const Vec3& a);
Ideal ideal_mul(const CubicField& K, const Ideal& I, const Ideal& J);
Ideal ideal_add(const Ideal& I, const Ideal& J);
i128 ideal_norm(const Ideal& I);
bool ideal_contains(const Ideal& I, const Vec3& v);
bool ideal_subset(const Ideal& I, const Ideal& J);  // I subset of J
bool ideal_equal(const Ideal& I, const Ideal& J);
// (I : J) = {x in K : xJ within I}, which here must come out integral.
Ideal ideal_colon(const CubicField& K, const Ideal& I, const Ideal& J);

// All primes above q with e, f and lattice; product of P^e recovers (q).
std::vector<PrimeIdeal> primes_above(const CubicField& K, u64 q);

struct PrimeSplit {
  u64 q = 0;
  std::vector<std::pair<unsigned, unsigned>> ef;  // (e, f), sorted descending
};
PrimeSplit splitting_type(const CubicField& K, u64 q);

unsigned element_valuation(const CubicField& K, const Vec3& a,
                           const PrimeIdeal& P);

double minkowski_bound(const CubicField& K);

// Fundamental unit of a cubic field with one real embedding (disc < 0, unit
// rank 1); throws not_totally_complex for totally real fields. The returned
// generator has real embedding > 1; regulator is its log. `certified` means
// either the Artin inequality 4u^3 + 24 > |disc| ruled out a smaller unit or
// an exhaustive coordinate-box sweep did.
struct UnitSearchResult {
  Vec3 coords;
  double regulator = 0;
  bool certified = false;
  std::string note;
};
UnitSearchResult fundamental_unit(const CubicField& K);

// Fundamental discriminant of Q(sqrt(d)) for non-square d.
i128 quadratic_field_disc(i128 d);
// Exact class number of an imaginary quadratic field by counting reduced
// forms; disc must be a fundamental discriminant < 0.
u64 quadratic_class_number(i128 fund_disc);

// Multiple of the class number: the order of Z^m / (harvested relations)
// for prime-ideal generators up to the Minkowski bound. h_K divides the
// result, and equality holds once the relation lattice saturates (the
// element sweep below is ample for moderate discriminants). Throws
// bound_too_large when the bound or the sweep budget is exceeded.
u64 class_number_upper(const CubicField& K);

}  // namespace s3def

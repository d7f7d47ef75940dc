#include "s3def/deformation.hpp"

#include <algorithm>

#include "s3def/errors.hpp"

namespace s3def {

std::string mono_to_string(const Mono& m) {
  if (mono_degree(m) == 0) return "1";
  std::string out;
  for (unsigned k = 0; k < 3; ++k) {
    if (m[k] == 0) continue;
    if (!out.empty()) out += " ";
    out += "T" + std::to_string(k + 1);
    if (m[k] > 1) out += "^" + std::to_string(m[k]);
  }
  return out;
}

TruncSeries::TruncSeries(u64 p_, unsigned N_, unsigned D_)
    : p(p_), N(N_), D(D_) {
  mod = pow_u128_checked(p_, N_);
}

TruncSeries TruncSeries::constant(u64 p, unsigned N, unsigned D, i128 value) {
  TruncSeries s(p, N, D);
  u128 v = reduce_signed(value, s.mod);
  if (v != 0) s.c[{0, 0, 0}] = v;
  return s;
}

TruncSeries TruncSeries::variable(u64 p, unsigned N, unsigned D, unsigned k) {
  if (k >= 3) throw bad_valuation("TruncSeries::variable: k must be 0..2");
  TruncSeries s(p, N, D);
  if (D >= 1) {
    Mono m{0, 0, 0};
    m[k] = 1;
    s.c[m] = 1;
  }
  return s;
}

u128 TruncSeries::coeff(const Mono& m) const {
  auto it = c.find(m);
  return it == c.end() ? 0 : it->second;
}

static void check_context(const TruncSeries& a, const TruncSeries& b) {
  if (a.p != b.p || a.N != b.N || a.D != b.D)
    throw wrong_field("series arithmetic in different rings");
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
  check_context(*this, o);
  TruncSeries r = *this;
  for (const auto& [m, v] : o.c) {
    u128 s = (r.coeff(m) + v) % mod;
    if (s == 0)
      r.c.erase(m);
    else
      r.c[m] = s;
  }
  return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
  check_context(*this, o);
  TruncSeries r = *this;
  for (const auto& [m, v] : o.c) {
    u128 s = (r.coeff(m) + mod - v) % mod;
    if (s == 0)
      r.c.erase(m);
    else
      r.c[m] = s;
  }
  return r;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
  check_context(*this, o);
  TruncSeries r(p, N, D);
  for (const auto& [ma, va] : c) {
    unsigned da = mono_degree(ma);
    for (const auto& [mb, vb] : o.c) {
      if (da + mono_degree(mb) > D) continue;
      Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      u128 s = (r.coeff(m) + mulmod128(va, vb, mod)) % mod;
      if (s == 0)
        r.c.erase(m);
      else
        r.c[m] = s;
    }
  }
  return r;
}

TruncSeries TruncSeries::scaled(i128 k) const {
  TruncSeries r(p, N, D);
  u128 kk = reduce_signed(k, mod);
  for (const auto& [m, v] : c) {
    u128 s = mulmod128(v, kk, mod);
    if (s != 0) r.c[m] = s;
  }
  return r;
}

bool TruncSeries::operator==(const TruncSeries& o) const {
  check_context(*this, o);
  return c == o.c;
}

u128 TruncSeries::evaluate(u128 t1, u128 t2, u128 t3) const {
  u128 vals[3] = {t1 % mod, t2 % mod, t3 % mod};
  u128 acc = 0;
  for (const auto& [m, v] : c) {
    u128 term = v;
    for (unsigned k = 0; k < 3; ++k)
      for (unsigned e = 0; e < m[k]; ++e) term = mulmod128(term, vals[k], mod);
    acc = (acc + term) % mod;
  }
  return acc;
}

TruncSeries inverse(const TruncSeries& a) {
  u128 a0 = a.constant_term();
  if (a0 % a.p == 0) throw not_unit("series inverse: constant term");
  TruncSeries x =
      TruncSeries::constant(a.p, a.N, a.D, static_cast<i128>(invmod128(a0, a.mod)));
  TruncSeries two = TruncSeries::constant(a.p, a.N, a.D, 2);
  unsigned goal = a.D + 1;
  for (unsigned reach = 1; reach < goal; reach *= 2) x = x * (two - a * x);
  return x;
}

TruncSeries sqrt_series(const TruncSeries& a) {
  if (a.constant_term() != 1)
    throw bad_constant_term("series sqrt: constant term must be 1");
  TruncSeries x = TruncSeries::constant(a.p, a.N, a.D, 1);
  u128 inv2 = invmod128(2, a.mod);
  unsigned goal = a.D + 1;
  for (unsigned reach = 1; reach < goal; reach *= 2)
    x = (x + a * inverse(x)).scaled(static_cast<i128>(inv2));
  return x;
}

Mat2 Mat2::identity(u64 p, unsigned N, unsigned D) {
  Mat2 m;
  m.a = TruncSeries::constant(p, N, D, 1);
  m.b = TruncSeries(p, N, D);
  m.c = TruncSeries(p, N, D);
  m.d = m.a;
  return m;
}

Mat2 Mat2::operator*(const Mat2& o) const {
  Mat2 r;
  r.a = a * o.a + b * o.c;
  r.b = a * o.b + b * o.d;
  r.c = c * o.a + d * o.c;
  r.d = c * o.b + d * o.d;
  return r;
}

Mat2 Mat2::operator+(const Mat2& o) const {
  return Mat2{a + o.a, b + o.b, c + o.c, d + o.d};
}

Mat2 Mat2::operator-(const Mat2& o) const {
  return Mat2{a - o.a, b - o.b, c - o.c, d - o.d};
}

bool Mat2::operator==(const Mat2& o) const {
  return a == o.a && b == o.b && c == o.c && d == o.d;
}

TruncSeries Mat2::det() const { return a * d - b * c; }

bool Mat2::is_zero() const {
  return a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero();
}

Mat2 eta_matrix(const TruncSeries& f, const TruncSeries& g) {
  check_context(f, g);
  if (f.constant_term() != 0 || g.constant_term() != 0)
    throw nonzero_constant_term("eta_matrix parameters");
  TruncSeries one = TruncSeries::constant(f.p, f.N, f.D, 1);
  Mat2 m;
  m.a = sqrt_series(one + f * g);
  m.b = f;
  m.c = g;
  m.d = m.a;
  return m;
}

bool first_order_matches_v(const TruncSeries& f, const TruncSeries& g) {
  check_context(f, g);
  u64 p = f.p;
  auto deg1 = [&](const TruncSeries& s, unsigned k) -> u64 {
    Mono m{0, 0, 0};
    m[k] = 1;
    return static_cast<u64>(s.coeff(m) % p);
  };
  return deg1(f, 0) == 0 && deg1(f, 1) == 0 && deg1(f, 2) == 1 % p &&
         deg1(g, 0) == 0 && deg1(g, 1) == 0 &&
         deg1(g, 2) == (p - 3 % p) % p;
}

Deformation make_deformation(u64 p, unsigned N, unsigned D,
                             bool two_parameter) {
  if (p <= 3 || !is_prime_u64(p))
    throw small_prime("make_deformation: p must be a prime > 3");
  if (N < 1 || D < 1) throw precision_too_low("make_deformation: N, D >= 1");
  Deformation d;
  d.p = p;
  d.N = N;
  d.D = D;
  d.two_parameter = two_parameter;
  auto cst = [&](i128 v) { return TruncSeries::constant(p, N, D, v); };
  auto var = [&](unsigned k) { return TruncSeries::variable(p, N, D, k); };
  u128 mod = pow_u128_checked(p, N);
  u128 inv2 = invmod128(2, mod);
  u128 minus_half = mod - inv2;
  u128 minus_3half = mod - mulmod128(3, inv2, mod);

  d.sigma = Mat2{cst(1), cst(0), cst(0), cst(-1)};
  d.tau = Mat2{cst(static_cast<i128>(minus_half)), cst(static_cast<i128>(inv2)),
               cst(static_cast<i128>(minus_3half)),
               cst(static_cast<i128>(minus_half))};
  d.u = Mat2{cst(1) + var(0), cst(0), cst(0),
             cst(1) + var(two_parameter ? 1 : 0)};
  d.f = var(2);
  d.g = var(2).scaled(-3);
  TruncSeries s = sqrt_series(cst(1) + d.f * d.g);
  d.v = Mat2{s, d.f, d.g, s};
  return d;
}

namespace {

// First nonzero coefficient of m, scanning entries row-major and monomials
// in the graded order.
std::string first_discrepancy(const Mat2& m) {
  const TruncSeries* entries[4] = {&m.a, &m.b, &m.c, &m.d};
  const char* names[4] = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};
  for (int k = 0; k < 4; ++k) {
    if (entries[k]->is_zero()) continue;
    const auto& [mono, coeff] = *entries[k]->c.begin();
    return std::string("entry ") + names[k] + ", monomial " +
           mono_to_string(mono) + ", coefficient " + to_string_u128(coeff);
  }
  return "";
}

RelationCheck check_zero(const std::string& name, const Mat2& diff) {
  RelationCheck r;
  r.name = name;
  r.ok = diff.is_zero();
  if (!r.ok) r.detail = first_discrepancy(diff);
  return r;
}

RelationCheck check_zero(const std::string& name, const TruncSeries& diff) {
  RelationCheck r;
  r.name = name;
  r.ok = diff.is_zero();
  if (!r.ok) {
    const auto& [mono, coeff] = *diff.c.begin();
    r.detail = "monomial " + mono_to_string(mono) + ", coefficient " +
               to_string_u128(coeff);
  }
  return r;
}

}  // namespace

DeformationReport verify_deformation(const Deformation& d) {
  DeformationReport rep;
  rep.p = d.p;
  rep.N = d.N;
  rep.D = d.D;
  rep.two_parameter = d.two_parameter;
  Mat2 I = Mat2::identity(d.p, d.N, d.D);
  TruncSeries one = TruncSeries::constant(d.p, d.N, d.D, 1);

  rep.relations.push_back(check_zero("sigma^2 = 1", d.sigma * d.sigma - I));
  rep.relations.push_back(
      check_zero("tau^3 = 1", d.tau * d.tau * d.tau - I));
  rep.relations.push_back(check_zero("sigma tau sigma = tau^2",
                                     d.sigma * d.tau * d.sigma - d.tau * d.tau));
  rep.relations.push_back(
      check_zero("sigma u sigma = u", d.sigma * d.u * d.sigma - d.u));
  rep.relations.push_back(check_zero("tau v = v tau", d.tau * d.v - d.v * d.tau));
  rep.relations.push_back(
      check_zero("sigma v sigma v = 1", d.sigma * d.v * d.sigma * d.v - I));
  rep.relations.push_back(check_zero("det v = 1", d.v.det() - one));
  rep.relations.push_back(
      check_zero("v = eta(T3, -3 T3)", d.v - eta_matrix(d.f, d.g)));
  TruncSeries t3sq = d.f * d.f;
  rep.relations.push_back(check_zero(
      "s^2 = 1 - 3 T3^2", d.v.a * d.v.a - (one - t3sq.scaled(3))));
  RelationCheck fo;
  fo.name = "first-order ramified image";
  fo.ok = first_order_matches_v(d.f, d.g);
  if (!fo.ok) fo.detail = "degree-one coefficients differ from (T3, -3 T3)";
  rep.relations.push_back(fo);
  return rep;
}

LociReport evaluate_loci(const Deformation& d, Rational t1, Rational t2,
                         Rational t3) {
  unsigned prec = std::min(d.N, d.D + 1);
  if (prec < 2)
    throw precision_too_low("evaluate_loci: min(N, D+1) must be >= 2");
  u128 mod = pow_u128_checked(d.p, d.N);
  auto value = [&](const Rational& r) -> u128 {
    if (r.den == 0 || reduce_signed(r.den, d.p) == 0)
      throw not_unit("evaluate_loci: denominator divisible by p");
    u128 num = reduce_signed(r.num, mod);
    if (num % d.p != 0)
      throw bad_valuation("evaluate_loci: parameter needs v_p >= 1");
    return mulmod128(num, invmod128(reduce_signed(r.den, mod), mod), mod);
  };
  u128 v1 = value(t1), v2 = value(t2), v3 = value(t3);
  u128 pmod = pow_u128_checked(d.p, prec);
  u128 fv = d.f.evaluate(v1, v2, v3) % pmod;
  u128 gv = d.g.evaluate(v1, v2, v3) % pmod;

  LociReport rep;
  rep.precision = prec;
  rep.caveat = "vanishing statements are congruences mod " +
               std::to_string(d.p) + "^" + std::to_string(prec) +
               "; equality of u-parameters is exact";
  rep.f_value = to_string_u128(fv);
  rep.g_value = to_string_u128(gv);
  rep.reducible = (fv == 0) || (gv == 0);
  rep.ordinary = (v1 % pmod == 0) && (gv == 0);
  bool eigen_equal = d.two_parameter
                         ? (static_cast<i128>(t1.num) * t2.den ==
                            static_cast<i128>(t2.num) * t1.den)
                         : true;
  rep.dihedral = eigen_equal || (fv == 0 && gv == 0);
  return rep;
}

}  // namespace s3def

#include "s3def/padic.hpp"

#include <algorithm>

namespace s3def {

namespace {

// Dense polynomials over F_p, coeff[i] on x^i, no leading zeros.
using Poly = std::vector<u64>;

void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_from_i64(const std::vector<i64>& f, u64 p) {
  Poly g(f.size());
  for (size_t i = 0; i < f.size(); ++i)
    g[i] = static_cast<u64>(reduce_signed(f[i], p));
  poly_trim(g);
  return g;
}

Poly poly_mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + static_cast<u128>(a[i]) * b[j]) % p;
  poly_trim(c);
  return c;
}

// a mod b, b nonzero.
Poly poly_rem(Poly a, const Poly& b, u64 p) {
  u64 inv_lead = invmod64(b.back(), p);
  while (a.size() >= b.size()) {
    u64 q = mulmod64(a.back(), inv_lead, p);
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) {
      u64 t = mulmod64(q, b[i], p);
      a[shift + i] = (a[shift + i] + p - t) % p;
    }
    poly_trim(a);
  }
  return a;
}

Poly poly_quot(Poly a, const Poly& b, u64 p) {
  if (a.size() < b.size()) return {};
  Poly q(a.size() - b.size() + 1, 0);
  u64 inv_lead = invmod64(b.back(), p);
  while (a.size() >= b.size()) {
    u64 c = mulmod64(a.back(), inv_lead, p);
    size_t shift = a.size() - b.size();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) {
      u64 t = mulmod64(c, b[i], p);
      a[shift + i] = (a[shift + i] + p - t) % p;
    }
    poly_trim(a);
  }
  poly_trim(q);
  return q;
}

Poly poly_monic(Poly a, u64 p) {
  if (a.empty()) return a;
  u64 inv_lead = invmod64(a.back(), p);
  for (auto& c : a) c = mulmod64(c, inv_lead, p);
  return a;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a, p);
}

Poly poly_powmod(Poly base, u128 e, const Poly& f, u64 p) {
  Poly r = {1};
  base = poly_rem(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) r = poly_rem(poly_mul(r, base, p), f, p);
    base = poly_rem(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

// g monic, all irreducible factors linear and distinct. Appends the roots.
void split_linear_factors(const Poly& g, u64 p, std::vector<u64>& out) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    out.push_back((p - g[0]) % p);
    return;
  }
  // (x+c)^((p-1)/2) - 1 separates the roots r with (r+c) a residue from the
  // rest; walking c = 0, 1, 2, ... hits a separating shift quickly.
  for (u64 c = 0;; ++c) {
    Poly w = poly_powmod({c, 1}, (p - 1) / 2, g, p);
    if (w.empty())
      w = {p - 1};  // pow collapsed to 0: x = -c is a root, w - 1 = -1
    else
      w[0] = (w[0] + p - 1) % p;
    poly_trim(w);
    Poly h = poly_gcd(g, w, p);
    if (h.size() > 1 && h.size() < g.size()) {
      split_linear_factors(h, p, out);
      split_linear_factors(poly_quot(g, h, p), p, out);
      return;
    }
    // Also try gcd with w + 2 = (x+c)^((p-1)/2) + 1.
    Poly w2 = w;
    w2.resize(std::max<size_t>(w2.size(), 1), 0);
    w2[0] = (w2[0] + 2) % p;
    poly_trim(w2);
    Poly h2 = poly_gcd(g, w2, p);
    if (h2.size() > 1 && h2.size() < g.size()) {
      split_linear_factors(h2, p, out);
      split_linear_factors(poly_quot(g, h2, p), p, out);
      return;
    }
  }
}

std::vector<i64> derivative(const std::vector<i64>& f) {
  std::vector<i64> d;
  for (size_t i = 1; i < f.size(); ++i)
    d.push_back(f[i] * static_cast<i64>(i));
  return d;
}

}  // namespace

PadicInt::PadicInt(u64 p_, unsigned N_, i128 value) : p(p_), N(N_) {
  mod = pow_u128_checked(p_, N_);
  v = reduce_signed(value, mod);
}

static void check_same_p(u64 p1, u64 p2) {
  if (p1 != p2) throw wrong_field("mixed primes in p-adic arithmetic");
}

PadicInt PadicInt::operator+(const PadicInt& o) const {
  check_same_p(p, o.p);
  PadicInt r(p, std::min(N, o.N), 0);
  r.v = ((v % r.mod) + (o.v % r.mod)) % r.mod;
  return r;
}

PadicInt PadicInt::operator-(const PadicInt& o) const {
  check_same_p(p, o.p);
  PadicInt r(p, std::min(N, o.N), 0);
  r.v = ((v % r.mod) + r.mod - (o.v % r.mod)) % r.mod;
  return r;
}

PadicInt PadicInt::operator*(const PadicInt& o) const {
  check_same_p(p, o.p);
  PadicInt r(p, std::min(N, o.N), 0);
  r.v = mulmod128(v % r.mod, o.v % r.mod, r.mod);
  return r;
}

PadicInt PadicInt::operator-() const {
  PadicInt r = *this;
  r.v = (mod - v) % mod;
  return r;
}

bool PadicInt::operator==(const PadicInt& o) const {
  check_same_p(p, o.p);
  u128 m = std::min(mod, o.mod);
  return v % m == o.v % m;
}

unsigned PadicInt::valuation() const {
  if (v == 0) return N;
  return valuation_u128(v, p, N);
}

PadicInt PadicInt::inverse() const {
  if (!is_unit()) throw not_unit("PadicInt::inverse");
  PadicInt r = *this;
  r.v = invmod128(v, mod);
  return r;
}

PadicInt PadicInt::pow(u128 e) const {
  PadicInt r = *this;
  r.v = powmod128(v, e, mod);
  return r;
}

PadicInt PadicInt::reduce_to(unsigned M) const {
  if (M > N) throw precision_too_low("PadicInt::reduce_to");
  PadicInt r(p, M, 0);
  r.v = v % r.mod;
  return r;
}

u128 eval_poly_mod(const std::vector<i64>& f, u128 x, u128 m) {
  u128 r = 0;
  x %= m;
  for (size_t i = f.size(); i-- > 0;)
    r = (mulmod128(r, x, m) + reduce_signed(f[i], m)) % m;
  return r;
}

std::vector<u64> roots_mod_p(const std::vector<i64>& fi, u64 p) {
  Poly f = poly_from_i64(fi, p);
  std::vector<u64> roots;
  if (f.empty()) throw bad_valuation("roots_mod_p: zero polynomial mod p");
  if (p < 50) {
    for (u64 r = 0; r < p; ++r)
      if (eval_poly_mod(fi, r, p) == 0) roots.push_back(r);
    return roots;
  }
  f = poly_monic(std::move(f), p);
  Poly xp = poly_powmod({0, 1}, p, f, p);
  // xp - x
  if (xp.size() < 2) xp.resize(2, 0);
  xp[1] = (xp[1] + p - 1) % p;
  poly_trim(xp);
  Poly g = poly_gcd(f, xp, p);
  split_linear_factors(g, p, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

u128 hensel_lift_root(const std::vector<i64>& f, u64 r0, u64 p, unsigned N) {
  if (eval_poly_mod(f, r0 % p, p) != 0)
    throw not_root("hensel_lift_root: not a root mod p");
  std::vector<i64> df = derivative(f);
  if (eval_poly_mod(df, r0 % p, p) == 0)
    throw not_simple_root("hensel_lift_root: f'(r0) = 0 mod p");
  u128 r = r0 % p;
  unsigned k = 1;
  while (k < N) {
    k = std::min(2 * k, N);
    u128 m = pow_u128_checked(p, k);
    u128 fr = eval_poly_mod(f, r, m);
    u128 dfr = eval_poly_mod(df, r, m);
    u128 corr = mulmod128(fr, invmod128(dfr, m), m);
    r = (r + m - corr) % m;
  }
  return r;
}

u128 sqrt_mod_prime_power(u128 a, u64 p, unsigned M) {
  u128 m = pow_u128_checked(p, M);
  a %= m;
  if (a % p == 0) throw not_unit("sqrt_mod_prime_power: p | a");
  u64 r0 = sqrt_mod_prime(static_cast<u64>(a % p), p);
  u128 r = r0;
  unsigned k = 1;
  while (k < M) {
    k = std::min(2 * k, M);
    u128 mk = pow_u128_checked(p, k);
    // r <- (r + a/r) / 2
    u128 t = (r + mulmod128(a % mk, invmod128(r % mk, mk), mk)) % mk;
    r = mulmod128(t, invmod128(2, mk), mk);
  }
  // Newton preserves the residue mod p, so r stays over the smaller mod-p
  // root picked by sqrt_mod_prime.
  return r;
}

u128 teichmuller(u128 a, u64 p, unsigned N) {
  u128 m = pow_u128_checked(p, N);
  u128 z = a % m;
  for (unsigned i = 0; i < N; ++i) {
    u128 zn = powmod128(z, p, m);
    if (zn == z) break;
    z = zn;
  }
  return z;
}

unsigned pth_power_index_qp(u128 u, u64 p, unsigned max_i, unsigned N) {
  if (N < max_i + 1)
    throw precision_too_low("pth_power_index_qp: need N >= max_i + 1");
  u128 m = pow_u128_checked(p, N);
  u %= m;
  if (u % p == 0) throw not_unit("pth_power_index_qp");
  u128 w = powmod128(u, p - 1, m);
  u128 wm1 = (w + m - 1) % m;
  if (wm1 == 0) return max_i;
  unsigned v = valuation_u128(wm1, p, N);
  return std::min(v - 1, max_i);
}

bool contains_pth_roots_of_unity(u64 q, unsigned e, u64 p) {
  if (q % p == 0) return e >= p - 1;
  return (q - 1) % p == 0;
}

LocalQuadField LocalQuadField::at_precision(unsigned M) const {
  LocalQuadField K = *this;
  K.N = M;
  K.mod = pow_u128_checked(p, M);
  K.d_mod = reduce_signed(d, K.mod);
  return K;
}

LocalQuadField make_quadratic_extension(i64 d, u64 p, unsigned N) {
  if (p < 3 || !is_prime_u64(p))
    throw small_prime("make_quadratic_extension: p must be an odd prime");
  if (d == 0 || N == 0) throw bad_valuation("make_quadratic_extension");
  i64 dd = d;
  unsigned v = 0;
  while (dd % static_cast<i64>(p) == 0) {
    dd /= static_cast<i64>(p);
    ++v;
  }
  if (v > 1)
    throw bad_valuation("make_quadratic_extension: v_p(d) must be 0 or 1");
  LocalQuadField K;
  K.p = p;
  K.d = d;
  K.N = N;
  K.ramified = (v == 1);
  K.mod = pow_u128_checked(p, N);
  K.d_mod = reduce_signed(d, K.mod);
  if (!K.ramified && kronecker(d, p) == 1)
    throw square_discriminant("make_quadratic_extension: d is a square unit");
  return K;
}

QuadElt::QuadElt(const LocalQuadField& K_, i128 a_, i128 b_) : K(K_) {
  a = reduce_signed(a_, K.mod);
  b = reduce_signed(b_, K.mod);
}

static const LocalQuadField& check_same_field(const LocalQuadField& A,
                                              const LocalQuadField& B) {
  if (A.p != B.p || A.d != B.d)
    throw wrong_field("mixed quadratic fields in arithmetic");
  return A.N <= B.N ? A : B;
}

QuadElt QuadElt::operator+(const QuadElt& o) const {
  QuadElt r;
  r.K = check_same_field(K, o.K);
  r.a = (a % r.K.mod + o.a % r.K.mod) % r.K.mod;
  r.b = (b % r.K.mod + o.b % r.K.mod) % r.K.mod;
  return r;
}

QuadElt QuadElt::operator-(const QuadElt& o) const {
  QuadElt r;
  r.K = check_same_field(K, o.K);
  r.a = (a % r.K.mod + r.K.mod - o.a % r.K.mod) % r.K.mod;
  r.b = (b % r.K.mod + r.K.mod - o.b % r.K.mod) % r.K.mod;
  return r;
}

QuadElt QuadElt::operator*(const QuadElt& o) const {
  QuadElt r;
  r.K = check_same_field(K, o.K);
  u128 m = r.K.mod;
  u128 a1 = a % m, b1 = b % m, a2 = o.a % m, b2 = o.b % m;
  u128 bb = mulmod128(b1, b2, m);
  r.a = (mulmod128(a1, a2, m) + mulmod128(r.K.d_mod % m, bb, m)) % m;
  r.b = (mulmod128(a1, b2, m) + mulmod128(b1, a2, m)) % m;
  return r;
}

bool QuadElt::operator==(const QuadElt& o) const {
  u128 m = check_same_field(K, o.K).mod;
  return a % m == o.a % m && b % m == o.b % m;
}

QuadElt QuadElt::conj() const {
  QuadElt r = *this;
  r.b = (K.mod - b) % K.mod;
  return r;
}

u128 QuadElt::norm() const {
  u128 m = K.mod;
  u128 db2 = mulmod128(K.d_mod, mulmod128(b, b, m), m);
  return (mulmod128(a, a, m) + m - db2) % m;
}

u128 QuadElt::trace() const { return (2 * (a % K.mod)) % K.mod; }

unsigned QuadElt::v_m() const {
  unsigned va = (a == 0) ? K.N : valuation_u128(a, K.p, K.N);
  unsigned vb = (b == 0) ? K.N : valuation_u128(b, K.p, K.N);
  if (K.ramified) return std::min(2 * va, 2 * vb + 1);
  return std::min(va, vb);
}

QuadElt QuadElt::inverse() const {
  u128 n = norm();
  if (n % K.p == 0) throw not_unit("QuadElt::inverse");
  u128 ninv = invmod128(n, K.mod);
  QuadElt c = conj();
  c.a = mulmod128(c.a, ninv, K.mod);
  c.b = mulmod128(c.b, ninv, K.mod);
  return c;
}

QuadElt QuadElt::pow(u128 e) const {
  QuadElt r(K, 1, 0);
  QuadElt base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

bool QuadElt::one_mod_mk(unsigned k) const {
  if (k > K.m_precision())
    throw precision_too_low("QuadElt::one_mod_mk beyond element precision");
  QuadElt w = *this - QuadElt(K, 1, 0);
  return w.v_m() >= k;
}

QuadElt QuadElt::reduce_to(unsigned M) const {
  if (M > K.N) throw precision_too_low("QuadElt::reduce_to");
  QuadElt r;
  r.K = K.at_precision(M);
  r.a = a % r.K.mod;
  r.b = b % r.K.mod;
  return r;
}

unsigned quad_unit_power_index(const QuadElt& z, unsigned max_i) {
  const LocalQuadField& K = z.K;
  if (K.p <= 3) throw small_prime("quad_unit_power_index: requires p > 3");
  if (z.v_m() != 0) throw not_unit("quad_unit_power_index");
  unsigned e = K.e();
  unsigned need = 1 + max_i * e;
  // Teichmuller part: iterate w -> w^q; each pass gains at least e*f in
  // m-valuation of the distance to the limit.
  u128 q = K.residue_size();
  QuadElt w = z;
  for (unsigned i = 0; i <= K.m_precision(); ++i) {
    QuadElt wn = w.pow(q);
    if (wn == w) break;
    w = wn;
  }
  QuadElt z1 = z * w.inverse();
  unsigned v = (z1 - QuadElt(K, 1, 0)).v_m();
  if (v >= K.m_precision()) {
    // Saturated: only a lower bound on the valuation is known.
    if (K.m_precision() >= need) return max_i;
    throw precision_too_low("quad_unit_power_index: saturated valuation");
  }
  if (v < 1) throw not_unit("quad_unit_power_index: Teichmuller split failed");
  return std::min((v - 1) / e, max_i);
}

QuadElt quad_embed_cubic_root(const std::vector<i64>& f,
                              const LocalQuadField& K) {
  if (f.size() != 4 || f[3] != 1)
    throw bad_valuation("quad_embed_cubic_root: monic cubic required");
  u64 p = K.p;
  unsigned N = K.N;
  std::vector<u64> roots = roots_mod_p(f, p);
  std::vector<i64> df = derivative(f);
  if (roots.size() == 3)
    throw no_quadratic_factor("cubic splits over Q_p");
  if (roots.empty())
    throw no_quadratic_factor("cubic has no Q_p-root");
  u64 r0 = p;  // the simple root mod p
  for (u64 r : roots)
    if (eval_poly_mod(df, r, p) != 0) r0 = r;
  if (r0 == p)
    throw not_simple_root("cubic has a triple root mod p");

  u128 mod = K.mod;
  u128 r = hensel_lift_root(f, r0, p, N);
  // f = (x - r)(x^2 + beta x + gamma) over Z_p.
  u128 beta = (reduce_signed(f[2], mod) + r) % mod;
  u128 gamma = (reduce_signed(f[1], mod) + mulmod128(beta, r, mod)) % mod;
  u128 D = (mulmod128(beta, beta, mod) + mod - mulmod128(4, gamma, mod)) % mod;

  unsigned v = (D == 0) ? N : valuation_u128(D, p, N);
  if (v >= N)
    throw precision_too_low("quad_embed_cubic_root: discriminant valuation saturates");
  unsigned Np = N - v;  // output coordinate precision
  u128 modp = pow_u128_checked(p, Np);
  u128 D0 = D;
  for (unsigned i = 0; i < v; ++i) D0 /= p;
  u64 D0p = static_cast<u64>(D0 % p);

  u128 broot;  // sqrt(D) = p^k * broot_unit * sqrt(d), assembled below
  unsigned k = v / 2;
  if (v % 2 == 0) {
    if (kronecker(static_cast<i64>(D0p), p) == 1)
      throw no_quadratic_factor("cubic splits over Q_p");
    if (K.ramified) throw wrong_field("quadratic factor generates the unramified extension");
    u64 dp = static_cast<u64>(reduce_signed(K.d, p));
    if (kronecker(static_cast<i64>(mulmod64(D0p, dp, p)), p) != 1)
      throw wrong_field("quadratic factor generates a different extension");
    // sqrt(D0) = c * sqrt(d) with c^2 = D0 / d.
    u128 ratio = mulmod128(D0 % modp, invmod128(reduce_signed(K.d, modp), modp), modp);
    broot = sqrt_mod_prime_power(ratio, p, Np);
  } else {
    if (!K.ramified) throw wrong_field("quadratic factor generates a ramified extension");
    i64 d0 = K.d / static_cast<i64>(p);
    u64 d0p = static_cast<u64>(reduce_signed(d0, p));
    if (kronecker(static_cast<i64>(mulmod64(D0p, d0p, p)), p) != 1)
      throw wrong_field("quadratic factor generates a different ramified extension");
    // sqrt(p * D0) = u * sqrt(d) with u^2 = D0 / d0.
    u128 ratio = mulmod128(D0 % modp, invmod128(reduce_signed(d0, modp), modp), modp);
    broot = sqrt_mod_prime_power(ratio, p, Np);
  }
  for (unsigned i = 0; i < k; ++i) broot = (broot * p) % modp;

  u128 inv2 = invmod128(2, modp);
  u128 a = mulmod128((modp - beta % modp) % modp, inv2, modp);
  u128 b = mulmod128(broot, inv2, modp);
  // Deterministic conjugate choice: leading centered digit of b in the
  // lower half.
  if (b != 0) {
    u128 t = b;
    while (t % p == 0) t /= p;
    if (static_cast<u64>(t % p) > (p - 1) / 2) b = (modp - b) % modp;
  }
  QuadElt z;
  z.K = K.at_precision(Np);
  z.a = a;
  z.b = b;
  return z;
}

}  // namespace s3def

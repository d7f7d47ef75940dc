#include "s3def/modmath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace s3def {

std::string to_string_u128(u128 x) {
  if (x == 0) return "0";
  std::string out;
  while (x > 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(x % 10)));
    x /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string_i128(i128 x) {
  if (x < 0) return "-" + to_string_u128(static_cast<u128>(-(x + 1)) + 1);
  return to_string_u128(static_cast<u128>(x));
}

u128 parse_u128(const std::string& s) {
  if (s.empty()) throw std::out_of_range("parse_u128: empty string");
  u128 x = 0;
  constexpr u128 kMax = ~static_cast<u128>(0);
  for (char c : s) {
    if (c < '0' || c > '9') throw std::out_of_range("parse_u128: bad digit");
    unsigned d = static_cast<unsigned>(c - '0');
    if (x > (kMax - d) / 10) throw std::out_of_range("parse_u128: overflow");
    x = x * 10 + d;
  }
  return x;
}

u64 powmod64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 invmod64(u64 a, u64 m) {
  i128 t = 0, nt = 1;
  i128 r = static_cast<i128>(m), nr = static_cast<i128>(a % m);
  while (nr != 0) {
    i128 q = r / nr;
    i128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw not_unit("invmod64: not invertible");
  if (t < 0) t += static_cast<i128>(m);
  return static_cast<u64>(t);
}

u128 mulmod128(u128 a, u128 b, u128 m) {
  a %= m;
  b %= m;
  if (a == 0 || b == 0) return 0;
  // Fast path when the full product fits in 128 bits.
  if (a <= (~static_cast<u128>(0)) / b) return (a * b) % m;
  u128 r = 0;
  if (a < b) std::swap(a, b);
  while (b > 0) {
    if (b & 1) {
      r += a;
      if (r >= m) r -= m;
    }
    a <<= 1;
    if (a >= m) a -= m;
    b >>= 1;
  }
  return r;
}

u128 powmod128(u128 a, u128 e, u128 m) {
  u128 r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod128(r, a, m);
    a = mulmod128(a, a, m);
    e >>= 1;
  }
  return r;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 invmod128(u128 a, u128 m) {
  // Extended Euclid on unsigned values, tracking the sign of t separately.
  u128 t = 0, nt = 1;
  bool t_neg = false, nt_neg = false;
  u128 r = m, nr = a % m;
  while (nr != 0) {
    u128 q = r / nr;
    // tmp = t - q * nt (signed combination)
    u128 qnt = q * nt;
    u128 tmp;
    bool tmp_neg;
    if (t_neg == nt_neg) {
      if (t >= qnt) {
        tmp = t - qnt;
        tmp_neg = t_neg;
      } else {
        tmp = qnt - t;
        tmp_neg = !t_neg;
      }
    } else {
      tmp = t + qnt;
      tmp_neg = t_neg;
    }
    t = nt;
    t_neg = nt_neg;
    nt = tmp;
    nt_neg = tmp_neg;
    u128 tr = r - q * nr;
    r = nr;
    nr = tr;
  }
  if (r != 1) throw not_unit("invmod128: not invertible");
  if (t_neg) return m - (t % m);
  return t % m;
}

u128 pow_u128_checked(u64 p, unsigned n) {
  u128 r = 1;
  constexpr u128 kCap = static_cast<u128>(1) << 126;
  for (unsigned i = 0; i < n; ++i) {
    if (r > kCap / p) throw precision_too_low("p^n exceeds 2^126");
    r *= p;
  }
  return r;
}

unsigned valuation_u128(u128 x, u64 p, unsigned cap) {
  unsigned v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

int kronecker(i64 a, u64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  // Factor out 2 from n: (a|2) = 0, 1, -1 per a mod 8.
  unsigned n2 = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++n2;
  }
  if (n2 > 0) {
    if (a % 2 == 0) return 0;
    u64 am8 = static_cast<u64>(((a % 8) + 8) % 8);
    if (n2 % 2 == 1 && (am8 == 3 || am8 == 5)) result = -result;
  }
  // Now n odd > 0; use reciprocity on |a|.
  u64 aa = static_cast<u64>(a < 0 ? -a : a);
  if (a < 0 && n % 4 == 3) result = -result;
  aa %= n;
  while (aa != 0) {
    unsigned v = 0;
    while (aa % 2 == 0) {
      aa /= 2;
      ++v;
    }
    if (v % 2 == 1 && (n % 8 == 3 || n % 8 == 5)) result = -result;
    if (aa % 4 == 3 && n % 4 == 3) result = -result;
    std::swap(aa, n);
    aa %= n;
  }
  return n == 1 ? result : 0;
}

u64 sqrt_mod_prime(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (powmod64(a, (p - 1) / 2, p) != 1)
    throw not_root("sqrt_mod_prime: not a quadratic residue");
  u64 r;
  if (p % 4 == 3) {
    r = powmod64(a, (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks.
    u64 q = p - 1;
    unsigned s = 0;
    while (q % 2 == 0) {
      q /= 2;
      ++s;
    }
    u64 z = 2;
    while (powmod64(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = s;
    u64 c = powmod64(z, q, p);
    u64 t = powmod64(a, q, p);
    r = powmod64(a, (q + 1) / 2, p);
    while (t != 1) {
      u64 t2 = t;
      u64 i = 0;
      while (t2 != 1) {
        t2 = mulmod64(t2, t2, p);
        ++i;
      }
      u64 b = c;
      for (u64 k = 0; k + i + 1 < m; ++k) b = mulmod64(b, b, p);
      m = i;
      c = mulmod64(b, b, p);
      t = mulmod64(t, c, p);
      r = mulmod64(r, b, p);
    }
  }
  return std::min(r, p - r);
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL, 41ULL}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (u64 b : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL, 41ULL}) {
    u64 x = powmod64(b, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_probable_prime_u128(u128 n) {
  if (n < (static_cast<u128>(1) << 64)) return is_prime_u64(static_cast<u64>(n));
  if (n >= (static_cast<u128>(1) << 126))
    throw bound_too_large("is_probable_prime_u128: n >= 2^126");
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL, 41ULL})
    if (n % q == 0) return false;
  u128 d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (u64 b : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL, 41ULL}) {
    u128 x = powmod128(b, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod128(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u128 isqrt_u128(u128 n) {
  if (n == 0) return 0;
  long double guess = sqrtl(static_cast<long double>(n));
  u128 r = static_cast<u128>(guess);
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

namespace {

u128 pollard_brent(u128 n) {
  // Brent's cycle variant; n odd composite, no small factors.
  for (u64 c = 1;; ++c) {
    u128 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const unsigned kBatch = 64;
    while (g == 1) {
      x = y;
      for (u128 i = 0; i < r; ++i) y = (mulmod128(y, y, n) + c) % n;
      u128 k = 0;
      while (k < r && g == 1) {
        ys = y;
        u128 lim = std::min<u128>(kBatch, r - k);
        for (u128 i = 0; i < lim; ++i) {
          y = (mulmod128(y, y, n) + c) % n;
          u128 diff = x > y ? x - y : y - x;
          q = mulmod128(q, diff, n);
        }
        g = gcd128(q, n);
        k += kBatch;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time.
      do {
        ys = (mulmod128(ys, ys, n) + c) % n;
        u128 diff = x > ys ? x - ys : ys - x;
        g = gcd128(diff, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(u128 n, std::vector<u128>& out) {
  if (n == 1) return;
  if (is_probable_prime_u128(n)) {
    out.push_back(n);
    return;
  }
  u128 d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<u128, unsigned>> factor_u128(u128 n) {
  std::vector<u128> primes;
  for (u64 d : {2ULL, 3ULL, 5ULL}) {
    while (n % d == 0) {
      primes.push_back(d);
      n /= d;
    }
  }
  // Wheel over 6k +- 1 up to 10^5.
  for (u64 d = 7; d <= 100000 && static_cast<u128>(d) * d <= n; d += 6) {
    for (u64 e : {d, d + 4}) {
      while (n % e == 0) {
        primes.push_back(e);
        n /= e;
      }
    }
  }
  if (n > 1) {
    if (static_cast<u128>(100000) * 100000 > n) {
      primes.push_back(n);  // below the trial bound squared, must be prime
    } else {
      factor_rec(n, primes);
    }
  }
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u128, unsigned>> out;
  for (u128 q : primes) {
    if (!out.empty() && out.back().first == q)
      ++out.back().second;
    else
      out.push_back({q, 1});
  }
  return out;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> sieve(limit + 1, true);
  sieve[0] = sieve[1] = false;
  for (u64 i = 2; i * i <= limit; ++i)
    if (sieve[i])
      for (u64 j = i * i; j <= limit; j += i) sieve[j] = false;
  for (u64 i = 2; i <= limit; ++i)
    if (sieve[i]) out.push_back(i);
  return out;
}

}  // namespace s3def

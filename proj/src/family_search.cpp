#include "s3def/family_search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "s3def/errors.hpp"
#include "s3def/padic.hpp"

namespace s3def {

namespace {

constexpr const char* kLedgerHeader = "# s3def family ledger v1";
constexpr size_t kChunk = 16;

std::uint32_t crc32(const std::string& s) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t c = 0xFFFFFFFFu;
  for (unsigned char ch : s) c = table[(c ^ ch) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

std::string crc32_hex(const std::string& s) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", crc32(s));
  return buf;
}

std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

bool parse_u128(const std::string& s, u128& out) {
  if (s.empty() || s.size() > 39) return false;
  u128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    if (v > (static_cast<u128>(-1) - (c - '0')) / 10) return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

// 27 + 4a^3 without overflow; 0 when nonpositive or past u64.
u64 family_prime(i64 a) {
  const i128 pw = 27 + 4 * static_cast<i128>(a) * a * a;
  if (pw <= 0 || pw > static_cast<i128>(0x7FFFFFFFFFFFFFFFll)) return 0;
  return static_cast<u64>(pw);
}

std::string record_line(const LedgerRecord& r) {
  std::string body = std::to_string(r.a) + "," + std::to_string(r.p) + "," +
                     family_status_name(r.status) + "," + u128_str(r.witness) +
                     "," + std::to_string(r.timestamp);
  return body + "," + crc32_hex(body);
}

std::optional<LedgerRecord> parse_record(const std::string& line) {
  std::array<std::string, 6> field;
  size_t n = 0, start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (n >= 6) return std::nullopt;
      field[n++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != 6) return std::nullopt;
  std::string body = line.substr(0, line.rfind(','));
  if (crc32_hex(body) != field[5]) return std::nullopt;

  LedgerRecord r;
  auto ok = [](const std::string& s, auto& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
  };
  if (!ok(field[0], r.a) || !ok(field[1], r.p) || !ok(field[4], r.timestamp))
    return std::nullopt;
  if (!parse_u128(field[3], r.witness)) return std::nullopt;
  if (field[2] == "prime-generic") r.status = FamilyStatus::prime_generic;
  else if (field[2] == "prime-nongeneric-witness")
    r.status = FamilyStatus::prime_nongeneric_witness;
  else if (field[2] == "composite") r.status = FamilyStatus::composite;
  else if (field[2] == "skipped") r.status = FamilyStatus::skipped;
  else return std::nullopt;
  if (r.p != family_prime(r.a)) return std::nullopt;
  return r;
}

LedgerRecord scan_one(i64 a) {
  LedgerRecord r;
  r.a = a;
  r.p = family_prime(a);
  r.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                    std::chrono::system_clock::now().time_since_epoch())
                    .count();
  if (!is_prime_wide(r.p)) {
    r.status = FamilyStatus::composite;
    return r;
  }
  const WitnessResult w = fast_genericity_witness(a);
  r.witness = w.witness;
  r.status = w.generic ? FamilyStatus::prime_generic
                       : FamilyStatus::prime_nongeneric_witness;
  return r;
}

}  // namespace

const char* family_status_name(FamilyStatus s) {
  switch (s) {
    case FamilyStatus::prime_generic: return "prime-generic";
    case FamilyStatus::prime_nongeneric_witness:
      return "prime-nongeneric-witness";
    case FamilyStatus::composite: return "composite";
    case FamilyStatus::skipped: return "skipped";
  }
  return "skipped";
}

bool is_prime_wide(u64 n) {
  if (n < 2) throw out_of_range("is_prime_wide needs n >= 2");
  return is_prime_u64(n);
}

WitnessResult fast_genericity_witness(i64 a) {
  WitnessResult w;
  w.p = family_prime(a);
  if (w.p <= 3 || !is_prime_u64(w.p))
    throw not_prime("27 + 4a^3 is not a prime > 3 at a = " +
                    std::to_string(a));
  const u64 p = w.p;
  const std::vector<i64> fv{1, a, 0, 1};  // x^3 + ax + 1

  // p | disc = -(4a^3 + 27), so f mod p has one double and one simple root.
  u64 simple = p;
  unsigned found = 0;
  for (u64 r : roots_mod_p(fv, p)) {
    const u64 d = static_cast<u64>(
        (mulmod64(3, mulmod64(r, r, p), p) + reduce_signed(a, p)) % p);
    if (d != 0) {
      simple = r;
      ++found;
    }
  }
  if (found != 1)
    throw no_simple_root("family member lost its simple root mod p");

  const u128 m = static_cast<u128>(p) * p;
  u128 base = hensel_lift_root(fv, simple, p, 2);
  u128 acc = 1;
  u64 e = p - 1;
  while (e) {
    if (e & 1) {
      acc = mulmod128(acc, base, m);
      ++w.mulmods;
    }
    base = mulmod128(base, base, m);
    ++w.mulmods;
    e >>= 1;
  }
  w.witness = acc;
  w.generic = acc != 1;
  return w;
}

std::vector<LedgerRecord> read_ledger(const std::string& path,
                                      bool* truncated_tail) {
  if (truncated_tail) *truncated_tail = false;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ledger_corrupt("cannot open ledger " + path);
  std::string line;
  if (!std::getline(in, line) || line != kLedgerHeader)
    throw ledger_corrupt("unrecognized ledger header in " + path);

  std::vector<LedgerRecord> out;
  std::vector<std::string> lines;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::optional<LedgerRecord> r = parse_record(lines[i]);
    if (!r) {
      if (i + 1 == lines.size()) {
        // Interrupted final write: drop the fragment, the scan redoes it.
        if (truncated_tail) *truncated_tail = true;
        break;
      }
      throw ledger_corrupt("ledger line " + std::to_string(i + 2) +
                           " fails its checksum");
    }
    if (!out.empty() && r->a <= out.back().a)
      throw ledger_corrupt("ledger records out of order at a = " +
                           std::to_string(r->a));
    out.push_back(*r);
  }
  return out;
}

ScanSummary scan_family_range(i64 a_lo, i64 a_hi,
                              const std::string& ledger_path,
                              unsigned workers) {
  ScanSummary sum;
  sum.a_lo = a_lo;
  sum.a_hi = a_hi;

  std::vector<LedgerRecord> existing;
  bool truncated = false;
  if (std::ifstream(ledger_path).good())
    existing = read_ledger(ledger_path, &truncated);

  std::ofstream out;
  if (existing.empty() && !truncated) {
    out.open(ledger_path, std::ios::binary | std::ios::trunc);
    out << kLedgerHeader << "\n";
  } else {
    // Rewrite intact records so a truncated fragment never survives.
    if (truncated) {
      std::ofstream fix(ledger_path, std::ios::binary | std::ios::trunc);
      fix << kLedgerHeader << "\n";
      for (const LedgerRecord& r : existing) fix << record_line(r) << "\n";
    }
    out.open(ledger_path, std::ios::binary | std::ios::app);
  }
  if (!out) throw ledger_corrupt("cannot write ledger " + ledger_path);

  const i64 resume_after =
      existing.empty() ? a_lo - 1 : std::max(a_lo - 1, existing.back().a);
  std::vector<i64> pending;
  for (i64 a = resume_after + 1; a <= a_hi; ++a)
    if (family_prime(a) != 0) pending.push_back(a);

  const size_t nchunks = (pending.size() + kChunk - 1) / kChunk;
  std::vector<std::optional<std::vector<LedgerRecord>>> done(nchunks);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<size_t> next{0};
  std::exception_ptr err;

  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= nchunks) return;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (err) return;
      }
      try {
        std::vector<LedgerRecord> block;
        const size_t lo = i * kChunk;
        const size_t hi = std::min(lo + kChunk, pending.size());
        for (size_t k = lo; k < hi; ++k) block.push_back(scan_one(pending[k]));
        std::lock_guard<std::mutex> lk(mu);
        done[i] = std::move(block);
        cv.notify_all();
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!err) err = std::current_exception();
        cv.notify_all();
        return;
      }
    }
  };

  const size_t nthreads = std::min<size_t>(std::max(1u, workers), nchunks);
  std::vector<std::thread> pool;
  for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  std::vector<LedgerRecord> fresh;
  {
    std::unique_lock<std::mutex> lk(mu);
    for (size_t w = 0; w < nchunks; ++w) {
      cv.wait(lk, [&] { return done[w].has_value() || err != nullptr; });
      if (!done[w].has_value()) break;  // failed chunk: keep the prefix
      for (const LedgerRecord& r : *done[w]) {
        out << record_line(r) << "\n";
        fresh.push_back(r);
      }
      out.flush();
    }
  }
  for (std::thread& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  sum.fresh = fresh.size();
  auto tally = [&](const LedgerRecord& r) {
    if (r.a < a_lo || r.a > a_hi) return;
    ++sum.examined;
    switch (r.status) {
      case FamilyStatus::composite: ++sum.composites; break;
      case FamilyStatus::prime_generic: ++sum.primes; break;
      case FamilyStatus::prime_nongeneric_witness:
        ++sum.primes;
        sum.nongeneric.push_back(r);
        break;
      case FamilyStatus::skipped: break;
    }
  };
  for (const LedgerRecord& r : existing) tally(r);
  for (const LedgerRecord& r : fresh) tally(r);
  return sum;
}

std::vector<HighIndexCandidate> high_index_candidate_search(u64 p, unsigned n,
                                                            i64 r_bound,
                                                            i64 s_bound) {
  if (p <= 3) throw small_prime("high-index search needs p > 3");
  if (!is_prime_u64(p)) throw not_prime(std::to_string(p) + " is not prime");
  if (n == 0) throw out_of_range("high-index search needs n >= 1");
  if (r_bound < 0 || s_bound < 0)
    throw out_of_range("bounds must be nonnegative");

  std::vector<HighIndexCandidate> res;
  const u128 pn = pow_u128_checked(p, n);
  if (pn > static_cast<u128>(r_bound) + static_cast<u128>(s_bound) + 1)
    return res;
  const i64 step = static_cast<i64>(pn);

  for (i64 r = -r_bound; r <= r_bound; ++r) {
    // s = -r mod p^n, lowest branch >= -s_bound
    i64 s0 = -((r % step + step) % step);
    if (s0 < -s_bound) s0 += step * ((-s_bound - s0 + step - 1) / step);
    for (i64 s = s0; s <= s_bound; s += step) {
      const Cubic f{r, s, -1};
      if (cubic_has_integer_root(f)) continue;
      if (cubic_disc(f) >= 0) continue;
      const CubicField K = make_cubic_field(f);
      const PrimeSplit ps = splitting_type(K, p);
      if (ps.ef != std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {1, 1}})
        continue;
      res.push_back({r, s, f});
    }
  }
  return res;
}

}  // namespace s3def

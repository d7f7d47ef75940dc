#pragma once

#include <string>
#include <vector>

#include "s3def/modmath.hpp"
#include "s3def/number_field.hpp"

namespace s3def {

enum class FamilyStatus {
  prime_generic,
  prime_nongeneric_witness,
  composite,
  skipped,
};

const char* family_status_name(FamilyStatus s);

// One line of the family ledger. Identity excludes the timestamp.
struct LedgerRecord {
  i64 a = 0;
  u64 p = 0;  // 27 + 4a^3, recomputable from a
  FamilyStatus status = FamilyStatus::skipped;
  u128 witness = 0;  // u^(p-1) mod p^2 for prime members, else 0
  i64 timestamp = 0;

  bool same_outcome(const LedgerRecord& o) const {
    return a == o.a && p == o.p && status == o.status && witness == o.witness;
  }
};

struct WitnessResult {
  u64 p = 0;
  bool generic = false;
  u128 witness = 0;      // u^(p-1) mod p^2
  unsigned mulmods = 0;  // multiplications mod p^2 spent in the power
};

struct ScanSummary {
  i64 a_lo = 0, a_hi = 0;
  u64 examined = 0;  // a values in range with 27 + 4a^3 > 0
  u64 fresh = 0;     // records computed by this run
  u64 primes = 0, composites = 0;
  std::vector<LedgerRecord> nongeneric;  // would contradict the conjecture
};

// x^3 + r x^2 + s x - 1 with p^n | r + s, so f(1) = r + s puts the unit
// root x = 1 mod p^n into the Q_p embedding.
struct HighIndexCandidate {
  i64 r = 0, s = 0;
  Cubic f;
};

// Deterministic primality for the full family range (p < 2^63).
// Throws out_of_range below 2.
bool is_prime_wide(u64 n);

// Genericity of the family member x^3 + ax + 1 at p = 27 + 4a^3 by the
// unit-root power test: lift the simple root r of f mod p (x is a unit since
// x(x^2 + a) = -1) and test u^(p-1) mod p^2. Throws not_prime when p is not
// a prime > 3, no_simple_root on the impossible root pattern.
WitnessResult fast_genericity_witness(i64 a);

// Parses a ledger file. A malformed or checksum-failing final line counts as
// an interrupted write: it is dropped and *truncated_tail set. Anywhere else
// the same damage throws ledger_corrupt, as do header or ordering violations.
std::vector<LedgerRecord> read_ledger(const std::string& path,
                                      bool* truncated_tail = nullptr);

// Scans a <- [a_lo, a_hi], appending one record per member with p > 0 to the
// ledger at ledger_path (created with a schema header if missing). Resumes
// after the last complete record; work is chunked over `workers` threads with
// a single in-order writer, so the ledger bytes are independent of the worker
// count. Errors abort the scan but leave the ledger prefix intact.
ScanSummary scan_family_range(i64 a_lo, i64 a_hi,
                              const std::string& ledger_path,
                              unsigned workers = 1);

// All (r, s) with |r| <= r_bound, |s| <= s_bound, p^n | r + s, and
// x^3 + r x^2 + s x - 1 irreducible of signature (1,1) with splitting type
// (2,1)(1,1) at p. Candidates are ordered by (r, s).
std::vector<HighIndexCandidate> high_index_candidate_search(u64 p, unsigned n,
                                                            i64 r_bound,
                                                            i64 s_bound);

}  // namespace s3def

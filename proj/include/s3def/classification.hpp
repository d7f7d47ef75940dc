#pragma once

#include <optional>
#include <string>
#include <vector>

#include "s3def/number_field.hpp"
#include "s3def/padic.hpp"

namespace s3def {

struct ClassifyParams {
  unsigned max_index = 4;       // largest degeneracy index probed
  unsigned precision = 0;       // p-adic digits; 0 derives max_index + 2
  u64 ideal_count_cap = 1000000;  // ceiling for the class-number fast bound
};

// Residue data of L above one ramified prime, for the roots-of-unity test.
struct RamifiedPrimeEvidence {
  u64 q = 0;
  unsigned residue_degree = 1;  // common residue degree f of primes of L
  unsigned ramification = 1;    // common ramification index e
  bool roots_of_unity = false;  // true would sink condition 3
  std::string note;
};

struct ConditionVerdict {
  bool passed = false;
  std::string evidence;
};

struct ClassificationReport {
  Cubic f;
  u64 p = 0;
  bool completed = false;  // false: structural failure, see `failure`
  std::string failure;

  i128 poly_disc = 0;
  i128 disc = 0;
  u64 index = 1;
  std::vector<u64> ramified_primes;  // ascending
  std::vector<RamifiedPrimeEvidence> ramified_evidence;

  unsigned precision = 0;  // N actually used for the p-adic witnesses
  u128 hensel_root = 0;    // image of th under K -> Q_p, mod p^N
  Vec3 unit_coords{0, 0, 0};  // fundamental unit on the integral basis
  Vec3 unit_theta{0, 0, 0};   // numerators over unit_theta_den on 1, th, th^2
  i128 unit_theta_den = 1;
  bool unit_certified = false;
  std::string unit_note;
  u128 unit_image_qp = 0;  // unit image at the unramified place, mod p^N
  i64 quad_d = 0;          // the ramified completion is Q_p(sqrt(quad_d))
  u128 unit_image_quad_a = 0, unit_image_quad_b = 0;  // a + b sqrt(d)
  unsigned ramified_power_index = 0;

  ConditionVerdict condition1;  // units: locally p-th power => globally
  ConditionVerdict condition2;  // class number prime to p
  ConditionVerdict condition3;  // no p-th roots of unity in S-completions
  bool neat = false;
  std::optional<unsigned> degeneracy_index;  // set only when neat
  bool generic = false;
  std::vector<std::string> warnings;
};

// Builds the field, verifies the shape constraints (p > 3 prime, cubic
// irreducible and totally complex non-cyclic, p of type (2,1)(1,1)), and
// evaluates the three neatness conditions with full witnesses. Throws
// small_prime, reducible, square_discriminant, not_totally_complex,
// wrong_splitting_type, or propagated arithmetic errors.
ClassificationReport neatness_check(const Cubic& f, u64 p,
                                    const ClassifyParams& params = {});

// Power index of the fundamental unit at the unramified completion above p.
// Throws hypothesis_not_met unless the extension is neat.
unsigned degeneracy_index(const Cubic& f, u64 p,
                          const ClassifyParams& params = {});

// Full pipeline; structural errors land in the report (completed = false)
// instead of being thrown.
ClassificationReport classify_extension(const Cubic& f, u64 p,
                                        const ClassifyParams& params = {});

std::string report_to_text(const ClassificationReport& r);
std::string report_to_json(const ClassificationReport& r);

}  // namespace s3def

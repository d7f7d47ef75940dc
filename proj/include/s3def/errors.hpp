#pragma once

#include <stdexcept>
#include <string>

namespace s3def {

// Base class for all library errors. Every contract violation throws a
// subtype below so callers can branch on the failure kind.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

#define S3DEF_ERROR(name)                                   \
  struct name : error {                                     \
    explicit name(const std::string& msg) : error(msg) {}   \
  }

// p-adic core
S3DEF_ERROR(not_root);
S3DEF_ERROR(not_simple_root);
S3DEF_ERROR(not_unit);
S3DEF_ERROR(precision_too_low);
S3DEF_ERROR(square_discriminant);
S3DEF_ERROR(bad_valuation);
S3DEF_ERROR(wrong_field);
S3DEF_ERROR(no_quadratic_factor);

// number field
S3DEF_ERROR(reducible);
S3DEF_ERROR(index_divisor);
S3DEF_ERROR(search_exhausted);
S3DEF_ERROR(not_fundamental);
S3DEF_ERROR(bound_too_large);

// classification
S3DEF_ERROR(wrong_splitting_type);
S3DEF_ERROR(not_totally_complex);
S3DEF_ERROR(small_prime);

// family search
S3DEF_ERROR(out_of_range);
S3DEF_ERROR(not_prime);
S3DEF_ERROR(no_simple_root);
S3DEF_ERROR(ledger_corrupt);

// S3 modules
S3DEF_ERROR(bad_action);
S3DEF_ERROR(hypothesis_not_met);

// deformation
S3DEF_ERROR(bad_constant_term);
S3DEF_ERROR(nonzero_constant_term);

#undef S3DEF_ERROR

}  // namespace s3def

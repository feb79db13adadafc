#pragma once

#include <stdexcept>
#include <string>

namespace cupform {

// Machine-readable failure codes. The CLI maps these to its JSON error
// reports; library callers can switch on them.
enum class ErrorCode {
  bad_rational,
  bad_schema,
  bad_input,
  dimension_mismatch,
  degree_mismatch,
  degree_too_low,
  index_out_of_range,
  zero_vector,
  singular_matrix,
  bad_shape,
  dependent_slices,
  caller_t_required,
  sample_falsified,
  not_honest,
  not_wf_member,
  internal_check_failed,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::bad_rational: return "BAD_RATIONAL";
    case ErrorCode::bad_schema: return "BAD_SCHEMA";
    case ErrorCode::bad_input: return "BAD_INPUT";
    case ErrorCode::dimension_mismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::degree_mismatch: return "DEGREE_MISMATCH";
    case ErrorCode::degree_too_low: return "DEGREE_TOO_LOW";
    case ErrorCode::index_out_of_range: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::zero_vector: return "ZERO_VECTOR";
    case ErrorCode::singular_matrix: return "SINGULAR_MATRIX";
    case ErrorCode::bad_shape: return "BAD_SHAPE";
    case ErrorCode::dependent_slices: return "DEPENDENT_SLICES";
    case ErrorCode::caller_t_required: return "CALLER_T_REQUIRED";
    case ErrorCode::sample_falsified: return "SAMPLE_FALSIFIED";
    case ErrorCode::not_honest: return "NOT_HONEST";
    case ErrorCode::not_wf_member: return "NOT_WF_MEMBER";
    case ErrorCode::internal_check_failed: return "INTERNAL_CHECK_FAILED";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) fail(code, message);
}

}  // namespace cupform

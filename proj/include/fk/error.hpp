#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fk {

enum class ErrorCode {
  InvalidPermutation,
  ClosureTooLarge,
  TooLarge,
  NotSubgroup,
  FactorizationNotFound,
  GroupMismatch,
  NotLeftFree,
  DegreeTooLarge,
  DegreeOutOfRange,
  EquivarianceViolated,
  NotExact,
  AxiomViolation,
  RelationViolated,
  NonUnitScalar,
  NotNilpotent,
  InvalidInput,
  Internal,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::ClosureTooLarge: return "ClosureTooLarge";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotSubgroup: return "NotSubgroup";
    case ErrorCode::FactorizationNotFound: return "FactorizationNotFound";
    case ErrorCode::GroupMismatch: return "GroupMismatch";
    case ErrorCode::NotLeftFree: return "NotLeftFree";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::EquivarianceViolated: return "EquivarianceViolated";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::AxiomViolation: return "AxiomViolation";
    case ErrorCode::RelationViolated: return "RelationViolated";
    case ErrorCode::NonUnitScalar: return "NonUnitScalar";
    case ErrorCode::NotNilpotent: return "NotNilpotent";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void check(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Literal messages only become strings on failure.
inline void check(bool cond, ErrorCode code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace fk

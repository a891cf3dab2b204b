#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpa {

enum class ErrorKind {
  NotAGroup,
  SizeLimit,
  SizeMismatch,
  BadIndex,
  BadInput,
  ContextMismatch,
  NotAPermutationDiagram,
  ZeroIdeal,
  FullS,
  VerificationFailed,
  BudgetExceeded,
  RingUnsupported,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAGroup: return "NotAGroup";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::BadInput: return "BadInput";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::NotAPermutationDiagram: return "NotAPermutationDiagram";
    case ErrorKind::ZeroIdeal: return "ZeroIdeal";
    case ErrorKind::FullS: return "FullS";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::RingUnsupported: return "RingUnsupported";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cpa

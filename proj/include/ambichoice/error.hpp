#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ambichoice {

enum class ErrorKind {
  NonSimplex,
  OutOfRange,
  InconsistentJoint,
  MissingAssignment,
  InvalidLabels,
  UnknownLabel,
  SizeLimit,
  NotBinary,
  CaseMismatch,
  ParseError,
  Infeasible,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonSimplex: return "NonSimplex";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InconsistentJoint: return "InconsistentJoint";
    case ErrorKind::MissingAssignment: return "MissingAssignment";
    case ErrorKind::InvalidLabels: return "InvalidLabels";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::NotBinary: return "NotBinary";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

/// Every failure raised by the library. `kind()` names the violated invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace ambichoice

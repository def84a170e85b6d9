#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace accdngd {

enum class ErrorKind {
  InvalidParam,
  NotConnected,
  NotDoublyStochastic,
  SingularSystem,
  DegenerateLabels,
  NonFinite,
  NoConvergence,
  NotStronglyConvex,
  StepTooLarge,
  NonPositiveError,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI, the
// harness divergence guard, the python layer) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParam: return "InvalidParam";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::NotDoublyStochastic: return "NotDoublyStochastic";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotStronglyConvex: return "NotStronglyConvex";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::NonPositiveError: return "NonPositiveError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace accdngd

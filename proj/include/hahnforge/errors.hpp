#pragma once

#include <stdexcept>
#include <string>

namespace hahnforge {

enum class ErrorKind {
  DivisionByZero,
  NotAUnit,
  ZeroPolynomial,
  PrecisionLoss,
  FieldExtensionExceeded,
  NoProgress,
  BoundViolation,
  SigmaMismatch,
  ZeroOrderType,
  DomainError,
  SyntaxError,
  UsageError,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::FieldExtensionExceeded: return "FieldExtensionExceeded";
    case ErrorKind::NoProgress: return "NoProgress";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::SigmaMismatch: return "SigmaMismatch";
    case ErrorKind::ZeroOrderType: return "ZeroOrderType";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hahnforge

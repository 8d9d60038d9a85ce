#pragma once

#include <stdexcept>
#include <string>

namespace symcomp {

enum class ErrorKind {
  ArityMismatch,
  InvalidEquation,
  RewriteDepthExceeded,
  StateBudgetExceeded,
  OracleScaleExceeded,
  BoundExceeded,
  SignatureConflict,
  ParseError,
  DuplicateLabel,
  UnboundVariable,
  TypeMismatch,
  UnknownLabel,
  IllegalJumpTarget,
  UnmappedExternalJump,
  PcNotFound,
  UntranslatableEvent,
  UnmappedOperator,
  ReplicationBudgetExceeded,
  ConfigError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::InvalidEquation: return "InvalidEquation";
    case ErrorKind::RewriteDepthExceeded: return "RewriteDepthExceeded";
    case ErrorKind::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorKind::OracleScaleExceeded: return "OracleScaleExceeded";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::SignatureConflict: return "SignatureConflict";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::IllegalJumpTarget: return "IllegalJumpTarget";
    case ErrorKind::UnmappedExternalJump: return "UnmappedExternalJump";
    case ErrorKind::PcNotFound: return "PcNotFound";
    case ErrorKind::UntranslatableEvent: return "UntranslatableEvent";
    case ErrorKind::UnmappedOperator: return "UnmappedOperator";
    case ErrorKind::ReplicationBudgetExceeded: return "ReplicationBudgetExceeded";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// All library failures surface as this exception; `kind()` identifies the
/// contract violation.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace symcomp

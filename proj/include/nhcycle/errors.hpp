#pragma once

#include <stdexcept>
#include <string>

namespace nhcycle {

enum class ErrorKind {
  InvalidArgument,
  DegenerateMatrix,
  Overflow,
  LiouvilleViolation,
  BranchAmbiguity,
  ExceptionalPoint,
  SeriesDomain,
  IntegerOrder,
  NonConvergence,
  DegeneracyOnPath,
  DiscontinuousPath,
  DegenerateBasis,
  PoleCrossing,
  NotCyclic,
  ZeroOverlap,
  InconsistentDynamics,
  NotClosed,
  ZeroState,
  DomainError,
  OnStokesLine,
  NoRootInBracket,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::LiouvilleViolation: return "LiouvilleViolation";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::ExceptionalPoint: return "ExceptionalPoint";
    case ErrorKind::SeriesDomain: return "SeriesDomain";
    case ErrorKind::IntegerOrder: return "IntegerOrder";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DegeneracyOnPath: return "DegeneracyOnPath";
    case ErrorKind::DiscontinuousPath: return "DiscontinuousPath";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::PoleCrossing: return "PoleCrossing";
    case ErrorKind::NotCyclic: return "NotCyclic";
    case ErrorKind::ZeroOverlap: return "ZeroOverlap";
    case ErrorKind::InconsistentDynamics: return "InconsistentDynamics";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OnStokesLine: return "OnStokesLine";
    case ErrorKind::NoRootInBracket: return "NoRootInBracket";
  }
  return "Unknown";
}

}  // namespace nhcycle

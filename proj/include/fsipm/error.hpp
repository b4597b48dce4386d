#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsipm {

/// Failure categories raised by the solver and its building blocks.
enum class ErrorKind {
  NotPositiveDefinite,
  NotSymmetric,
  DimensionMismatch,
  NotInterior,
  NegativeDiscriminant,
  StartNotInNeighborhood,
  PreconditionFailed,
  InvalidTolerance,
  InvalidConfig,
  RankDeficient,
  EmptyKernel,
  SingularSystem,
  ParseError,
  NumericalFailure,
  IterationLimit,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorKind::NotSymmetric:
      return "NotSymmetric";
    case ErrorKind::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::NotInterior:
      return "NotInterior";
    case ErrorKind::NegativeDiscriminant:
      return "NegativeDiscriminant";
    case ErrorKind::StartNotInNeighborhood:
      return "StartNotInNeighborhood";
    case ErrorKind::PreconditionFailed:
      return "PreconditionFailed";
    case ErrorKind::InvalidTolerance:
      return "InvalidTolerance";
    case ErrorKind::InvalidConfig:
      return "InvalidConfig";
    case ErrorKind::RankDeficient:
      return "RankDeficient";
    case ErrorKind::EmptyKernel:
      return "EmptyKernel";
    case ErrorKind::SingularSystem:
      return "SingularSystem";
    case ErrorKind::ParseError:
      return "ParseError";
    case ErrorKind::NumericalFailure:
      return "NumericalFailure";
    case ErrorKind::IterationLimit:
      return "IterationLimit";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, long index = -1)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_{kind},
        index_{index} {}

  ErrorKind kind() const { return kind_; }

  /// Pivot or coordinate index associated with the failure, or -1.
  long index() const { return index_; }

 private:
  ErrorKind kind_;
  long index_;
};

}  // namespace fsipm

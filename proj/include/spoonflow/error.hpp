#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spoonflow {

enum class ErrorKind {
  InvalidArgument,
  DegenerateEdge,
  NotClosed,
  SelfIntersecting,
  InvalidNetwork,
  JunctionDegenerate,
  StepRejected,
  InvalidTime,
  DegenerateRegion,
  StepTooLarge,
  NoBracket,
  WrongStopReason,
  GeometryInfeasible,
  IoError,
};

[[nodiscard]] constexpr auto to_string(ErrorKind kind) -> std::string_view {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateEdge: return "DegenerateEdge";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::SelfIntersecting: return "SelfIntersecting";
    case ErrorKind::InvalidNetwork: return "InvalidNetwork";
    case ErrorKind::JunctionDegenerate: return "JunctionDegenerate";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::InvalidTime: return "InvalidTime";
    case ErrorKind::DegenerateRegion: return "DegenerateRegion";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::WrongStopReason: return "WrongStopReason";
    case ErrorKind::GeometryInfeasible: return "GeometryInfeasible";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] auto kind() const noexcept -> ErrorKind { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace spoonflow

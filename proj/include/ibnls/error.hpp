#pragma once
#include <stdexcept>
#include <string>

namespace ibnls {

enum class ErrorKind {
  ParameterOutOfRange,
  InvalidGrid,
  SpaceMismatch,
  GridMismatch,
  SingularOrigin,
  InvalidExponent,
  EmptySeries,
  ZeroField,
  NoBracket,
  ResolutionLoss,
  WraparoundDetected,
  ConfigInvalid,
  NoConvergence,
  DivergedToZero,
  NotConverged,
  WrongGauge,
  RadiusOutOfRange,
  InsufficientSnapshots,
  SpanTooShort,
  NoSnapshots,
  HorizonTooShort,
  ConfigParseError,
  ConfigHashMismatch,
  CorruptSnapshot,
  IoError,
};

const char* to_string(ErrorKind k);

// Every library failure is an Error; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ibnls

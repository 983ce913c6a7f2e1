#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace petz {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  ZeroMatrix,
  NotNormalized,
  DimMismatch,
  InvalidState,
  NotTracePreserving,
  ShapeMismatch,
  OutOfRange,
  UnsupportedRank,
  WNotUnitary,
  VColumnZero,
  BadAxis,
  NotUnitary,
  ConfigError,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnsupportedRank: return "UnsupportedRank";
    case ErrorKind::WNotUnitary: return "WNotUnitary";
    case ErrorKind::VColumnZero: return "VColumnZero";
    case ErrorKind::BadAxis: return "BadAxis";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
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

}  // namespace petz

#ifndef MAJOLAT_ERROR_HPP
#define MAJOLAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace majolat {

enum class ErrorCode {
  EmptyVector,
  NegativeEntry,
  MassNotOne,
  MassNotTwo,
  TargetTooSmall,
  DegenerateTransfer,
  AlphaOutOfRange,
  UnknownFunctional,
  UnsupportedBackend,
  InvalidArgument,
  DimensionTooSmall,
  ExhaustedTries,
  TooLarge,
  InconsistentVerdict,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every precondition failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::MassNotOne: return "MassNotOne";
    case ErrorCode::MassNotTwo: return "MassNotTwo";
    case ErrorCode::TargetTooSmall: return "TargetTooSmall";
    case ErrorCode::DegenerateTransfer: return "DegenerateTransfer";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::UnknownFunctional: return "UnknownFunctional";
    case ErrorCode::UnsupportedBackend: return "UnsupportedBackend";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::ExhaustedTries: return "ExhaustedTries";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InconsistentVerdict: return "InconsistentVerdict";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace majolat

#endif  // MAJOLAT_ERROR_HPP

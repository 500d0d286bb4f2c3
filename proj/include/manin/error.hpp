#pragma once

#include <stdexcept>
#include <string>

namespace manin {

enum class ErrorCode {
  InvalidInput,
  PreconditionViolation,
  ParseError,
  NonZeroRowSum,
  DependentRows,
  NotElliptic,
  CapTooSmall,
  DimensionOverflow,
  MissingVariable,
  DivergentIntegral,
  DimensionTooHigh,
  NonPositivePolar,
  NonCompactFace,
  BoxTooLarge,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace manin

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holosim {

enum class ErrorCode {
  InvalidArgument,
  CutoffTooSmall,
  AmplitudeTooLarge,
  InvalidModeIndex,
  DegreeTooHigh,
  UnsupportedPhase,
  NegativeParameter,
  QuadratureUnderResolved,
  NonPositiveExponent,
  NonPositiveLength,
  DegenerateDenominator,
  StepTooLarge,
  ZeroAmplitude,
  NonPhysicalState,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

/// Every failure raised by the library carries a typed code so callers
/// (the runner in particular) can map it to exit statuses and CSV cells.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace holosim

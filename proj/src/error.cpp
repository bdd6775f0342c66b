#include "holosim/error.hpp"

#include <charconv>

namespace holosim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::AmplitudeTooLarge: return "AmplitudeTooLarge";
    case ErrorCode::InvalidModeIndex: return "InvalidModeIndex";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::UnsupportedPhase: return "UnsupportedPhase";
    case ErrorCode::NegativeParameter: return "NegativeParameter";
    case ErrorCode::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorCode::NonPositiveExponent: return "NonPositiveExponent";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ZeroAmplitude: return "ZeroAmplitude";
    case ErrorCode::NonPhysicalState: return "NonPhysicalState";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

std::string format_number(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

}  // namespace holosim

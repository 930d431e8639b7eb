#ifndef POA_ERRORS_HPP
#define POA_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace poa {

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteEntry,
  AsymmetryExceedsTolerance,
  NonNegativeOwnEffect,
  DominanceViolated,
  NotSymmetric,
  NotPositiveDefinite,
  IndexOutOfRange,
  ZeroIntercept,
  MuOutOfRange,
  SpecInvalid,
  StepSizeTooLarge,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::AsymmetryExceedsTolerance: return "AsymmetryExceedsTolerance";
    case ErrorCode::NonNegativeOwnEffect: return "NonNegativeOwnEffect";
    case ErrorCode::DominanceViolated: return "DominanceViolated";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ZeroIntercept: return "ZeroIntercept";
    case ErrorCode::MuOutOfRange: return "MuOutOfRange";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::StepSizeTooLarge: return "StepSizeTooLarge";
  }
  return "Unknown";
}

/// Every domain failure in the library is reported through this exception.
/// The message always starts with the code name; index-specific failures
/// append " at i=<index>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(format(code, detail, index)), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  static std::string format(ErrorCode code, const std::string& detail,
                            std::optional<std::size_t> index) {
    std::string msg(to_string(code));
    if (index) msg += " at i=" + std::to_string(*index);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
  }

  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace poa

#endif  // POA_ERRORS_HPP

#pragma once

#include <stdexcept>
#include <string>

namespace bv {

enum class ErrorCode {
  DimensionTooSmall,
  CriticalityViolated,
  ExponentOutOfRange,
  InfeasibleHypothesis,
  HypothesisNotApplicable,
  InvalidArgument,
  InvalidGrid,
  GridTooCoarse,
  NonpositiveScale,
  NonpositiveInput,
  StepSizeUnderflow,
  ToleranceNotMet,
  NonintegrableInput,
  IterateBlowup,
  ExponentRelationViolated,
  QuadratureDivergence,
  BudgetExceeded,
  QuadratureBudgetExceeded,
  ScanInconclusive,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::CriticalityViolated: return "CriticalityViolated";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::InfeasibleHypothesis: return "InfeasibleHypothesis";
    case ErrorCode::HypothesisNotApplicable: return "HypothesisNotApplicable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NonpositiveScale: return "NonpositiveScale";
    case ErrorCode::NonpositiveInput: return "NonpositiveInput";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::NonintegrableInput: return "NonintegrableInput";
    case ErrorCode::IterateBlowup: return "IterateBlowup";
    case ErrorCode::ExponentRelationViolated: return "ExponentRelationViolated";
    case ErrorCode::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::QuadratureBudgetExceeded: return "QuadratureBudgetExceeded";
    case ErrorCode::ScanInconclusive: return "ScanInconclusive";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bv

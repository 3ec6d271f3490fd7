#include "core/errors.hpp"

namespace gc3b {

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroSizeShape: return "ZeroSizeShape";
    case ErrorCode::SingularConfiguration: return "SingularConfiguration";
    case ErrorCode::UnsupportedForm: return "UnsupportedForm";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NoReturn: return "NoReturn";
    case ErrorCode::FixedPointInput: return "FixedPointInput";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::EmptyLevelSet: return "EmptyLevelSet";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::SingularOperator: return "SingularOperator";
  }
  return "Unknown";
}

}  // namespace gc3b

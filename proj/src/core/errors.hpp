#pragma once

#include <stdexcept>
#include <string>

namespace gc3b {

// Typed failure categories shared by every module. The C API maps these
// one-to-one onto status codes; the CLI maps them onto exit codes.
enum class ErrorCode {
  InvalidArgument,
  ZeroSizeShape,          // shape size below resolvable threshold
  SingularConfiguration,  // coincident particles with a divergent interaction
  UnsupportedForm,        // operation not defined for this potential kind
  StepFailure,            // integrator could not meet its local tolerance
  NoReturn,               // period search exhausted its time budget
  FixedPointInput,        // orbit-type operation fed an equilibrium point
  NotClosed,              // loop quantity requested on a non-closed path
  EmptyLevelSet,          // energy outside the range attained on the sphere
  NotSymmetric,           // operator does not commute with the symmetry group
  SingularOperator,       // operator function undefined on the spectrum
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

const char* error_code_name(ErrorCode code);

}  // namespace gc3b

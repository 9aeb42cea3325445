#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skewcount {

/// Failure categories raised by the library. The C API maps each onto a
/// status code and the CLI onto an exit code (see exit_code_for).
enum class ErrorKind {
  InvalidArgument,
  Config,
  OutsideConvergenceRegion,
  ToleranceUnreachable,
  IndeterminateEvaluation,
  DegenerateComposition,
  TotalDegeneration,
  NotCoprime,
  NoConvergence,
  EnumerationCapExceeded,
  PeriodAmbiguous,
  PotentialUndefined,
  OrbitClosureMismatch,
  MultiplierUndefined,
  MissingDivisorData,
  LambdaNotPositive,
  TailNotCertifiable,
  OutsideRadius,
  HypothesisImplausible,
  WindowTooShort,
  NonpositiveComparator,
  Inconsistent,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// True for the numerical failure family (non-convergence, degeneration, ...),
/// as opposed to bad input or configuration.
bool is_numerical(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::InvalidArgument, message);
}

}  // namespace skewcount

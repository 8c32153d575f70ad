#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace beamspec {

enum class ErrorKind {
  Domain,
  Pole,
  NoConvergence,
  BasinEscape,
  NoSuchMode,
  EmptyReport,
  DegenerateMode,
  ShapeMismatch,
  SingularShift,
  LinearSolveFailure,
  NonpositiveEnergy,
  InvalidArgument,
};

/// Stable identifier used in diagnostics, e.g. "NoConvergence".
std::string_view error_name(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so that callers (the CLI in
/// particular) can surface it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace beamspec

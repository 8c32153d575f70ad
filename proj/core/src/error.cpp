#include "beamspec/error.hpp"

namespace beamspec {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Pole: return "PoleError";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BasinEscape: return "BasinEscape";
    case ErrorKind::NoSuchMode: return "NoSuchMode";
    case ErrorKind::EmptyReport: return "EmptyReport";
    case ErrorKind::DegenerateMode: return "DegenerateMode";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorKind::NonpositiveEnergy: return "NonpositiveEnergy";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

}  // namespace beamspec

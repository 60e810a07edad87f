#include "heavytail/error.hpp"

namespace heavytail {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParameterOutOfRange: return "parameter-out-of-range";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::NonConvergence: return "nonconvergence";
    case ErrorKind::EmptySample: return "empty-sample";
    case ErrorKind::Numerical: return "numerical";
  }
  return "unknown";
}

}  // namespace heavytail

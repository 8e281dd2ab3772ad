#include "ictal/error.hpp"

namespace ictal {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::DegenerateScaling: return "degenerate-scaling";
    case ErrorKind::UnsupportedLayout: return "unsupported-layout";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Ordering: return "ordering";
    case ErrorKind::GridAlignment: return "grid-alignment";
    case ErrorKind::TooShort: return "too-short";
    case ErrorKind::RateIncompatible: return "rate-incompatible";
    case ErrorKind::NoPositiveClass: return "no-positive-class";
    case ErrorKind::NonFiniteInput: return "non-finite-input";
    case ErrorKind::Bounds: return "bounds";
    case ErrorKind::IntervalInfeasible: return "interval-infeasible";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::IncompatibleModel: return "incompatible-model";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::ZeroWeight: return "zero-weight";
    case ErrorKind::EmptyStream: return "empty-stream";
    case ErrorKind::AucUndefined: return "auc-undefined";
    case ErrorKind::Packing: return "packing";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string_view module, const std::string& message)
    : std::runtime_error(std::string(module) + ": " + std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      module_(module),
      detail_(message) {}

}  // namespace ictal

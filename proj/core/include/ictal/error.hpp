#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ictal {

enum class ErrorKind {
  Io,
  Format,
  Truncation,
  DegenerateScaling,
  UnsupportedLayout,
  Validation,
  Ordering,
  GridAlignment,
  TooShort,
  RateIncompatible,
  NoPositiveClass,
  NonFiniteInput,
  Bounds,
  IntervalInfeasible,
  Shape,
  IncompatibleModel,
  Integrity,
  Alignment,
  Duplicate,
  ZeroWeight,
  EmptyStream,
  AucUndefined,
  Packing,
};

std::string_view to_string(ErrorKind kind);

// Every error raised by the library carries the module that produced it and a
// machine-checkable kind. what() reads "<module>: <kind>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string_view module, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string detail_;
};

}  // namespace ictal

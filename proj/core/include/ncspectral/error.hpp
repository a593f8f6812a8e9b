#pragma once

#include <stdexcept>
#include <string>

namespace ncspectral {

enum class ErrorKind {
  DimensionMismatch,
  OutOfRange,
  Overflow,
  Precondition,
  Unsupported,
  Pole,
  NotUnitary,
  PrecisionExhausted,
  Guard,
  Config,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so front ends can map
// it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ncspectral

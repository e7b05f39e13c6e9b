#pragma once

#include <stdexcept>
#include <string>

namespace trpca {

// Numeric values are part of the C API (see trpca.h) and must not change.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kOutOfRange = 3,
  kInvalidTransform = 4,
  kNumericalFailure = 5,
  kIo = 6,
  kUnsupportedFormat = 7,
  kInternal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace trpca

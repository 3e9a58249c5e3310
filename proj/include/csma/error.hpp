// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace csma {

enum class ErrorCode {
  kInvalidArgument = 1,
  kNotChordal = 2,
  kUnachievable = 3,
  kCapExceeded = 4,
  kNoConvergence = 5,
  kIo = 6,
};

/// Error raised by every library routine. The code is stable and is what the
/// C interface reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace csma

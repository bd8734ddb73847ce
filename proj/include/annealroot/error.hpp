#pragma once

#include <stdexcept>
#include <string>

namespace annealroot {

/// Error categories; the CLI maps each to a distinct exit code.
enum class ErrorCode {
  InvalidArgument = 1,
  UnknownFunction = 3,
  MalformedInput = 4,
  IncompatibleCovering = 5,
  SingularJacobian = 6,
  DegenerateInput = 7,
  Io = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace annealroot

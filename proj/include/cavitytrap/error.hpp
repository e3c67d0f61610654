#pragma once

#include <stdexcept>
#include <string>

namespace cavitytrap {

enum class ErrorKind {
  DegenerateSteadyState,
  NoConvergence,
  SingularSolve,
  ImaginaryForce,
  InsufficientTail,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace cavitytrap

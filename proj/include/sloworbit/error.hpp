#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sloworbit {

enum class ErrorKind {
  Dimension,
  Domain,
  Alignment,
  Degenerate,
  Parse,
  Singular,
  Unsupported,
  ConstructionFailure,
  Horizon,
  Precision,
  Infeasible,
  Precondition,
  Verification,
  Usage,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. `kind` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sloworbit

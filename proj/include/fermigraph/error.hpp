#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fermigraph {

enum class ErrorCode {
  Parameter,
  Io,
  Consistency,
  NotCayleyRepresentable,
  OddParity,
  DegenerateEndpoint,
  DegeneratePoint,
  StencilCrossesTransition,
  SingularPoint,
  WindowError,
  SizeGuard,
  OutOfDomain,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for an error escaping to the CLI: 1 for bad input,
/// 2 for I/O, 3 for internal consistency failures.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fermigraph

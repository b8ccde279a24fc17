#include "fermigraph/error.hpp"

namespace fermigraph {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::Io: return "io";
    case ErrorCode::Consistency: return "consistency";
    case ErrorCode::NotCayleyRepresentable: return "not_cayley";
    case ErrorCode::OddParity: return "odd_parity";
    case ErrorCode::DegenerateEndpoint: return "degenerate_endpoint";
    case ErrorCode::DegeneratePoint: return "degenerate";
    case ErrorCode::StencilCrossesTransition: return "stencil_crosses";
    case ErrorCode::SingularPoint: return "singular";
    case ErrorCode::WindowError: return "window";
    case ErrorCode::SizeGuard: return "size_guard";
    case ErrorCode::OutOfDomain: return "out_of_domain";
  }
  return "unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return 2;
    case ErrorCode::Consistency: return 3;
    default: return 1;
  }
}

}  // namespace fermigraph

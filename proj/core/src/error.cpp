#include "popwave/error.hpp"

#include <cmath>

namespace popwave {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate_input: return "degenerate_input";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::degenerate_kernel: return "degenerate_kernel";
    case ErrorKind::non_hyperbolic: return "non_hyperbolic";
    case ErrorKind::no_balance: return "no_balance";
    case ErrorKind::branch: return "branch";
    case ErrorKind::linear_solve: return "linear_solve";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::blow_up: return "blow_up";
    case ErrorKind::front_not_found: return "front_not_found";
    case ErrorKind::non_normalizable: return "non_normalizable";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::horizon: return "horizon";
    case ErrorKind::conservation: return "conservation";
    case ErrorKind::support: return "support";
    case ErrorKind::verification: return "verification";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::linear_solve:
    case ErrorKind::non_convergence:
    case ErrorKind::blow_up:
    case ErrorKind::front_not_found:
    case ErrorKind::divergence:
    case ErrorKind::horizon:
    case ErrorKind::conservation:
    case ErrorKind::verification:
      return true;
    default:
      return false;
  }
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

void require_finite(double x, std::string_view what) {
  if (!std::isfinite(x)) {
    fail(ErrorKind::domain, std::string(what) + " must be finite");
  }
}

}  // namespace popwave

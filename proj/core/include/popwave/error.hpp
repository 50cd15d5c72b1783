#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace popwave {

/// Failure categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorKind {
  domain,            // non-finite input or argument outside the operation's domain
  degenerate_input,  // e.g. identically-zero polynomial, vanishing leading term
  parameter,         // zero denominator in a closed form
  degenerate_kernel, // Riccati a == 0
  non_hyperbolic,    // b^2 - 4ac <= 0
  no_balance,        // P(L-1) = 2 has no integer solution
  branch,            // square root of a negative quantity
  linear_solve,      // singular or ill-conditioned Jacobian
  non_convergence,
  configuration,
  blow_up,
  front_not_found,
  non_normalizable,
  divergence,
  horizon,
  conservation,
  support,
  verification,      // a computed result fails its own consistency check
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures of a numerical procedure (as opposed to bad input).
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, double residual_norm, int iterations)
      : Error(ErrorKind::non_convergence, message),
        residual_norm_(residual_norm),
        iterations_(iterations) {}

  double residual_norm() const noexcept { return residual_norm_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_norm_;
  int iterations_;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& message, double time)
      : Error(ErrorKind::blow_up, message), time_(time) {}

  /// Simulation time at which a non-finite state was detected.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

/// Throws ErrorKind::domain unless x is finite.
void require_finite(double x, std::string_view what);

}  // namespace popwave

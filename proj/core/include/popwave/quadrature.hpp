#pragma once

#include <functional>
#include <span>
#include <vector>

namespace popwave {

struct QuadratureResult {
  double value = 0.0;
  /// Sum of the local |S2 - S1| / 15 estimates.
  double error = 0.0;
  std::size_t evaluations = 0;
  /// False if some subinterval hit max_depth before meeting its tolerance.
  bool converged = true;
};

struct SimpsonOptions {
  double rtol = 1e-8;
  double atol = 0.0;
  int max_depth = 50;
  /// Uniform panels the interval is split into before adaptation starts; guards
  /// against a coarse first estimate that happens to vanish.
  int panels = 8;
};

/// Adaptive Simpson with Richardson extrapolation. The absolute target is
/// max(atol, rtol * |coarse estimate|), split in half at each bisection.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const SimpsonOptions& options = {});

struct TailOptions {
  SimpsonOptions simpson{};
  /// Truncate where log f falls this far below its running peak (37 ~ a factor 1e-16).
  double log_drop = 37.0;
  /// Truncation point is doubled until the value changes by less than this, relatively.
  double stability_rtol = 1e-9;
  double initial_step = 0.05;
  /// Upper bound on |x| reached while searching for the truncation point.
  double max_extent = 1e6;
};

/// Integral of exp(log_f(x)) over [a, inf), evaluated as exp(peak) * integral of
/// exp(log_f - peak) so that large exponents do not overflow. Throws
/// ErrorKind::divergence when log_f does not fall by log_drop below its peak
/// within max_extent, or when the result is not finite.
QuadratureResult integrate_log_tail(const std::function<double(double)>& log_f, double a,
                                    const TailOptions& options = {});

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes, weights;
  explicit GaussLegendre(std::size_t n);
};

/// Pairwise (cascade) summation; result is independent of how the caller chunked work.
double pairwise_sum(std::span<const double> values);

}  // namespace popwave

#pragma once

namespace popwave {

/// Riccati simplest equation  dPhi/dxi = a Phi^2 + b Phi + c  on its hyperbolic branch.
///
/// The kink solution is
///   Phi(xi) = -b/(2a) - theta/(2a) tanh(theta (xi + xi0) / 2),   theta^2 = b^2 - 4ac.
/// theta is always stored as the positive root; the negative root is the same family
/// reflected in xi with the two asymptotes swapped.
class RiccatiKernel {
 public:
  /// Throws ErrorKind::degenerate_kernel for a == 0 and ErrorKind::non_hyperbolic
  /// when b^2 - 4ac <= 0.
  RiccatiKernel(double a, double b, double c, double xi0 = 0.0);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double xi0() const noexcept { return xi0_; }
  double theta() const noexcept { return theta_; }

  double phi(double xi) const;
  /// Analytic derivative  -theta^2/(4a) sech^2(theta (xi + xi0)/2).
  double dphi(double xi) const;
  /// Right-hand side a phi^2 + b phi + c.
  double rhs(double phi) const noexcept { return (a_ * phi + b_) * phi + c_; }

  /// lim Phi as xi -> +inf, i.e. (-b - theta)/(2a).
  double asymptote_plus() const noexcept { return (-b_ - theta_) / (2.0 * a_); }
  /// lim Phi as xi -> -inf, i.e. (-b + theta)/(2a).
  double asymptote_minus() const noexcept { return (-b_ + theta_) / (2.0 * a_); }
  /// Phi(-xi0) = -b/(2a).
  double midpoint() const noexcept { return -b_ / (2.0 * a_); }

 private:
  double a_, b_, c_, xi0_, theta_;
};

}  // namespace popwave

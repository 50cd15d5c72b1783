#include "popwave/riccati.hpp"

#include <cmath>

#include "popwave/error.hpp"

namespace popwave {

RiccatiKernel::RiccatiKernel(double a, double b, double c, double xi0)
    : a_(a), b_(b), c_(c), xi0_(xi0), theta_(0.0) {
  require_finite(a, "Riccati a");
  require_finite(b, "Riccati b");
  require_finite(c, "Riccati c");
  require_finite(xi0, "Riccati xi0");
  if (a == 0.0) fail(ErrorKind::degenerate_kernel, "Riccati kernel requires a != 0");
  const double disc = b * b - 4.0 * a * c;
  if (!(disc > 0.0)) {
    fail(ErrorKind::non_hyperbolic, "Riccati kernel has b^2 - 4ac <= 0 (no real tanh kink)");
  }
  theta_ = std::sqrt(disc);
}

double RiccatiKernel::phi(double xi) const {
  // std::tanh saturates to +-1 well before its argument could overflow.
  return midpoint() - theta_ / (2.0 * a_) * std::tanh(0.5 * theta_ * (xi + xi0_));
}

double RiccatiKernel::dphi(double xi) const {
  const double arg = 0.5 * theta_ * (xi + xi0_);
  if (std::abs(arg) > 350.0) return 0.0;
  const double sech = 1.0 / std::cosh(arg);
  return -theta_ * theta_ / (4.0 * a_) * sech * sech;
}

}  // namespace popwave

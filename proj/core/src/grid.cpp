#include "popwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popwave/error.hpp"

namespace popwave {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
  require_finite(x_min, "grid x_min");
  require_finite(x_max, "grid x_max");
  if (!(x_min < x_max)) fail(ErrorKind::domain, "grid requires x_min < x_max");
  if (n < 16) fail(ErrorKind::domain, "grid requires at least 16 nodes, got " + std::to_string(n));
  dx_ = (x_max - x_min) / static_cast<double>(n - 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

Grid1D Grid1D::with_spacing(double x_min, double x_max, double dx) {
  require_finite(dx, "grid spacing");
  if (!(dx > 0.0)) fail(ErrorKind::domain, "grid spacing must be positive");
  const double cells = std::ceil((x_max - x_min) / dx - 1e-9);
  return Grid1D(x_min, x_max, static_cast<std::size_t>(std::max(cells, 15.0)) + 1);
}

double trapezoid(const Grid1D& grid, const std::vector<double>& values) {
  if (values.size() != grid.size()) fail(ErrorKind::domain, "trapezoid: size mismatch");
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) interior += values[i];
  return grid.dx() * (interior + 0.5 * (values.front() + values.back()));
}

}  // namespace popwave

#pragma once

#include <cstddef>
#include <vector>

namespace popwave {

/// Uniform node-centred grid: n nodes from x_min to x_max inclusive.
class Grid1D {
 public:
  /// Throws ErrorKind::domain unless x_min < x_max (both finite) and n >= 16.
  Grid1D(double x_min, double x_max, std::size_t n);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t i) const noexcept {
    return i + 1 == n_ ? x_max_ : x_min_ + static_cast<double>(i) * dx_;
  }
  std::vector<double> nodes() const;

  /// Grid with spacing as close to `dx` as possible (never coarser).
  static Grid1D with_spacing(double x_min, double x_max, double dx);

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double x_min_, x_max_;
  std::size_t n_;
  double dx_;
};

/// Trapezoid rule over the grid nodes.
double trapezoid(const Grid1D& grid, const std::vector<double>& values);

}  // namespace popwave

#pragma once

#include <cstddef>
#include <vector>

#include "popwave/cli/config.hpp"
#include "popwave/polynomial.hpp"
#include "popwave/riccati.hpp"
#include "popwave/wave_builder.hpp"

namespace popwave::cli {

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = n == 1 ? lo : (i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return xs;
}

inline Json to_json(const Polynomial& p) {
  Json a = Json::array();
  for (double c : p.coefficients()) a.push_back(c);
  return a;
}

inline Json to_json(const RiccatiKernel& k) {
  return Json{{"a", k.a()}, {"b", k.b()}, {"c", k.c()}, {"xi0", k.xi0()}, {"theta", k.theta()}};
}

Json kink_json(const KinkSolution& s);

/// Grid size from an integer config key, validated.
std::size_t count(const Resolved& cfg, const std::string& key, std::size_t minimum);

}  // namespace popwave::cli

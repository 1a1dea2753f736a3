#pragma once

#include <cstddef>
#include <vector>

#include "aggdiff/torus.h"

namespace aggdiff {

/// Cell averages on M uniform cells of [-L/2, L/2).
struct GridDensity {
  TorusDomain domain{1.0};
  std::vector<double> values;
  double t = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  double dx() const noexcept { return domain.length() / static_cast<double>(values.size()); }
  double cell_left(std::size_t i) const noexcept { return domain.base() + dx() * static_cast<double>(i); }
  double x_center(std::size_t i) const noexcept { return cell_left(i) + 0.5 * dx(); }
  double mass() const noexcept;
};

}  // namespace aggdiff

#include "aggdiff/density.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "aggdiff/error.h"

namespace aggdiff {

PiecewiseDensity::PiecewiseDensity(TorusDomain domain, std::vector<double> breakpoints,
                                   std::vector<double> values)
    : domain_(domain), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.empty() || breakpoints_.size() != values_.size()) {
    throw Error(ErrorCode::InvalidState,
                "density needs matching non-empty breakpoint and value arrays");
  }
  const double L = domain_.length();
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(breakpoints_[k]) || !std::isfinite(values_[k])) {
      throw Error(ErrorCode::InvalidState, "non-finite density entry at cell " + std::to_string(k));
    }
    if (values_[k] < 0.0) {
      throw Error(ErrorCode::InvalidState, "negative density value at cell " + std::to_string(k));
    }
    if (k + 1 < breakpoints_.size() && !(breakpoints_[k + 1] > breakpoints_[k])) {
      throw Error(ErrorCode::InvalidState, "breakpoints not strictly increasing at " + std::to_string(k));
    }
  }
  if (!(breakpoints_.front() + L > breakpoints_.back())) {
    throw Error(ErrorCode::InvalidState, "breakpoints span more than one period");
  }
  prefix_.resize(values_.size() + 1);
  prefix_[0] = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) prefix_[k + 1] = prefix_[k] + values_[k] * gap(k);
}

std::size_t PiecewiseDensity::locate(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.begin()) return 0;
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double PiecewiseDensity::value_at(double x) const {
  const double L = domain_.length();
  double y = x - L * std::floor((x - anchor()) / L);
  if (y >= anchor() + L) y -= L;
  return values_[locate(y)];
}

double PiecewiseDensity::cdf(double x) const {
  const double L = domain_.length();
  const double a = anchor();
  double y = x;
  if (y < a || y > a + L) {
    y = x - L * std::floor((x - a) / L);
    if (y >= a + L) y -= L;
  }
  if (y >= a + L) return mass();
  const std::size_t k = locate(y);
  const double value = prefix_[k] + values_[k] * (y - breakpoints_[k]);
  return std::clamp(value, prefix_[k], prefix_[k + 1]);
}

double PiecewiseDensity::pseudo_inverse(double z) const {
  const double total = mass();
  if (!(z >= 0.0) || z > total * (1.0 + 1e-14)) {
    throw Error(ErrorCode::OutOfRange,
                "pseudo-inverse argument " + std::to_string(z) + " outside [0, " +
                    std::to_string(total) + "]");
  }
  if (z <= 0.0) return anchor();
  z = std::min(z, total);
  // Smallest cell k with prefix[k+1] >= z; it necessarily carries positive mass.
  auto it = std::lower_bound(prefix_.begin() + 1, prefix_.end(), z);
  const std::size_t k = static_cast<std::size_t>(it - prefix_.begin()) - 1;
  if (z == prefix_[k + 1]) return cell_end(k);
  const double x = breakpoints_[k] + (z - prefix_[k]) / values_[k];
  return std::min(x, cell_end(k));
}

PiecewiseDensity PiecewiseDensity::reanchored(double new_anchor) const {
  const double L = domain_.length();
  double a = new_anchor - L * std::floor((new_anchor - anchor()) / L);
  if (a >= anchor() + L) a -= L;
  const std::size_t k = locate(a);
  std::vector<double> b;
  std::vector<double> v;
  b.reserve(size() + 1);
  v.reserve(size() + 1);
  const std::size_t M = size();
  // Cells from the split point to the end of the period, then the wrapped ones.
  b.push_back(a);
  v.push_back(values_[k]);
  for (std::size_t i = k + 1; i < M; ++i) {
    b.push_back(breakpoints_[i]);
    v.push_back(values_[i]);
  }
  for (std::size_t i = 0; i <= k; ++i) {
    const double bi = breakpoints_[i] + L;
    if (bi <= b.back() || bi >= a + L) continue;
    b.push_back(bi);
    v.push_back(values_[i]);
  }
  return PiecewiseDensity(domain_, std::move(b), std::move(v));
}

PiecewiseDensity PiecewiseDensity::normalized() const {
  const double total = mass();
  if (!(total > 0.0)) throw Error(ErrorCode::MassTooSmall, "cannot normalize a zero-mass density");
  std::vector<double> v(values_);
  for (double& x : v) x /= total;
  return PiecewiseDensity(domain_, breakpoints_, std::move(v));
}

PiecewiseDensity PiecewiseDensity::translated(double shift) const {
  std::vector<double> b(breakpoints_);
  for (double& x : b) x += shift;
  return PiecewiseDensity(domain_, std::move(b), values_);
}

}  // namespace aggdiff

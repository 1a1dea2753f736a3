#pragma once

#include <cmath>

namespace aggdiff {

/// Periodic interval T_L identified with the fundamental cell [-L/2, L/2).
class TorusDomain {
 public:
  explicit TorusDomain(double length);

  double length() const noexcept { return length_; }
  double base() const noexcept { return -0.5 * length_; }

  /// Representative of x in [-L/2, L/2).
  double wrap(double x) const noexcept {
    double y = x - length_ * std::floor((x - base()) / length_);
    if (y >= base() + length_) y -= length_;
    if (y < base()) y = base();
    return y;
  }

  /// Representative of dx in (-L/2, L/2].
  double min_image(double dx) const noexcept {
    const double half = 0.5 * length_;
    double r = dx - length_ * std::ceil((dx - half) / length_);
    if (r > half) r -= length_;
    if (r <= -half) r += length_;
    return r;
  }

  bool operator==(const TorusDomain& other) const noexcept {
    return length_ == other.length_;
  }

 private:
  double length_;
};

}  // namespace aggdiff

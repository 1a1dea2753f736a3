#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aggdiff/torus.h"

namespace aggdiff {

/// Piecewise-constant density on a torus.
///
/// Breakpoints are stored as monotone representatives b_0 < ... < b_{M-1} < b_0 + L;
/// cell k is [b_k, b_{k+1}) with b_M := b_0 + L. The first breakpoint is the
/// anchor of the cumulative distribution: cdf(b_0) = 0 and pseudo_inverse(0) = b_0.
class PiecewiseDensity {
 public:
  PiecewiseDensity(TorusDomain domain, std::vector<double> breakpoints,
                   std::vector<double> values);

  const TorusDomain& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  double anchor() const noexcept { return breakpoints_.front(); }
  double mass() const noexcept { return prefix_.back(); }

  /// Right end of cell k (b_M = b_0 + L for the last cell).
  double cell_end(std::size_t k) const noexcept {
    return k + 1 < breakpoints_.size() ? breakpoints_[k + 1] : breakpoints_.front() + domain_.length();
  }
  double gap(std::size_t k) const noexcept { return cell_end(k) - breakpoints_[k]; }

  /// Mass of cells [0, k).
  double cumulative(std::size_t k) const noexcept { return prefix_[k]; }

  /// Density value at a torus point (right-continuous).
  double value_at(double x) const;

  /// M(x) = integral of the density from the anchor to x along the positive
  /// direction. Points in [anchor, anchor + L] are used as given; others are
  /// first reduced into that range.
  double cdf(double x) const;

  /// X(z) = sup{x : M(x) < z} for z in [0, mass]; X(0) is the anchor.
  double pseudo_inverse(double z) const;

  /// Same function with the cumulative distribution anchored at `new_anchor`
  /// (the cell containing it is split).
  PiecewiseDensity reanchored(double new_anchor) const;

  /// Values divided by the mass.
  PiecewiseDensity normalized() const;

  PiecewiseDensity translated(double shift) const;

 private:
  std::size_t locate(double x_in_range) const;

  TorusDomain domain_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> prefix_;
};

}  // namespace aggdiff

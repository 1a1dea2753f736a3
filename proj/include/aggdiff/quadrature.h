#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "aggdiff/error.h"

namespace aggdiff::quad {

/// Gauss-Legendre rule on [-1, 1].
template <int Points>
struct GaussLegendre;

template <>
struct GaussLegendre<3> {
  static constexpr std::array<double, 3> nodes{-0.7745966692414833770359, 0.0,
                                               0.7745966692414833770359};
  static constexpr std::array<double, 3> weights{0.5555555555555555555556,
                                                 0.8888888888888888888889,
                                                 0.5555555555555555555556};
};

template <>
struct GaussLegendre<5> {
  static constexpr std::array<double, 5> nodes{
      -0.9061798459386639927976, -0.5384693101056830910363, 0.0,
      0.5384693101056830910363, 0.9061798459386639927976};
  static constexpr std::array<double, 5> weights{
      0.2369268850561890875143, 0.4786286704993664680413, 0.5688888888888888888889,
      0.4786286704993664680413, 0.2369268850561890875143};
};

template <int Points, class F>
double gauss_legendre(F&& f, double a, double b) {
  using Rule = GaussLegendre<Points>;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < Points; ++i) sum += Rule::weights[i] * f(mid + half * Rule::nodes[i]);
  return half * sum;
}

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth, bool& failed) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Below ~1e-15 relative the estimate is roundoff, not truncation.
  const double floor_tol = 1e-15 * (std::fabs(left) + std::fabs(right));
  if (std::fabs(delta) <= 15.0 * std::max(tol, floor_tol)) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    failed = true;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, failed) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, failed);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction. The interval is first cut into
/// `panels` equal pieces so that narrow features are not missed by the initial
/// five-point sample. Throws QuadratureFailure if max_depth is exhausted.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 40, int panels = 1) {
  if (a == b) return 0.0;
  double total = 0.0;
  bool failed = false;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == panels) ? b : a + (p + 1) * h;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += detail::simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, abs_tol / panels,
                                     max_depth, failed);
  }
  if (failed || !std::isfinite(total)) {
    throw Error(ErrorCode::QuadratureFailure,
                "adaptive Simpson did not reach tolerance on [" + std::to_string(a) + ", " +
                    std::to_string(b) + "]");
  }
  return total;
}

}  // namespace aggdiff::quad

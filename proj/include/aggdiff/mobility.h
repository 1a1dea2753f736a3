#pragma once

#include <algorithm>
#include <functional>
#include <string>

namespace aggdiff {

enum class MobilityKind { constant, linear_cutoff, rational, custom };

/// Nonincreasing Lipschitz mobility v on [0, inf) with sup v = v(0).
struct MobilitySpec {
  MobilityKind kind = MobilityKind::constant;
  double sbar = 0.0;  // linear_cutoff threshold
  std::function<double(double)> custom_v;
  double norm_v_inf = 1.0;
  double lipschitz_v = 0.0;
  std::string label = "constant";

  double v(double s) const {
    switch (kind) {
      case MobilityKind::constant: return 1.0;
      case MobilityKind::linear_cutoff: return std::max(0.0, 1.0 - s / sbar);
      case MobilityKind::rational: return 1.0 / (1.0 + s);
      case MobilityKind::custom: return custom_v(s);
    }
    return 1.0;
  }
};

MobilitySpec constant_mobility();
/// v(s) = max(0, 1 - s / sbar); throws BadParameter for sbar <= 0.
MobilitySpec linear_cutoff_mobility(double sbar);
/// v(s) = 1 / (1 + s).
MobilitySpec rational_mobility();
MobilitySpec custom_mobility(std::string label, std::function<double(double)> v,
                             double lipschitz);

}  // namespace aggdiff

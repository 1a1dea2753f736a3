#include "aggdiff/mobility.h"

#include <cmath>
#include <sstream>

#include "aggdiff/error.h"

namespace aggdiff {

MobilitySpec constant_mobility() { return MobilitySpec{}; }

MobilitySpec linear_cutoff_mobility(double sbar) {
  if (!(sbar > 0.0) || !std::isfinite(sbar)) {
    throw Error(ErrorCode::BadParameter, "linear cutoff mobility needs sbar > 0");
  }
  MobilitySpec spec;
  spec.kind = MobilityKind::linear_cutoff;
  spec.sbar = sbar;
  spec.lipschitz_v = 1.0 / sbar;
  std::ostringstream os;
  os << "linear_cutoff(" << sbar << ")";
  spec.label = os.str();
  return spec;
}

MobilitySpec rational_mobility() {
  MobilitySpec spec;
  spec.kind = MobilityKind::rational;
  spec.lipschitz_v = 1.0;
  spec.label = "rational";
  return spec;
}

MobilitySpec custom_mobility(std::string label, std::function<double(double)> v,
                             double lipschitz) {
  if (!v) throw Error(ErrorCode::BadParameter, "custom mobility needs an evaluator");
  MobilitySpec spec;
  spec.kind = MobilityKind::custom;
  spec.norm_v_inf = v(0.0);
  spec.custom_v = std::move(v);
  spec.lipschitz_v = lipschitz;
  spec.label = std::move(label);
  return spec;
}

}  // namespace aggdiff

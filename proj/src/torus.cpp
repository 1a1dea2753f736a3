#include "aggdiff/torus.h"

#include <string>

#include "aggdiff/error.h"

namespace aggdiff {

TorusDomain::TorusDomain(double length) : length_(length) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::BadParameter,
                "torus length must be positive and finite, got " + std::to_string(length));
  }
}

}  // namespace aggdiff

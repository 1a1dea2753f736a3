#include <doctest.h>

#include "aggdiff/error.h"
#include "aggdiff/torus.h"

using namespace aggdiff;

TEST_CASE("wrap maps into the fundamental cell") {
  const TorusDomain d(1.0);
  CHECK(d.wrap(0.5) == doctest::Approx(-0.5));
  CHECK(d.wrap(1.3) == doctest::Approx(0.3));
  CHECK(d.wrap(-0.75) == doctest::Approx(0.25));
  CHECK(d.wrap(-0.5) == -0.5);
  for (double x : {-7.3, -0.5000001, 0.4999999, 3.25, 1e3}) {
    const double y = d.wrap(x);
    CHECK(y >= -0.5);
    CHECK(y < 0.5);
  }
}

TEST_CASE("min_image lies in (-L/2, L/2]") {
  const TorusDomain d(4.0);
  CHECK(d.min_image(2.0) == 2.0);
  CHECK(d.min_image(-2.0) == 2.0);
  CHECK(d.min_image(3.0) == doctest::Approx(-1.0));
  CHECK(d.min_image(-3.0) == doctest::Approx(1.0));
  CHECK(d.min_image(0.0) == 0.0);
  CHECK(d.min_image(9.5) == doctest::Approx(1.5));
}

TEST_CASE("torus length must be positive") {
  CHECK_THROWS_AS(TorusDomain(0.0), Error);
  CHECK_THROWS_AS(TorusDomain(-1.0), Error);
  try {
    TorusDomain bad(0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParameter);
  }
}

#include <doctest.h>

#include <cmath>

#include "aggdiff/error.h"
#include "aggdiff/particles.h"

using namespace aggdiff;

TEST_CASE("N = 3 example densities") {
  const ParticleState s(TorusDomain(1.0), 1.0, {-0.5, -0.25, 0.25});
  const auto rho = densities(s);
  REQUIRE(rho.size() == 3);
  CHECK(rho[0] == doctest::Approx(4.0 / 3.0));
  CHECK(rho[1] == doctest::Approx(2.0 / 3.0));
  CHECK(rho[2] == doctest::Approx(4.0 / 3.0));
  CHECK(s.gap(2) == doctest::Approx(0.25));
  CHECK(s.min_gap() == doctest::Approx(0.25));
  CHECK(to_density(s).mass() == doctest::Approx(1.0));
}

TEST_CASE("ordering is enforced") {
  CHECK_THROWS_AS(ParticleState(TorusDomain(1.0), 1.0, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(ParticleState(TorusDomain(1.0), 1.0, {0.0, 1.0}), Error);  // closing gap 0
  CHECK_THROWS_AS(ParticleState(TorusDomain(1.0), 1.0, {0.2, 0.1}), Error);
  CHECK_THROWS_AS(ParticleState(TorusDomain(1.0), 1.5, {0.0, 0.1}), Error);  // mass above 1
}

TEST_CASE("quantile initialization of a uniform density gives equal gaps") {
  const PiecewiseDensity uniform(TorusDomain(2.0), {-1.0}, {0.5});
  const auto s = init_particles(uniform, 8);
  CHECK(s.position(0) == doctest::Approx(-1.0));
  for (std::size_t k = 0; k < 8; ++k) CHECK(s.gap(k) == doctest::Approx(0.25));
}

TEST_CASE("quantile initialization of a closed-form profile") {
  const TorusDomain d(1.0);
  const auto profile = [](double x) { return 1.0 + 0.5 * std::sin(2.0 * M_PI * x); };
  CHECK(profile_mass(profile, d) == doctest::Approx(1.0).epsilon(1e-12));
  const auto s = init_particles(profile, 64, d);
  // M(x_k) = k / N against the exact cumulative.
  const auto M = [](double x) { return (x + 0.5) - 0.25 / M_PI * (std::cos(2.0 * M_PI * x) + 1.0); };
  for (std::size_t k = 0; k < 64; ++k) CHECK(M(s.position(k)) == doctest::Approx(k / 64.0).epsilon(1e-10));
}

TEST_CASE("profiles with tiny mass are rejected") {
  const auto zero = [](double) { return 0.0; };
  CHECK_THROWS_AS(init_particles(zero, 10, TorusDomain(1.0)), Error);
}

TEST_CASE("translation keeps gaps") {
  const ParticleState s(TorusDomain(1.0), 1.0, {-0.5, -0.25, 0.25});
  const auto t = s.translated(0.7);
  for (std::size_t k = 0; k < 3; ++k) CHECK(t.gap(k) == doctest::Approx(s.gap(k)));
}

#include <doctest.h>

#include <cmath>

#include "aggdiff/error.h"
#include "aggdiff/reference.h"

using namespace aggdiff;

namespace {
double sine(double x) { return 1.0 + 0.5 * std::sin(2.0 * M_PI * x); }
Physics heat() {
  return {zero_kernel(), constant_mobility(), make_diffusion(DiffusionFamily::log_entropy, 1.0, constant_mobility())};
}
Physics full() {
  return {two_yukawa(2.0), rational_mobility(), make_diffusion(DiffusionFamily::power, 2.0, rational_mobility())};
}
// Exact average of 1 + A sin(2 pi x) over [a, b].
double sine_average(double A, double a, double b) {
  return 1.0 - A * (std::cos(2.0 * M_PI * b) - std::cos(2.0 * M_PI * a)) / (2.0 * M_PI * (b - a));
}
}  // namespace

TEST_CASE("cell averages of a closed-form profile") {
  const auto g = grid_from_profile(sine, 16, TorusDomain(1.0));
  REQUIRE(g.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(g.values[i] == doctest::Approx(sine_average(0.5, g.cell_left(i), g.cell_left(i) + g.dx())).epsilon(1e-12));
  }
  CHECK(g.mass() == doctest::Approx(1.0));
}

TEST_CASE("Fourier modes of a single sine") {
  const auto s = fourier_modes(sine, 1.0, 8);
  CHECK(s.a0 == doctest::Approx(1.0));
  CHECK(s.b[0] == doctest::Approx(0.5));
  CHECK(std::fabs(s.a[0]) < 1e-12);
  CHECK(std::fabs(s.b[1]) < 1e-12);
}

TEST_CASE("exact heat solution decays the first mode by exp(-4 pi^2 t)") {
  const auto s = fourier_modes(sine, 1.0, 8);
  const auto g = exact_heat(s, 0.01, 32);
  const double amplitude = 0.5 * std::exp(-4.0 * M_PI * M_PI * 0.01);
  CHECK(amplitude / 0.5 == doctest::Approx(0.67382).epsilon(1e-5));
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(g.values[i] == doctest::Approx(sine_average(amplitude, g.cell_left(i), g.cell_left(i) + g.dx())).epsilon(1e-12));
  }
}

TEST_CASE("finite volumes reproduce the heat solution") {
  const auto g0 = grid_from_profile(sine, 256, TorusDomain(1.0));
  const auto traj = fv_solve(g0, heat(), 0.01, {0.005, 0.01});
  REQUIRE(traj.snapshots.size() == 2);
  CHECK(traj.snapshots.back().t == doctest::Approx(0.01));
  const auto exact = exact_heat(fourier_modes(sine, 1.0, 8), 0.01, 256);
  double l1 = 0.0;
  for (std::size_t i = 0; i < 256; ++i) l1 += std::fabs(traj.snapshots.back().values[i] - exact.values[i]) * g0.dx();
  CHECK(l1 < 1e-4);
}

TEST_CASE("finite volumes conserve mass with interaction") {
  const auto g0 = grid_from_profile(sine, 128, TorusDomain(1.0));
  const auto traj = fv_solve(g0, full(), 0.02, {0.02});
  CHECK(traj.snapshots.back().mass() == doctest::Approx(g0.mass()).epsilon(1e-13));
  CHECK(traj.steps > 0);
}

TEST_CASE("oversized steps are refused") {
  const auto g0 = grid_from_profile(sine, 128, TorusDomain(1.0));
  const double dt = fv_max_dt(g0, heat());
  CHECK(dt > 0.0);
  CHECK_NOTHROW(fv_step(g0, heat(), dt));
  try {
    fv_step(g0, heat(), 10.0 * dt);
    FAIL("expected CFLViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CFLViolation);
  }
}

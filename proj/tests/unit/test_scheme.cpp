#include <doctest.h>

#include <cmath>
#include <random>

#include "aggdiff/error.h"
#include "aggdiff/scheme.h"

using namespace aggdiff;

namespace {
Physics porous() {
  return {zero_kernel(), constant_mobility(), make_diffusion(DiffusionFamily::power, 2.0, constant_mobility())};
}
Physics full() {
  return {two_yukawa(2.0), rational_mobility(), make_diffusion(DiffusionFamily::power, 2.0, rational_mobility())};
}
ParticleState example() { return ParticleState(TorusDomain(1.0), 1.0, {-0.5, -0.25, 0.25}); }
}  // namespace

TEST_CASE("N = 3 porous-medium velocities") {
  const auto p = porous();
  const auto g = diffusion_differences(example(), p.diffusion);
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(-4.0 / 3.0));
  CHECK(g[2] == doctest::Approx(4.0 / 3.0));
  const auto v = rhs(example(), p.kernel, p.mobility, p.diffusion);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(4.0));
  CHECK(v[2] == doctest::Approx(-4.0));
}

TEST_CASE("flipped mutation reverses the diffusive velocity") {
  const auto p = porous();
  RhsOptions o;
  o.mutation.flip_diffusion_sign = true;
  const auto v = rhs(example(), p.kernel, p.mobility, p.diffusion, o);
  CHECK(v[1] == doctest::Approx(-4.0));
}

TEST_CASE("antipodal pairs exert no force") {
  const TorusDomain d(1.0);
  const std::vector<double> x{-0.25, 0.25};
  const auto f = interaction_forces(x, d, two_yukawa(2.0));
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 0.0);
}

TEST_CASE("interaction forces: direct sum by hand") {
  const TorusDomain d(1.0);
  const auto k = two_yukawa(2.0);
  const std::vector<double> x{-0.4, -0.1, 0.3};
  RhsOptions direct;
  direct.pair_sum = PairSum::direct;
  const auto f = interaction_forces(x, d, k, direct);
  for (std::size_t i = 0; i < 3; ++i) {
    double expected = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j != i) expected += k.Kprime(d.min_image(x[i] - x[j]));
    }
    CHECK(f[i] == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("exponential sweep matches the direct sum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (double L : {1.0, 3.0, 20.0}) {
    const TorusDomain d(L);
    for (std::size_t n : {2u, 5u, 64u, 301u}) {
      std::vector<double> gaps(n), x(n);
      double total = 0.0;
      for (auto& g : gaps) total += (g = u(rng));
      double pos = -0.5 * L + 0.1;
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = pos;
        pos += gaps[k] / total * L;
      }
      RhsOptions direct, sweep;
      direct.pair_sum = PairSum::direct;
      sweep.pair_sum = PairSum::sweep;
      const auto k = two_yukawa(2.0);
      const auto a = interaction_forces(x, d, k, direct);
      const auto b = interaction_forces(x, d, k, sweep);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-11 * (1.0 + std::fabs(a[i])));
    }
  }
}

TEST_CASE("sweep refuses kernels without exponential form") {
  RhsOptions sweep;
  sweep.pair_sum = PairSum::sweep;
  const std::vector<double> x{-0.4, 0.1};
  CHECK_THROWS_AS(interaction_forces(x, TorusDomain(1.0), gaussian_bump(1.0), sweep), Error);
}

TEST_CASE("uniform state is stationary") {
  std::vector<double> x(40);
  for (std::size_t k = 0; k < 40; ++k) x[k] = -0.5 + k / 40.0;
  const ParticleState s(TorusDomain(1.0), 1.0, x);
  SchemeConfig cfg;
  cfg.t_end = 0.01;
  cfg.record_times = uniform_record_times(0.01, 3);
  const auto traj = integrate(s, full(), cfg);
  REQUIRE(traj.snapshots.size() == 3);
  for (std::size_t k = 0; k < 40; ++k) CHECK(traj.snapshots.back().position(k) == doctest::Approx(x[k]).epsilon(1e-12));
}

TEST_CASE("integration lands on record times and conserves mass") {
  std::vector<double> x(50);
  for (std::size_t k = 0; k < 50; ++k) {
    const double z = (k + 0.5) / 50.0;
    x[k] = -0.5 + z + 0.05 * std::sin(2.0 * M_PI * z);
  }
  const ParticleState s(TorusDomain(1.0), 0.8, x);
  SchemeConfig cfg;
  cfg.t_end = 0.02;
  cfg.record_times = uniform_record_times(0.02, 5);
  const auto traj = integrate(s, full(), cfg);
  REQUIRE(traj.snapshots.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(traj.snapshots[i].time() == doctest::Approx(cfg.record_times[i]).epsilon(1e-14));
    CHECK(to_density(traj.snapshots[i]).mass() == doctest::Approx(0.8).epsilon(1e-13));
  }
  CHECK(traj.accepted > 0);
  CHECK(traj.min_gap_fraction > 0.0);
}

TEST_CASE("flipped diffusion collapses the step size") {
  std::vector<double> x(50);
  for (std::size_t k = 0; k < 50; ++k) {
    const double z = (k + 0.5) / 50.0;
    x[k] = -0.5 + z + 0.05 * std::sin(2.0 * M_PI * z);
  }
  SchemeConfig cfg;
  cfg.t_end = 0.05;
  cfg.record_times = {0.05};
  cfg.rhs.mutation.flip_diffusion_sign = true;
  try {
    integrate(ParticleState(TorusDomain(1.0), 1.0, x), porous(), cfg);
    FAIL("expected StepTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepTooSmall);
    REQUIRE(e.time().has_value());
    CHECK(*e.time() < 0.05);
  }
}

TEST_CASE("scheme configuration is validated") {
  SchemeConfig cfg;
  cfg.dt_init = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  SchemeConfig late;
  late.record_times = {0.1};
  late.t_end = 0.05;
  CHECK_THROWS_AS(late.validate(), Error);
}

TEST_CASE("record times are uniform and inclusive") {
  const auto t = uniform_record_times(0.05, 11);
  REQUIRE(t.size() == 11);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 0.05);
  CHECK(t[5] == doctest::Approx(0.025));
}

TEST_CASE("near-antipodal pairs are antipodal") {
  const TorusDomain d(1.0);
  const std::vector<double> x{-0.25, 0.25 + 1e-15};
  RhsOptions direct;
  direct.pair_sum = PairSum::direct;
  CHECK(interaction_forces(x, d, two_yukawa(2.0))[0] == 0.0);
  CHECK(interaction_forces(x, d, two_yukawa(2.0), direct)[0] == 0.0);
}

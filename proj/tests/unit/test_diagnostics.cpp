#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "aggdiff/diagnostics.h"
#include "aggdiff/error.h"

using namespace aggdiff;
namespace fs = std::filesystem;

namespace {
ParticleState example() { return ParticleState(TorusDomain(1.0), 1.0, {-0.5, -0.25, 0.25}); }
DiffusionSpec quadratic() { return make_diffusion(DiffusionFamily::power, 2.0, constant_mobility()); }
}  // namespace

TEST_CASE("N = 3 dissipation, total variation and the TV inequality") {
  CHECK(dissipation_a2(example(), quadratic()) == doctest::Approx(32.0 / 3.0));
  CHECK(total_variation(to_density(example())) == doctest::Approx(4.0 / 3.0));
  const auto tv = tv_dissipation_inequality(example(), quadratic());
  CHECK(tv.lhs == doctest::Approx(8.0 / 3.0));
  CHECK(tv.rhs == doctest::Approx(32.0 / 3.0));
  CHECK(tv.holds);
}

TEST_CASE("interaction energy of the uniform density") {
  // 1/2 double integral of K over the unit torus = int_0^{1/2} K(z) dz.
  const double expected = -2.0 * (1.0 - std::exp(-1.0)) + (1.0 - std::exp(-0.5));
  for (std::size_t cells : {1u, 7u, 64u}) {
    std::vector<double> b(cells), v(cells, 1.0);
    for (std::size_t k = 0; k < cells; ++k) b[k] = -0.5 + static_cast<double>(k) / cells;
    const PiecewiseDensity uniform(TorusDomain(1.0), b, v);
    CHECK(interaction_energy(uniform, two_yukawa(2.0)) == doctest::Approx(expected).epsilon(5e-5));
  }
}

TEST_CASE("interaction energy of a step density against Monte Carlo") {
  const PiecewiseDensity d(TorusDomain(1.0), {-0.5, -0.1, 0.2}, {0.5, 2.0, 0.8});
  const auto k = two_yukawa(2.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const TorusDomain dom(1.0);
  double sum = 0.0;
  const int samples = 400000;
  for (int i = 0; i < samples; ++i) {
    const double x = u(rng), y = u(rng);
    sum += k.K(dom.min_image(x - y)) * d.value_at(x) * d.value_at(y);
  }
  const double mc = 0.5 * sum / samples;
  CHECK(interaction_energy(d, k) == doctest::Approx(mc).epsilon(2e-2));
}

TEST_CASE("entropy energy") {
  const PiecewiseDensity d(TorusDomain(1.0), {-0.5, 0.0}, {0.5, 1.5});
  const auto heat = make_diffusion(DiffusionFamily::log_entropy, 1.0, constant_mobility());
  CHECK(entropy_energy(d, heat) == doctest::Approx(0.5 * (0.5 * std::log(0.5) + 1.5 * std::log(1.5))));
  // W_v(s) = s^2 - s under the W_v(1) = 0 normalization.
  CHECK(entropy_energy(d, quadratic()) == doctest::Approx(0.5 * ((0.25 - 0.5) + (2.25 - 1.5))));
}

TEST_CASE("W1 of a translate is the shift times the mass") {
  const auto d = to_density(example());
  CHECK(wasserstein1(d, d) == 0.0);
  CHECK(wasserstein1(d, d.translated(0.1)) == doctest::Approx(0.1));
  CHECK(wasserstein1(d.translated(0.1), d) == doctest::Approx(0.1));
}

TEST_CASE("W1 between two step densities") {
  // Unit mass: point masses at different spreads give an exact value from the
  // pseudo-inverses X1(z) = -0.5 + z, X2(z) = -0.5 + z / 2 on [0, 1].
  const PiecewiseDensity a(TorusDomain(1.0), {-0.5}, {1.0});
  const PiecewiseDensity b(TorusDomain(1.0), {-0.5, 0.0}, {2.0, 0.0});
  CHECK(wasserstein1(a, b) == doctest::Approx(0.25));
}

TEST_CASE("W1 input checks") {
  const PiecewiseDensity a(TorusDomain(1.0), {-0.5}, {1.0});
  const PiecewiseDensity b(TorusDomain(1.0), {-0.5}, {0.5});
  const PiecewiseDensity c(TorusDomain(2.0), {-1.0}, {0.5});
  CHECK_THROWS_AS(wasserstein1(a, b), Error);
  try {
    wasserstein1(a, c);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainMismatch);
  }
}

TEST_CASE("diagnostics record and CSV round trip") {
  const Physics p{two_yukawa(2.0), constant_mobility(), quadratic()};
  const auto s = example();
  const auto rec = diagnose(s, p, to_density(s));
  CHECK(rec.mass == doctest::Approx(1.0));
  CHECK(rec.linf == doctest::Approx(4.0 / 3.0));
  CHECK(rec.linf_phi == p.diffusion.phi_v(rec.linf));
  CHECK(rec.w1_to_initial == 0.0);
  CHECK(rec.a2 == doctest::Approx(32.0 / 3.0));
  const auto noenergy = diagnose(s, p, to_density(s), false);
  CHECK(std::isnan(noenergy.energy));

  const fs::path dir = fs::temp_directory_path() / "aggdiff_diag_io";
  fs::create_directories(dir);
  const auto path = (dir / "diagnostics.csv").string();
  write_diagnostics_csv(path, {rec, noenergy});
  const auto back = read_diagnostics_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].energy == rec.energy);
  CHECK(back[0].tv == rec.tv);
  CHECK(std::isnan(back[1].energy));
}

TEST_CASE("energy monitor on a synthetic series") {
  // F' = -a^2 / 2 exactly gives C = 0.
  const std::vector<double> t{0.0, 1.0, 2.0};
  const std::vector<double> a2{2.0, 2.0, 2.0};
  const std::vector<double> e{5.0, 4.0, 3.0};
  const auto mon = energy_dissipation_monitor(t, e, a2);
  CHECK(mon.fitted_C == doctest::Approx(0.0));
  CHECK(mon.integral_a2 == doctest::Approx(4.0));
  CHECK(mon.energy_ok);
  CHECK(mon.strictly_decreasing);
  // Rising energy needs C > 0 and fails the 0.1 tolerance.
  const auto up = energy_dissipation_monitor(t, {0.0, 1.0, 2.0}, {0.0, 0.0, 0.0});
  CHECK(up.fitted_C == doctest::Approx(1.0));
  CHECK_FALSE(up.energy_ok);
}

TEST_CASE("Holder-1/2 estimate of a uniformly moving density") {
  const auto d = to_density(example());
  const std::vector<PiecewiseDensity> snaps{d, d.translated(0.01), d.translated(0.04)};
  // W1 / sqrt(dt): 0.01/0.1, 0.04/0.2, 0.03/sqrt(0.03)
  const double expected = std::max({0.1, 0.2, 0.03 / std::sqrt(0.03)});
  CHECK(holder_half_estimate(snaps, {0.0, 0.01, 0.04}) == doctest::Approx(expected));
}

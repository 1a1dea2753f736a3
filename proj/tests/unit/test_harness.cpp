#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>

#include "aggdiff/error.h"
#include "aggdiff/harness.h"
#include "aggdiff/snapshot_io.h"

using namespace aggdiff;
namespace fs = std::filesystem;

TEST_CASE("exact L1 distances") {
  const PiecewiseDensity a(TorusDomain(1.0), {-0.5, 0.0}, {2.0, 0.0});
  const PiecewiseDensity b(TorusDomain(1.0), {-0.5}, {1.0});
  CHECK(l1_distance(a, b) == doctest::Approx(1.0));
  CHECK(l1_distance(a, a) == 0.0);
  GridDensity g;
  g.values = {1.0, 1.0, 1.0, 1.0};
  CHECK(l1_distance(a, g) == doctest::Approx(1.0));
  CHECK(l1_distance(b, g) == doctest::Approx(0.0).epsilon(1e-15));
  GridDensity h = g;
  h.values[0] = 3.0;
  CHECK(l1_distance(g, h) == doctest::Approx(0.5));
  CHECK(window_l1_distance(a, b, -0.25, 0.25) == doctest::Approx(0.5));
}

TEST_CASE("trapezoid rule") {
  CHECK(trapezoid({0.0, 1.0, 3.0}, {0.0, 2.0, 2.0}) == doctest::Approx(5.0));
}

TEST_CASE("profile defaults") {
  InitSpec sine;
  sine.kind = InitKind::sine;
  const auto f = make_profile(sine, 2.0);
  CHECK(f(0.5) == doctest::Approx(0.5 + 0.25));
  InitSpec hat;
  hat.kind = InitKind::hat;
  const auto h = make_profile(hat, 8.0);
  CHECK(h(0.0) == doctest::Approx(0.5));  // unit mass triangle of half width 2
  CHECK(h(2.5) == 0.0);
  CHECK(to_string(InitKind::gaussian_window) == "gaussian_window");
  InitSpec file;
  file.kind = InitKind::file;
  CHECK_THROWS_AS(make_profile(file, 1.0), Error);
}

TEST_CASE("file initial data reads the snapshot format") {
  const fs::path dir = fs::temp_directory_path() / "aggdiff_harness_file";
  fs::create_directories(dir);
  const PiecewiseDensity d(TorusDomain(1.0), {-0.5, 0.0}, {1.5, 0.5});
  write_density_csv((dir / "init.csv").string(), d, 0.0);
  InitSpec init;
  init.kind = InitKind::file;
  init.path = (dir / "init.csv").string();
  const auto s = make_initial_state(init, TorusDomain(1.0), 4);
  CHECK(s.mass() == doctest::Approx(1.0));
  CHECK(s.position(2) == doctest::Approx(-1.0 / 6.0));  // M(x) = 1/2
}

TEST_CASE("parallel_for fills every slot") {
  std::vector<int> out(37, 0);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i) + 1; });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i) + 1);
}

TEST_CASE("stationary uniform configuration has zero errors") {
  StudyConfig c;
  c.physics = {two_yukawa(2.0), rational_mobility(), make_diffusion(DiffusionFamily::power, 2.0, rational_mobility())};
  c.scheme.t_end = 0.005;
  c.scheme.record_times = uniform_record_times(0.005, 3);
  c.oracle = OracleKind::finite_volume;
  c.oracle_cells = 64;
  const auto r = convergence_in_N(c, {16, 32});
  REQUIRE(r.cells.size() == 2);
  for (const auto& cell : r.cells) {
    REQUIRE(cell.ok);
    CHECK(cell.metrics.at("oracle_l1_final") < 1e-10);
  }
  REQUIRE(r.pair_differences.size() == 1);
  CHECK(r.pair_differences[0] < 1e-10);
  CHECK(r.failures() == 0);
  CHECK(r.to_json()["cells"].size() == 2);
}

TEST_CASE("heat study errors decrease in N") {
  StudyConfig c;
  c.physics = {zero_kernel(), constant_mobility(),
               make_diffusion(DiffusionFamily::log_entropy, 1.0, constant_mobility())};
  c.scheme.t_end = 0.01;
  c.scheme.record_times = uniform_record_times(0.01, 3);
  c.init.kind = InitKind::sine;
  c.oracle = OracleKind::exact_heat;
  c.oracle_cells = 4096;
  const auto r = convergence_in_N(c, {25, 50, 100});
  double previous = INFINITY;
  for (const auto& cell : r.cells) {
    REQUIRE(cell.ok);
    CHECK(cell.metrics.at("oracle_l1_final") < previous);
    previous = cell.metrics.at("oracle_l1_final");
  }
}

TEST_CASE("study inputs are checked") {
  StudyConfig c;
  CHECK_THROWS_AS(convergence_in_N(c, {100, 50}), Error);
  CHECK_THROWS_AS(torus_growth(c, {8.0, 4.0}, 10.0), Error);
}

TEST_CASE("failed cells are recorded, not thrown") {
  StudyConfig c;
  c.physics = {zero_kernel(), constant_mobility(), make_diffusion(DiffusionFamily::power, 2.0, constant_mobility())};
  c.scheme.t_end = 0.02;
  c.scheme.record_times = {0.02};
  c.scheme.rhs.mutation.flip_diffusion_sign = true;
  c.init.kind = InitKind::sine;
  const auto r = convergence_in_N(c, {16, 32});
  CHECK(r.failures() == 2);
  CHECK(std::isnan(r.pair_differences[0]));
  CHECK(r.cells[0].failure.find("StepTooSmall") != std::string::npos);
}

TEST_CASE("torus growth keeps the mass of a compact profile") {
  StudyConfig c;
  c.physics = {zero_kernel(), constant_mobility(), make_diffusion(DiffusionFamily::power, 2.0, constant_mobility())};
  c.scheme.t_end = 0.002;
  c.scheme.record_times = uniform_record_times(0.002, 3);
  c.init.kind = InitKind::hat;
  c.energy_series = false;
  const auto r = torus_growth(c, {8.0, 16.0}, 5.0);
  REQUIRE(r.cells.size() == 2);
  REQUIRE(r.cells[0].ok);
  REQUIRE(r.cells[1].ok);
  CHECK(r.cells[0].metrics.at("mass") == doctest::Approx(r.cells[1].metrics.at("mass")).epsilon(1e-12));
  CHECK(r.cells[0].metrics.at("N") == 40.0);
  CHECK(r.cells[1].metrics.at("N") == 80.0);
  CHECK(r.pair_differences.size() == 1);
}

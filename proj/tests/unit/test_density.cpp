#include <doctest.h>

#include <filesystem>

#include "aggdiff/density.h"
#include "aggdiff/error.h"
#include "aggdiff/snapshot_io.h"

using namespace aggdiff;
namespace fs = std::filesystem;

namespace {
// rho = {4/3, 2/3, 4/3} on gaps {1/4, 1/2, 1/4} of the unit torus.
PiecewiseDensity three_cells() {
  return PiecewiseDensity(TorusDomain(1.0), {-0.5, -0.25, 0.25}, {4.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0});
}
}  // namespace

TEST_CASE("cdf and pseudo-inverse of a three-cell density") {
  const auto d = three_cells();
  CHECK(d.mass() == doctest::Approx(1.0));
  CHECK(d.cdf(-0.25) == doctest::Approx(1.0 / 3.0));
  CHECK(d.cdf(0.25) == doctest::Approx(2.0 / 3.0));
  CHECK(d.cdf(0.0) == doctest::Approx(1.0 / 3.0 + 0.25 * 2.0 / 3.0));
  CHECK(d.pseudo_inverse(0.0) == -0.5);
  CHECK(d.pseudo_inverse(1.0 / 3.0) == doctest::Approx(-0.25));
  CHECK(d.pseudo_inverse(0.5) == doctest::Approx(0.0));
  CHECK(d.value_at(0.0) == doctest::Approx(2.0 / 3.0));
  CHECK(d.value_at(0.25) == doctest::Approx(4.0 / 3.0));
  CHECK(d.value_at(0.45) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("pseudo-inverse skips empty cells") {
  const PiecewiseDensity d(TorusDomain(1.0), {-0.5, 0.0}, {2.0, 0.0});
  CHECK(d.pseudo_inverse(1.0) == doctest::Approx(0.0));
  CHECK(d.pseudo_inverse(0.5) == doctest::Approx(-0.25));
}

TEST_CASE("reanchoring, translation and normalization keep the function") {
  const auto d = three_cells();
  const auto r = d.reanchored(0.0);
  CHECK(r.anchor() == 0.0);
  CHECK(r.mass() == doctest::Approx(1.0));
  for (double x : {-0.4, -0.1, 0.1, 0.3}) CHECK(r.value_at(x) == doctest::Approx(d.value_at(x)));
  const auto t = d.translated(0.1);
  for (double x : {-0.4, -0.1, 0.1, 0.3}) CHECK(t.value_at(x + 0.1) == doctest::Approx(d.value_at(x)));
  const PiecewiseDensity half(TorusDomain(2.0), {-1.0, 0.0}, {0.25, 0.25});
  CHECK(half.normalized().mass() == doctest::Approx(1.0));
}

TEST_CASE("invalid densities are rejected") {
  CHECK_THROWS_AS(PiecewiseDensity(TorusDomain(1.0), {-0.5, 0.0}, {1.0, -1.0}), Error);
  CHECK_THROWS_AS(PiecewiseDensity(TorusDomain(1.0), {0.0, -0.1}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(PiecewiseDensity(TorusDomain(1.0), {-0.5, 0.6}, {1.0, 1.0}), Error);
}

TEST_CASE("density CSV round trip is exact") {
  const fs::path dir = fs::temp_directory_path() / "aggdiff_density_io";
  fs::create_directories(dir);
  const auto d = three_cells().translated(0.3);
  write_density_csv((dir / "snap.csv").string(), d, 0.125);
  const auto back = read_density_csv((dir / "snap.csv").string());
  CHECK(back.t == 0.125);
  CHECK(back.density.mass() == doctest::Approx(d.mass()).epsilon(1e-15));
  for (double x : {-0.45, -0.2, 0.05, 0.3, 0.49}) CHECK(back.density.value_at(x) == d.value_at(x));
  CHECK(back.density.anchor() >= -0.5);
}

TEST_CASE("malformed CSV names the line") {
  const fs::path dir = fs::temp_directory_path() / "aggdiff_density_io";
  fs::create_directories(dir);
  const auto path = (dir / "bad.csv").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("# L=1 mass=1 t=0\nbreakpoint,value\n-0.5,1\nxyz,2\n", f);
    std::fclose(f);
  }
  try {
    read_density_csv(path);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find(":4") != std::string::npos);
  }
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 6.02e23, -1e-300}) CHECK(std::stod(format_double(x)) == x);
}

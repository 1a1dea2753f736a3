#include <doctest.h>

#include <cmath>

#include "aggdiff/diffusion.h"
#include "aggdiff/error.h"
#include "aggdiff/kernel.h"
#include "aggdiff/mobility.h"
#include "aggdiff/validation.h"

using namespace aggdiff;

TEST_CASE("two-Yukawa values and norms") {
  const auto k = two_yukawa(2.0);
  CHECK(k.K(0.0) == doctest::Approx(-3.0));
  CHECK(k.K(1.0) == doctest::Approx(-4.0 * std::exp(-2.0) + std::exp(-1.0)));
  CHECK(k.K(-1.0) == k.K(1.0));
  CHECK(k.Kprime(0.0) == 0.0);
  CHECK(k.Kprime(-0.3) == -k.Kprime(0.3));
  CHECK(k.norm_K_inf == doctest::Approx(3.0));
  CHECK(k.norm_Kprime_inf == doctest::Approx(7.0));
  CHECK(k.norm_Kprime_L1 == doctest::Approx(6.25).epsilon(1e-12));
  CHECK(k.exp_terms.size() == 2);
  CHECK_THROWS_AS(two_yukawa(1.0), Error);
}

TEST_CASE("declared kernel norms survive validation") {
  for (const auto& k : {two_yukawa(2.0), two_yukawa(3.5), gaussian_bump(1.0), zero_kernel()}) {
    const auto report = validate_kernel(k);
    INFO(report.to_text());
    CHECK(report.all_passed());
  }
}

TEST_CASE("kernel validation catches a wrong declared norm") {
  auto k = two_yukawa(2.0);
  k.norm_Kprime_inf = 1.0;
  CHECK_FALSE(validate_kernel(k).all_passed());
}

TEST_CASE("mobility families") {
  const auto cut = linear_cutoff_mobility(2.0);
  CHECK(cut.v(0.0) == 1.0);
  CHECK(cut.v(1.0) == doctest::Approx(0.5));
  CHECK(cut.v(3.0) == 0.0);
  CHECK(cut.lipschitz_v == doctest::Approx(0.5));
  CHECK(rational_mobility().v(1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(linear_cutoff_mobility(0.0), Error);
  for (const auto& m : {constant_mobility(), cut, rational_mobility()}) {
    const auto report = validate_mobility(m);
    INFO(report.to_text());
    CHECK(report.all_passed());
  }
  const auto increasing = custom_mobility("increasing", [](double s) { return 1.0 + s; }, 1.0);
  CHECK_FALSE(validate_mobility(increasing).all_passed());
}

TEST_CASE("phi_v closed forms") {
  const auto heat = make_diffusion(DiffusionFamily::log_entropy, 1.0, constant_mobility());
  const auto pm = make_diffusion(DiffusionFamily::power, 2.0, constant_mobility());
  const auto pm3 = make_diffusion(DiffusionFamily::power, 3.0, constant_mobility());
  const auto log_rat = make_diffusion(DiffusionFamily::log_entropy, 1.0, rational_mobility());
  const auto quad_rat = make_diffusion(DiffusionFamily::power, 2.0, rational_mobility());
  const auto log_cut = make_diffusion(DiffusionFamily::log_entropy, 1.0, linear_cutoff_mobility(1.0));
  for (double s : {0.0, 0.5, 2.0}) {
    CHECK(heat.phi_v(s) == doctest::Approx(s));
    CHECK(pm.phi_v(s) == doctest::Approx(s * s));
    CHECK(pm3.phi_v(s) == doctest::Approx(s * s * s));
    CHECK(log_rat.phi_v(s) == doctest::Approx(std::log1p(s)));
    CHECK(quad_rat.phi_v(s) == doctest::Approx(2.0 * (s - std::log1p(s))));
  }
  CHECK(log_cut.phi_v(0.5) == doctest::Approx(0.375));
  CHECK(log_cut.phi_v(3.0) == doctest::Approx(0.5));
  CHECK(pm.W_v(2.0) == doctest::Approx(2.0));  // (s^m - s) / (m - 1), zero at s = 1
  CHECK(heat.W_v(2.0) == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(quad_rat.phi_v_prime(1.0) == doctest::Approx(1.0));  // s W''(s) v(s) = 2 * 1/2
  CHECK(pm.label() == "power(2)/constant");
}

TEST_CASE("power family needs m > 1") {
  CHECK_THROWS_AS(make_diffusion(DiffusionFamily::power, 1.0, constant_mobility()), Error);
  CHECK_THROWS_AS(make_diffusion(DiffusionFamily::power, 0.5, constant_mobility()), Error);
}

TEST_CASE("tabulated phi_v agrees with closed forms and quadrature") {
  const MobilitySpec mobilities[] = {constant_mobility(), linear_cutoff_mobility(0.7), rational_mobility()};
  for (const auto& mob : mobilities) {
    for (double m : {1.5, 2.0, 3.0}) {
      const auto closed = make_diffusion(DiffusionFamily::power, m, mob);
      const auto table = make_diffusion(DiffusionFamily::power, m, mob, 16.0, DiffusionBuild::force_tabulated);
      CHECK_FALSE(table.closed_form());
      for (double s : {1e-5, 0.01, 0.3, 0.7, 1.0, 5.0, 15.9, 40.0}) {
        const double q = phi_v_quadrature(DiffusionFamily::power, m, mob, s);
        CHECK(std::fabs(closed.phi_v(s) - q) <= 1e-9 * std::max(1.0, q));
        CHECK(std::fabs(table.phi_v(s) - q) <= 1e-9 * std::max(1.0, q));
      }
    }
  }
}

TEST_CASE("diffusion validation passes for every documented pair") {
  for (const auto& mob : {constant_mobility(), linear_cutoff_mobility(1.0), rational_mobility()}) {
    for (const auto& d : {make_diffusion(DiffusionFamily::log_entropy, 1.0, mob),
                          make_diffusion(DiffusionFamily::power, 2.0, mob),
                          make_diffusion(DiffusionFamily::power, 1.5, mob)}) {
      const auto report = validate_diffusion(d);
      INFO(report.to_text());
      CHECK(report.all_passed());
    }
  }
}

TEST_CASE("mobility product bound") {
  const auto mob = linear_cutoff_mobility(1.0);
  const auto bounded = mobility_product_bound_check(mob, make_diffusion(DiffusionFamily::log_entropy, 1.0, mob), 16.0);
  CHECK(bounded.bounded_branch);
  CHECK(bounded.holds);
  const auto unbounded = mobility_product_bound_check(
      constant_mobility(), make_diffusion(DiffusionFamily::power, 2.0, constant_mobility()), 16.0);
  CHECK_FALSE(unbounded.bounded_branch);
  CHECK(unbounded.message.find("unbounded") != std::string::npos);
}

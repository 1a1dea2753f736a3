#include "aggdiff/particles.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "aggdiff/error.h"
#include "aggdiff/quadrature.h"

namespace aggdiff {

namespace {

constexpr int kProfilePanels = 256;

}  // namespace

void check_ordering(const TorusDomain& domain, std::span<const double> x) {
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(x[k])) {
      throw Error(ErrorCode::InvalidState, "non-finite particle position at " + std::to_string(k));
    }
    const double gap = k + 1 < n ? x[k + 1] - x[k] : x[0] + domain.length() - x[n - 1];
    if (!(gap > 0.0)) {
      throw Error(ErrorCode::InvalidState,
                  "particle ordering violated at gap " + std::to_string(k) +
                      " (gap = " + std::to_string(gap) + ")");
    }
  }
}

ParticleState::ParticleState(TorusDomain domain, double mass, std::vector<double> positions,
                             double t)
    : domain_(domain), mass_(mass), positions_(std::move(positions)), t_(t) {
  if (positions_.size() < 2) {
    throw Error(ErrorCode::BadParameter, "a particle state needs at least two particles");
  }
  if (!(mass_ > 0.0)) throw Error(ErrorCode::MassTooSmall, "particle mass must be positive");
  if (mass_ > 1.0 + 1e-12) {
    throw Error(ErrorCode::BadParameter, "total mass must not exceed 1, got " + std::to_string(mass_));
  }
  if (!(t_ >= 0.0)) throw Error(ErrorCode::BadParameter, "time must be nonnegative");
  check_ordering(domain_, positions_);
}

double ParticleState::min_gap() const noexcept {
  double g = gap(0);
  for (std::size_t k = 1; k < size(); ++k) g = std::min(g, gap(k));
  return g;
}

ParticleState ParticleState::translated(double shift) const {
  std::vector<double> x(positions_);
  for (double& xi : x) xi += shift;
  return ParticleState(domain_, mass_, std::move(x), t_);
}

ParticleState ParticleState::with_positions(std::vector<double> positions, double t) const {
  return ParticleState(domain_, mass_, std::move(positions), t);
}

std::vector<double> densities(const ParticleState& state) {
  const std::size_t n = state.size();
  const double cell_mass = state.mass() / static_cast<double>(n);
  std::vector<double> rho(n);
  for (std::size_t k = 0; k < n; ++k) rho[k] = cell_mass / state.gap(k);
  return rho;
}

PiecewiseDensity to_density(const ParticleState& state) {
  std::vector<double> b(state.positions().begin(), state.positions().end());
  return PiecewiseDensity(state.domain(), std::move(b), densities(state));
}

ParticleState init_particles(const PiecewiseDensity& rho0, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "need at least two particles");
  const TorusDomain& domain = rho0.domain();
  const PiecewiseDensity anchored = rho0.reanchored(domain.base());
  const double mass = anchored.mass();
  if (!(mass > 0.0)) throw Error(ErrorCode::MassTooSmall, "initial profile has no mass");
  std::vector<double> x(n);
  x[0] = domain.base();
  for (std::size_t k = 1; k < n; ++k) {
    x[k] = anchored.pseudo_inverse(mass * static_cast<double>(k) / static_cast<double>(n));
    if (!(x[k] > x[k - 1])) {
      throw Error(ErrorCode::DegenerateQuantile,
                  "quantiles " + std::to_string(k - 1) + " and " + std::to_string(k) + " coincide");
    }
  }
  if (!(x[0] + domain.length() > x[n - 1])) {
    throw Error(ErrorCode::DegenerateQuantile, "last quantile reaches the end of the period");
  }
  return ParticleState(domain, mass, std::move(x), 0.0);
}

double profile_mass(const std::function<double(double)>& rho0, const TorusDomain& domain) {
  try {
    return quad::adaptive_simpson(rho0, domain.base(), domain.base() + domain.length(), 1e-12, 40,
                                  kProfilePanels);
  } catch (const Error& e) {
    throw Error(ErrorCode::MassTooSmall, std::string("mass quadrature failed: ") + e.what());
  }
}

ParticleState init_particles(const std::function<double(double)>& rho0, std::size_t n,
                             const TorusDomain& domain) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "need at least two particles");
  const double mass = profile_mass(rho0, domain);
  if (!(mass > 0.0)) throw Error(ErrorCode::MassTooSmall, "initial profile has no mass");

  const double L = domain.length();
  const double lo_end = domain.base();
  const double hi_end = domain.base() + L;
  auto integral = [&](double a, double b) {
    if (b <= a) return 0.0;
    const int panels = std::max(1, static_cast<int>(std::ceil(kProfilePanels * (b - a) / L)));
    return quad::adaptive_simpson(rho0, a, b, 1e-14, 40, panels);
  };

  std::vector<double> x(n);
  x[0] = lo_end;
  double left = lo_end;  // last quantile found
  double mass_left = 0.0;  // integral from the base to `left`
  for (std::size_t k = 1; k < n; ++k) {
    const double target = mass * static_cast<double>(k) / static_cast<double>(n);
    // Invariant: F(lo) < target <= F(hi), F(x) = mass_left + integral(left, x).
    double lo = left;
    double f_lo = mass_left;
    double hi = hi_end;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * L; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double f_mid = f_lo + integral(lo, mid);
      if (f_mid < target) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    x[k] = hi;
    mass_left = f_lo + integral(lo, hi);
    left = hi;
    if (!(x[k] - x[k - 1] > 4e-15 * L)) {
      throw Error(ErrorCode::DegenerateQuantile,
                  "quantiles " + std::to_string(k - 1) + " and " + std::to_string(k) + " coincide");
    }
  }
  if (!(x[0] + L > x[n - 1])) {
    throw Error(ErrorCode::DegenerateQuantile, "last quantile reaches the end of the period");
  }
  return ParticleState(domain, mass, std::move(x), 0.0);
}

}  // namespace aggdiff

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "aggdiff/density.h"
#include "aggdiff/torus.h"

namespace aggdiff {

/// Ordered particle positions x_0 < ... < x_{N-1} < x_0 + L carrying equal
/// mass c_L / N each. Positions are monotone representatives and are never
/// wrapped individually; gap k is x_{k+1} - x_k with the last one closing
/// the period.
class ParticleState {
 public:
  ParticleState(TorusDomain domain, double mass, std::vector<double> positions, double t = 0.0);

  const TorusDomain& domain() const noexcept { return domain_; }
  double mass() const noexcept { return mass_; }
  double time() const noexcept { return t_; }
  std::size_t size() const noexcept { return positions_.size(); }
  std::span<const double> positions() const noexcept { return positions_; }
  double position(std::size_t k) const noexcept { return positions_[k]; }

  double gap(std::size_t k) const noexcept {
    return k + 1 < positions_.size() ? positions_[k + 1] - positions_[k]
                                     : positions_.front() + domain_.length() - positions_.back();
  }
  double min_gap() const noexcept;

  ParticleState translated(double shift) const;
  ParticleState with_positions(std::vector<double> positions, double t) const;

 private:
  TorusDomain domain_;
  double mass_;
  std::vector<double> positions_;
  double t_;
};

/// Throws InvalidState unless every gap (including the wrap gap) is positive.
void check_ordering(const TorusDomain& domain, std::span<const double> positions);

/// rho_k = c_L / (N * gap_k).
std::vector<double> densities(const ParticleState& state);

/// Piecewise-constant reconstruction with breakpoints at the particles.
PiecewiseDensity to_density(const ParticleState& state);

/// Quantile initialization from a piecewise-constant profile: x_0 = -L/2 and
/// x_k = sup{x : M(x) < k c_L / N}.
ParticleState init_particles(const PiecewiseDensity& rho0, std::size_t n);

/// Quantile initialization from a closed-form profile on [-L/2, L/2). The mass
/// is computed by adaptive Simpson and the quantiles by bisection on the
/// running integral.
ParticleState init_particles(const std::function<double(double)>& rho0, std::size_t n,
                             const TorusDomain& domain);

/// Mass of a closed-form profile over the fundamental cell (absolute tolerance 1e-12).
double profile_mass(const std::function<double(double)>& rho0, const TorusDomain& domain);

}  // namespace aggdiff

#pragma once

#include <string>
#include <vector>

#include "aggdiff/density.h"
#include "aggdiff/diffusion.h"
#include "aggdiff/kernel.h"
#include "aggdiff/particles.h"
#include "aggdiff/scheme.h"

namespace aggdiff {

/// 1/2 of the double integral of K(min_image(x - y)) rho(x) rho(y): 3x3
/// Gauss-Legendre per off-diagonal cell pair, exact one-dimensional reduction
/// (split at the kink) on diagonal pairs.
double interaction_energy(const PiecewiseDensity& density, const KernelSpec& kernel);
/// Sum of W_v(rho_k) * gap_k.
double entropy_energy(const PiecewiseDensity& density, const DiffusionSpec& diffusion);
double energy(const PiecewiseDensity& density, const KernelSpec& kernel, const DiffusionSpec& diffusion);

/// (N / c) * sum_k G_k^2.
double dissipation_a2(const ParticleState& state, const DiffusionSpec& diffusion);

/// Cyclic sum of |rho_{k+1} - rho_k|.
double total_variation(const PiecewiseDensity& density);

struct TvInequality {
  double lhs = 0.0;  // sum |a_{k+1} - a_k|
  double rhs = 0.0;  // max{1, N sum (a_{k+1} - a_k)^2}
  bool holds = false;
};
/// Sequence inequality applied to a_k = phi_v(rho_k).
TvInequality tv_dissipation_inequality(const ParticleState& state, const DiffusionSpec& diffusion);

/// Integral over z in [0, mass] of |X_1(z) - X_2(z)| between the two
/// pseudo-inverses, each anchored at its own first breakpoint. Exact for
/// piecewise-linear pseudo-inverses. Throws MassMismatch / DomainMismatch.
double wasserstein1(const PiecewiseDensity& d1, const PiecewiseDensity& d2);

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double linf = 0.0;
  double linf_phi = 0.0;
  double tv = 0.0;
  double energy = 0.0;
  double a2 = 0.0;
  double w1_to_initial = 0.0;
};

/// `initial` is the (unnormalized) density the W1 column is measured against.
/// linf_phi is max_k phi_v(rho_k), taken independently of linf. The energy
/// column is NaN when `with_energy` is false.
DiagnosticsRecord diagnose(const ParticleState& state, const Physics& physics,
                           const PiecewiseDensity& initial, bool with_energy = true);
std::vector<DiagnosticsRecord> diagnose_trajectory(const Trajectory& trajectory, const Physics& physics,
                                                   bool with_energy = true);

/// Header `t,mass,linf,linf_phi,tv,energy,a2,w1_to_initial`, 17 significant digits.
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

struct EnergyDissipationReport {
  std::vector<double> t, energy, a2;
  /// Per interval: dF/dt and the smallest C >= 0 with
  /// dF/dt <= -a^2/2 + C a + C (a^2 averaged over the interval).
  std::vector<double> slope, interval_C;
  double fitted_C = 0.0;
  double integral_a2 = 0.0;  // trapezoid over snapshot times
  double tol_energy = 0.1;
  bool energy_ok = false;      // F(t_end) <= F(0) + tol_energy
  bool strictly_decreasing = false;
};

EnergyDissipationReport energy_dissipation_monitor(const Trajectory& trajectory, const Physics& physics,
                                                   double tol_energy = 0.1);
/// Same, from precomputed series.
EnergyDissipationReport energy_dissipation_monitor(const std::vector<double>& t,
                                                   const std::vector<double>& energy,
                                                   const std::vector<double>& a2,
                                                   double tol_energy = 0.1);

/// max over snapshot pairs of W1(normalized rho(s), normalized rho(t)) / sqrt|t - s|.
double holder_half_estimate(const Trajectory& trajectory);
double holder_half_estimate(const std::vector<PiecewiseDensity>& snapshots, const std::vector<double>& times);

}  // namespace aggdiff

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aggdiff/diffusion.h"
#include "aggdiff/kernel.h"
#include "aggdiff/mobility.h"
#include "aggdiff/particles.h"

namespace aggdiff {

struct Physics {
  KernelSpec kernel;
  MobilitySpec mobility;
  DiffusionSpec diffusion;
};

enum class PairSum {
  automatic,  // exponential sweep when the kernel allows it, direct otherwise
  direct,     // O(N^2), ascending j for every k
  sweep,      // O(N) running sums; needs KernelSpec::exp_terms
};

/// Deliberate faults used to check that the acceptance suite has teeth.
struct Mutation {
  bool flip_diffusion_sign = false;  // G_k -> -G_k
  bool raw_differences = false;      // kernel argument x_k - x_j without the minimal image
};

struct RhsOptions {
  PairSum pair_sum = PairSum::automatic;
  Mutation mutation;
};

struct SchemeConfig {
  double dt_init = 1e-5;
  double dt_max = 1e-3;
  double safety = 0.4;
  double gap_min_fraction = 1e-8;
  double t_end = 0.05;
  std::vector<double> record_times;
  /// Consecutive accepted steps before dt is doubled.
  int grow_after = 20;
  /// Cap every step by safety * min_gap^2 / max phi_v'(rho_k).
  bool diffusive_cap = true;
  RhsOptions rhs;

  /// Throws BadParameter on inconsistent settings.
  void validate() const;
};

/// `count` equally spaced times from 0 to t_end inclusive.
std::vector<double> uniform_record_times(double t_end, int count);

/// Interaction sums F_k = sum_{j != k} K'(min_image(x_k - x_j)). Pairs half a
/// period apart (within 1e-12 L) contribute nothing (odd extension at the antipode).
std::vector<double> interaction_forces(std::span<const double> positions, const TorusDomain& domain,
                                       const KernelSpec& kernel, const RhsOptions& options = {});

/// Particle velocities dx_k/dt = -(c/N) v_k F_k - (N/c) G_k.
/// Throws InvalidState if any gap is not positive.
std::vector<double> rhs(const ParticleState& state, const KernelSpec& kernel,
                        const MobilitySpec& mobility, const DiffusionSpec& diffusion,
                        const RhsOptions& options = {});

/// G_k = phi_v(rho_k) - phi_v(rho_{k-1}) with cyclic indices.
std::vector<double> diffusion_differences(const ParticleState& state, const DiffusionSpec& diffusion);

/// Largest step allowed by the diffusive heuristic for this state.
double diffusive_dt(const ParticleState& state, const DiffusionSpec& diffusion, double safety);

/// One classical RK4 step. Returns nothing when the candidate (or a stage)
/// breaks the gap guard, in which case the caller halves dt.
std::optional<ParticleState> try_step(const ParticleState& state, const Physics& physics,
                                      const SchemeConfig& config, double dt);

struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  bool rejected = false;
};

struct Trajectory {
  std::vector<ParticleState> snapshots;
  std::vector<StepRecord> step_log;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Smallest gap / L seen over all accepted steps.
  double min_gap_fraction = 0.0;
};

/// Integrates to every record time, landing on each exactly. Throws
/// StepTooSmall (with the failure time) if dt collapses below 1e-14 t_end.
Trajectory integrate(const ParticleState& state0, const Physics& physics, const SchemeConfig& config);

}  // namespace aggdiff

#include "aggdiff/scheme.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "aggdiff/error.h"

namespace aggdiff {

namespace {

double gap_at(std::span<const double> x, double L, std::size_t k) {
  return k + 1 < x.size() ? x[k + 1] - x[k] : x[0] + L - x[k];
}

bool gaps_above(std::span<const double> x, double L, double threshold) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(gap_at(x, L, k) > threshold)) return false;
  }
  return true;
}

// Position of extended index j in [-N, 2N): x[j mod N] shifted by whole periods.
double extended(std::span<const double> x, double L, std::ptrdiff_t j) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (j < 0) return x[j + n] - L;
  if (j >= n) return x[j - n] + L;
  return x[j];
}

// Pairs this close to half a period apart sit on the jump of the periodized K'
// and count as antipodal, so roundoff in the positions cannot pick a side.
double antipode_band(double L) { return 1e-12 * L; }

void forces_direct(std::span<const double> x, const TorusDomain& domain, const KernelSpec& kernel,
                   bool raw, std::span<double> out) {
  const double half = 0.5 * domain.length();
  const double band = antipode_band(domain.length());
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const double d = raw ? x[k] - x[j] : domain.min_image(x[k] - x[j]);
      if (!raw && std::fabs(d) >= half - band) continue;
      sum += kernel.Kprime(d);
    }
    out[k] = sum;
  }
}

// K'(z) = sign(z) sum_i a_i exp(-r_i |z|): running sums over the particles
// within half a period on each side.
void forces_sweep(std::span<const double> x, const TorusDomain& domain, const KernelSpec& kernel,
                  bool raw, std::span<double> out) {
  const double L = domain.length();
  const double reach = 0.5 * L - antipode_band(L);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (const ExpTerm& term : kernel.exp_terms) {
    const double a = term.amplitude;
    const double r = term.rate;
    if (raw) {
      double left = 0.0;
      for (std::ptrdiff_t k = 0; k < n; ++k) {
        if (k > 0) left = (left + 1.0) * std::exp(-r * (x[k] - x[k - 1]));
        out[k] += a * left;
      }
      double right = 0.0;
      for (std::ptrdiff_t k = n - 1; k >= 0; --k) {
        if (k < n - 1) right = (right + 1.0) * std::exp(-r * (x[k + 1] - x[k]));
        out[k] -= a * right;
      }
      continue;
    }

    // Left neighbours of particle k: extended indices [lo, k-1] with
    // 0 < y_k - y_j < reach.
    double left = 0.0;
    std::ptrdiff_t lo = 0;
    for (std::ptrdiff_t j = -1; j > -n; --j) {
      const double d = x[0] - extended(x, L, j);
      if (d >= reach) break;
      left += std::exp(-r * d);
      lo = j;
    }
    out[0] += a * left;
    for (std::ptrdiff_t k = 1; k < n; ++k) {
      left = (left + 1.0) * std::exp(-r * (x[k] - x[k - 1]));
      while (lo < k && x[k] - extended(x, L, lo) >= reach) {
        left -= std::exp(-r * (x[k] - extended(x, L, lo)));
        ++lo;
      }
      if (lo == k) left = 0.0;
      out[k] += a * left;
    }

    // Right neighbours: [k+1, hi] with 0 < y_j - y_k < reach, sweeping downwards.
    double right = 0.0;
    std::ptrdiff_t hi = n - 1;
    for (std::ptrdiff_t j = n; j < 2 * n - 1; ++j) {
      const double d = extended(x, L, j) - x[n - 1];
      if (d >= reach) break;
      right += std::exp(-r * d);
      hi = j;
    }
    out[n - 1] -= a * right;
    for (std::ptrdiff_t k = n - 2; k >= 0; --k) {
      right = (right + 1.0) * std::exp(-r * (x[k + 1] - x[k]));
      while (hi > k && extended(x, L, hi) - x[k] >= reach) {
        right -= std::exp(-r * (extended(x, L, hi) - x[k]));
        --hi;
      }
      if (hi == k) right = 0.0;
      out[k] -= a * right;
    }
  }
}

void compute_forces(std::span<const double> x, const TorusDomain& domain, const KernelSpec& kernel,
                    const RhsOptions& options, std::span<double> out) {
  if (kernel.is_zero()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  PairSum mode = options.pair_sum;
  if (mode == PairSum::automatic) mode = kernel.exp_terms.empty() ? PairSum::direct : PairSum::sweep;
  if (mode == PairSum::sweep && kernel.exp_terms.empty()) {
    throw Error(ErrorCode::BadParameter, "sweep summation needs an exponential kernel");
  }
  const bool raw = options.mutation.raw_differences;
  if (mode == PairSum::sweep) {
    forces_sweep(x, domain, kernel, raw, out);
  } else {
    forces_direct(x, domain, kernel, raw, out);
  }
}

struct Workspace {
  std::vector<double> rho, phi, force;
};

void velocities(std::span<const double> x, double mass, const TorusDomain& domain,
                const Physics& physics, const RhsOptions& options, Workspace& ws,
                std::span<double> out) {
  const std::size_t n = x.size();
  const double L = domain.length();
  const double per = mass / static_cast<double>(n);
  ws.rho.resize(n);
  ws.phi.resize(n);
  ws.force.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double g = gap_at(x, L, k);
    if (!(g > 0.0)) {
      throw Error(ErrorCode::InvalidState, "non-positive gap at particle " + std::to_string(k));
    }
    ws.rho[k] = per / g;
    ws.phi[k] = physics.diffusion.phi_v(ws.rho[k]);
  }
  compute_forces(x, domain, physics.kernel, options, ws.force);
  const double diff_sign = options.mutation.flip_diffusion_sign ? -1.0 : 1.0;
  const double inv_per = 1.0 / per;
  const bool interacting = !physics.kernel.is_zero();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t prev = k == 0 ? n - 1 : k - 1;
    double vel = -inv_per * diff_sign * (ws.phi[k] - ws.phi[prev]);
    if (interacting) {
      // v nonincreasing, so min(v(a), v(b)) = v(max(a, b)).
      const double vk = physics.mobility.v(std::max(ws.rho[k], ws.rho[prev]));
      vel -= per * vk * ws.force[k];
    }
    out[k] = vel;
  }
}

}  // namespace

void SchemeConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::BadParameter, what); };
  if (!(dt_init > 0.0) || !(dt_max > 0.0)) bad("time steps must be positive");
  if (dt_init > dt_max) bad("dt_init must not exceed dt_max");
  if (!(safety > 0.0 && safety <= 1.0)) bad("safety must lie in (0, 1]");
  if (!(gap_min_fraction > 0.0 && gap_min_fraction < 1.0)) bad("gap_min_fraction must lie in (0, 1)");
  if (!(t_end > 0.0)) bad("t_end must be positive");
  if (grow_after < 1) bad("grow_after must be at least 1");
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    if (record_times[i] < 0.0 || record_times[i] > t_end) bad("record time outside [0, t_end]");
    if (i > 0 && !(record_times[i] > record_times[i - 1])) bad("record times must increase");
  }
}

std::vector<double> uniform_record_times(double t_end, int count) {
  if (count < 2) return {t_end};
  std::vector<double> times(count);
  for (int i = 0; i < count; ++i) times[i] = t_end * i / (count - 1);
  times.back() = t_end;
  return times;
}

std::vector<double> interaction_forces(std::span<const double> positions, const TorusDomain& domain,
                                       const KernelSpec& kernel, const RhsOptions& options) {
  std::vector<double> out(positions.size());
  compute_forces(positions, domain, kernel, options, out);
  return out;
}

std::vector<double> rhs(const ParticleState& state, const KernelSpec& kernel,
                        const MobilitySpec& mobility, const DiffusionSpec& diffusion,
                        const RhsOptions& options) {
  const Physics physics{kernel, mobility, diffusion};
  Workspace ws;
  std::vector<double> out(state.size());
  velocities(state.positions(), state.mass(), state.domain(), physics, options, ws, out);
  return out;
}

std::vector<double> diffusion_differences(const ParticleState& state, const DiffusionSpec& diffusion) {
  const auto rho = densities(state);
  const std::size_t n = rho.size();
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = diffusion.phi_v(rho[k]) - diffusion.phi_v(rho[k == 0 ? n - 1 : k - 1]);
  }
  return g;
}

double diffusive_dt(const ParticleState& state, const DiffusionSpec& diffusion, double safety) {
  const auto rho = densities(state);
  double max_prime = 0.0;
  for (double r : rho) max_prime = std::max(max_prime, diffusion.phi_v_prime(r));
  if (!(max_prime > 0.0)) return INFINITY;
  const double g = state.min_gap();
  return safety * g * g / max_prime;
}

std::optional<ParticleState> try_step(const ParticleState& state, const Physics& physics,
                                      const SchemeConfig& config, double dt) {
  const std::size_t n = state.size();
  const double L = state.domain().length();
  const auto x = state.positions();
  thread_local Workspace ws;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);
  auto eval = [&](std::span<const double> pos, std::span<double> out) {
    if (!gaps_above(pos, L, 0.0)) return false;
    velocities(pos, state.mass(), state.domain(), physics, config.rhs, ws, out);
    return true;
  };
  if (!eval(x, k1)) return std::nullopt;
  for (std::size_t k = 0; k < n; ++k) stage[k] = x[k] + 0.5 * dt * k1[k];
  if (!eval(stage, k2)) return std::nullopt;
  for (std::size_t k = 0; k < n; ++k) stage[k] = x[k] + 0.5 * dt * k2[k];
  if (!eval(stage, k3)) return std::nullopt;
  for (std::size_t k = 0; k < n; ++k) stage[k] = x[k] + dt * k3[k];
  if (!eval(stage, k4)) return std::nullopt;
  for (std::size_t k = 0; k < n; ++k) {
    stage[k] = x[k] + dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }
  if (!gaps_above(stage, L, config.gap_min_fraction * L)) return std::nullopt;
  return state.with_positions(std::move(stage), state.time() + dt);
}

Trajectory integrate(const ParticleState& state0, const Physics& physics, const SchemeConfig& config) {
  config.validate();
  std::vector<double> records = config.record_times;
  if (records.empty()) records.push_back(config.t_end);

  Trajectory traj;
  ParticleState state = state0;
  double dt = config.dt_init;
  int streak = 0;
  const double L = state.domain().length();
  traj.min_gap_fraction = state.min_gap() / L;
  const double dt_floor = 1e-14 * config.t_end;

  for (double target : records) {
    while (state.time() < target) {
      double h = dt;
      if (config.diffusive_cap) h = std::min(h, diffusive_dt(state, physics.diffusion, config.safety));
      const double remaining = target - state.time();
      const bool landing = remaining <= h * (1.0 + 1e-9);
      if (landing) h = remaining;

      std::optional<ParticleState> next;
      try {
        next = try_step(state, physics, config, h);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidState) throw;
      }
      if (!next) {
        traj.step_log.push_back({state.time(), h, true});
        ++traj.rejected;
        streak = 0;
        dt = 0.5 * h;
        if (dt < dt_floor) {
          throw Error(ErrorCode::StepTooSmall,
                      "time step collapsed near t = " + std::to_string(state.time()) +
                          " (particles about to collide)",
                      state.time());
        }
        continue;
      }
      state = landing ? next->with_positions({next->positions().begin(), next->positions().end()}, target)
                      : std::move(*next);
      traj.step_log.push_back({state.time(), h, false});
      ++traj.accepted;
      traj.min_gap_fraction = std::min(traj.min_gap_fraction, state.min_gap() / L);
      if (++streak >= config.grow_after) {
        dt = std::min(2.0 * dt, config.dt_max);
        streak = 0;
      }
    }
    traj.snapshots.push_back(state);
  }
  return traj;
}

}  // namespace aggdiff

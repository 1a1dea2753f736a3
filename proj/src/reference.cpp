#include "aggdiff/reference.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "aggdiff/error.h"
#include "aggdiff/quadrature.h"

namespace aggdiff {

namespace {

// Reusable buffers for the finite-volume operator.
class FvOperator {
 public:
  FvOperator(const TorusDomain& domain, std::size_t M, const Physics& physics)
      : physics_(physics), M_(M), dx_(domain.length() / static_cast<double>(M)),
        interacting_(!physics.kernel.is_zero()) {
    phi_.resize(M);
    clipped_.resize(M);
    u_.assign(M, 0.0);
    flux_.resize(M);
    if (interacting_) {
      // Kernel derivative between interface i+1/2 and centre j depends on (i - j) mod M.
      table_.resize(M);
      for (std::size_t d = 0; d < M; ++d) {
        table_[d] = physics.kernel.Kprime(domain.min_image((static_cast<double>(d) + 0.5) * dx_));
      }
    }
  }

  double dx() const { return dx_; }

  // Interface velocities u_{i+1/2} = -(K' * rho)(x_{i+1/2}).
  void velocities(const std::vector<double>& rho) {
    if (!interacting_) return;  // u_ stays zero
    for (std::size_t i = 0; i < M_; ++i) {
      double sum = 0.0;
      // j <= i uses table[i - j]; j > i wraps to table[i - j + M].
      for (std::size_t j = 0; j <= i; ++j) sum += table_[i - j] * rho[j];
      for (std::size_t j = i + 1; j < M_; ++j) sum += table_[i + M_ - j] * rho[j];
      u_[i] = -dx_ * sum;
    }
  }

  double max_dt(const std::vector<double>& rho, double safety) {
    velocities(rho);
    double umax = 0.0;
    if (interacting_) {
      for (std::size_t i = 0; i < M_; ++i) umax = std::max(umax, std::fabs(u_[i]));
    }
    // phi_v' is evaluated on the extreme values only when it is monotone in s.
    double pmax = 0.0;
    if (physics_.mobility.kind == MobilityKind::constant) {
      double hi = 0.0;
      for (std::size_t i = 0; i < M_; ++i) hi = std::max(hi, rho[i]);
      pmax = physics_.diffusion.phi_v_prime(hi);
    } else {
      for (std::size_t i = 0; i < M_; ++i) {
        pmax = std::max(pmax, physics_.diffusion.phi_v_prime(std::max(rho[i], 0.0)));
      }
    }
    double bound = INFINITY;
    if (umax > 0.0) bound = dx_ / umax;
    if (pmax > 0.0) bound = std::min(bound, dx_ * dx_ / (2.0 * pmax));
    return safety * bound;
  }

  // out = rho - dt * div J(rho); velocities must already hold u(rho) when
  // `fresh` is false.
  void apply(const std::vector<double>& rho, double dt, std::vector<double>& out, bool fresh) {
    if (fresh) velocities(rho);
    for (std::size_t i = 0; i < M_; ++i) clipped_[i] = std::max(rho[i], 0.0);
    physics_.diffusion.phi_v_many(clipped_.data(), phi_.data(), M_);
    const double inv_dx = 1.0 / dx_;
    for (std::size_t i = 0; i + 1 < M_; ++i) flux_[i] = -(phi_[i + 1] - phi_[i]) * inv_dx;
    flux_[M_ - 1] = -(phi_[0] - phi_[M_ - 1]) * inv_dx;
    if (interacting_) {
      for (std::size_t i = 0; i < M_; ++i) {
        const std::size_t r = i + 1 == M_ ? 0 : i + 1;
        const double up = u_[i] >= 0.0 ? clipped_[i] : clipped_[r];
        flux_[i] += (u_[i] >= 0.0 ? rho[i] : rho[r]) * physics_.mobility.v(up) * u_[i];
      }
    }
    const double ratio = dt * inv_dx;
    out[0] = rho[0] - ratio * (flux_[0] - flux_[M_ - 1]);
    for (std::size_t i = 1; i < M_; ++i) out[i] = rho[i] - ratio * (flux_[i] - flux_[i - 1]);
  }

  // Heun: average of rho and two chained Euler steps.
  void heun(std::vector<double>& rho, double dt, std::vector<double>& stage, std::vector<double>& stage2,
            bool velocities_ready) {
    apply(rho, dt, stage, !velocities_ready);
    apply(stage, dt, stage2, true);
    for (std::size_t i = 0; i < M_; ++i) rho[i] = 0.5 * (rho[i] + stage2[i]);
  }

 private:
  const Physics& physics_;
  std::size_t M_;
  double dx_;
  bool interacting_;
  std::vector<double> table_, phi_, clipped_, u_, flux_;
};

void check_negative(const std::vector<double>& rho, double t) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < -1e-12) {
      throw Error(ErrorCode::NegativeDensity,
                  "finite-volume cell " + std::to_string(i) + " dropped to " + std::to_string(rho[i]), t);
    }
  }
}

}  // namespace

GridDensity grid_from_profile(const std::function<double(double)>& rho0, std::size_t M,
                              const TorusDomain& domain) {
  if (M < 2) throw Error(ErrorCode::BadParameter, "grid needs at least two cells");
  GridDensity grid;
  grid.domain = domain;
  grid.values.resize(M);
  const double dx = domain.length() / static_cast<double>(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double a = domain.base() + dx * static_cast<double>(i);
    grid.values[i] = quad::gauss_legendre<5>(rho0, a, a + dx) / dx;
  }
  return grid;
}

double fv_max_dt(const GridDensity& grid, const Physics& physics, double safety) {
  FvOperator op(grid.domain, grid.size(), physics);
  return op.max_dt(grid.values, safety);
}

GridDensity fv_step(const GridDensity& grid, const Physics& physics, double dt, double safety) {
  FvOperator op(grid.domain, grid.size(), physics);
  const double bound = op.max_dt(grid.values, safety);
  if (dt > bound * (1.0 + 1e-12)) {
    throw Error(ErrorCode::CFLViolation, "dt = " + std::to_string(dt) + " exceeds the bound " +
                                             std::to_string(bound));
  }
  GridDensity out = grid;
  std::vector<double> stage(grid.size()), stage2(grid.size());
  op.heun(out.values, dt, stage, stage2, true);
  out.t = grid.t + dt;
  return out;
}

GridTrajectory fv_solve(const GridDensity& rho0, const Physics& physics, double T,
                        const std::vector<double>& record_times, double safety) {
  if (!(T > 0.0)) throw Error(ErrorCode::BadParameter, "horizon must be positive");
  std::vector<double> records = record_times;
  if (records.empty()) records.push_back(T);
  FvOperator op(rho0.domain, rho0.size(), physics);
  GridTrajectory traj;
  std::vector<double> rho = rho0.values, stage(rho.size()), stage2(rho.size());
  double t = rho0.t;
  for (double target : records) {
    if (target > T * (1.0 + 1e-12)) throw Error(ErrorCode::BadParameter, "record time beyond horizon");
    while (t < target) {
      double dt = op.max_dt(rho, safety);
      if (!std::isfinite(dt)) dt = target - t;
      const bool landing = target - t <= dt * (1.0 + 1e-9);
      if (landing) dt = target - t;
      op.heun(rho, dt, stage, stage2, true);
      t = landing ? target : t + dt;
      ++traj.steps;
      check_negative(rho, t);
    }
    GridDensity snap;
    snap.domain = rho0.domain;
    snap.values = rho;
    snap.t = t;
    traj.snapshots.push_back(std::move(snap));
  }
  return traj;
}

FourierSeries fourier_modes(const std::function<double(double)>& rho0, double length, int modes) {
  FourierSeries s;
  s.length = length;
  const double a = -0.5 * length, b = 0.5 * length;
  s.a0 = quad::adaptive_simpson(rho0, a, b, 1e-13, 40, 64) / length;
  for (int n = 1; n <= modes; ++n) {
    const double k = 2.0 * std::numbers::pi * n / length;
    auto fc = [&](double x) { return rho0(x) * std::cos(k * x); };
    auto fs = [&](double x) { return rho0(x) * std::sin(k * x); };
    s.a.push_back(2.0 / length * quad::adaptive_simpson(fc, a, b, 1e-13, 40, 64));
    s.b.push_back(2.0 / length * quad::adaptive_simpson(fs, a, b, 1e-13, 40, 64));
  }
  return s;
}

GridDensity exact_heat(const FourierSeries& rho0, double t, std::size_t M) {
  GridDensity grid;
  grid.domain = TorusDomain(rho0.length);
  grid.values.assign(M, rho0.a0);
  grid.t = t;
  const double dx = grid.dx();
  const std::size_t modes = std::max(rho0.a.size(), rho0.b.size());
  for (std::size_t n = 1; n <= modes; ++n) {
    const double an = n <= rho0.a.size() ? rho0.a[n - 1] : 0.0;
    const double bn = n <= rho0.b.size() ? rho0.b[n - 1] : 0.0;
    if (an == 0.0 && bn == 0.0) continue;
    const double k = 2.0 * std::numbers::pi * static_cast<double>(n) / rho0.length;
    const double decay = std::exp(-k * k * t);
    for (std::size_t i = 0; i < M; ++i) {
      const double xl = grid.cell_left(i);
      const double xr = xl + dx;
      const double integral =
          an * (std::sin(k * xr) - std::sin(k * xl)) - bn * (std::cos(k * xr) - std::cos(k * xl));
      grid.values[i] += decay * integral / (k * dx);
    }
  }
  return grid;
}

}  // namespace aggdiff

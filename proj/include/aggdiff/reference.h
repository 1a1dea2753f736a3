#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "aggdiff/grid.h"
#include "aggdiff/scheme.h"

namespace aggdiff {

/// Cell averages of a closed-form profile (5-point Gauss-Legendre per cell).
GridDensity grid_from_profile(const std::function<double(double)>& rho0, std::size_t M,
                              const TorusDomain& domain);

/// Largest admissible step: safety * min(dx / max|u|, dx^2 / (2 max phi_v')).
double fv_max_dt(const GridDensity& grid, const Physics& physics, double safety = 0.4);

/// One Heun step of the conservative upwind / central-diffusion scheme.
/// Throws CFLViolation if dt exceeds fv_max_dt.
GridDensity fv_step(const GridDensity& grid, const Physics& physics, double dt, double safety = 0.4);

struct GridTrajectory {
  std::vector<GridDensity> snapshots;
  std::size_t steps = 0;
};

/// Steps at the CFL limit, landing exactly on every record time. Throws
/// NegativeDensity if a cell drops below -1e-12.
GridTrajectory fv_solve(const GridDensity& rho0, const Physics& physics, double T,
                        const std::vector<double>& record_times, double safety = 0.4);

/// rho(x) = a0 + sum_n a_n cos(2 pi n x / L) + b_n sin(2 pi n x / L), n = 1..64.
struct FourierSeries {
  double length = 1.0;
  double a0 = 0.0;
  std::vector<double> a;  // a[n-1] multiplies cos
  std::vector<double> b;  // b[n-1] multiplies sin
};

/// Coefficients of a profile by adaptive quadrature.
FourierSeries fourier_modes(const std::function<double(double)>& rho0, double length, int modes = 64);

/// Exact heat-equation solution at time t as exact cell averages on M cells.
GridDensity exact_heat(const FourierSeries& rho0, double t, std::size_t M);

}  // namespace aggdiff

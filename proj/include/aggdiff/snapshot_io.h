#pragma once

#include <string>

#include "aggdiff/density.h"
#include "aggdiff/grid.h"

namespace aggdiff {

struct DensitySnapshot {
  PiecewiseDensity density;
  double t = 0.0;
};

/// `# L=<L> mass=<mass> t=<t>`, header `breakpoint,value`, breakpoints wrapped
/// into [-L/2, L/2) and listed in increasing order, 17 significant digits.
void write_density_csv(const std::string& path, const PiecewiseDensity& density, double t);
DensitySnapshot read_density_csv(const std::string& path);

/// `# M=<M> L=<L> t=<t>`, header `x_center,value`.
void write_grid_csv(const std::string& path, const GridDensity& grid);
GridDensity read_grid_csv(const std::string& path);

/// `%.17g`.
std::string format_double(double x);

}  // namespace aggdiff

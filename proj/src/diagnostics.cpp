#include "aggdiff/diagnostics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aggdiff/error.h"
#include "aggdiff/quadrature.h"
#include "aggdiff/snapshot_io.h"

namespace aggdiff {

namespace {

// 2 * int_0^h K(u) (h - u) du, the diagonal cell pair with the kink at u = 0
// on the boundary.
double diagonal_pair(const KernelSpec& kernel, const TorusDomain& domain, double h) {
  auto f = [&](double u) { return kernel.K(domain.min_image(u)) * (h - u); };
  const double half = 0.5 * domain.length();
  if (h <= half) return 2.0 * quad::gauss_legendre<3>(f, 0.0, h);
  return 2.0 * (quad::gauss_legendre<3>(f, 0.0, half) + quad::gauss_legendre<3>(f, half, h));
}

}  // namespace

double interaction_energy(const PiecewiseDensity& density, const KernelSpec& kernel) {
  if (kernel.kind == KernelKind::zero) return 0.0;
  const auto& domain = density.domain();
  if (kernel.kind == KernelKind::constant) return 0.5 * kernel.kappa * density.mass() * density.mass();
  const std::size_t n = density.size();
  using Rule = quad::GaussLegendre<3>;
  std::vector<std::array<double, 3>> node(n), weight(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = density.breakpoints()[k];
    const double h = density.gap(k);
    for (int q = 0; q < 3; ++q) {
      node[k][q] = a + 0.5 * h * (1.0 + Rule::nodes[q]);
      weight[k][q] = 0.5 * h * Rule::weights[q];
    }
  }
  const auto values = density.values();
  double diagonal = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] == 0.0) continue;
    diagonal += values[k] * values[k] * diagonal_pair(kernel, domain, density.gap(k));
  }
  double off = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      if (values[j] == 0.0) continue;
      double pair = 0.0;
      for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
          pair += weight[k][p] * weight[j][q] * kernel.K(domain.min_image(node[k][p] - node[j][q]));
        }
      }
      row += values[j] * pair;
    }
    off += values[k] * row;
  }
  return 0.5 * (diagonal + 2.0 * off);
}

double entropy_energy(const PiecewiseDensity& density, const DiffusionSpec& diffusion) {
  double sum = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) {
    sum += diffusion.W_v(density.values()[k]) * density.gap(k);
  }
  return sum;
}

double energy(const PiecewiseDensity& density, const KernelSpec& kernel, const DiffusionSpec& diffusion) {
  return interaction_energy(density, kernel) + entropy_energy(density, diffusion);
}

double dissipation_a2(const ParticleState& state, const DiffusionSpec& diffusion) {
  const auto g = diffusion_differences(state, diffusion);
  double sum = 0.0;
  for (double x : g) sum += x * x;
  return static_cast<double>(state.size()) / state.mass() * sum;
}

double total_variation(const PiecewiseDensity& density) {
  const auto v = density.values();
  const std::size_t n = v.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += std::fabs(v[(k + 1) % n] - v[k]);
  return sum;
}

TvInequality tv_dissipation_inequality(const ParticleState& state, const DiffusionSpec& diffusion) {
  const auto rho = densities(state);
  const std::size_t n = rho.size();
  std::vector<double> a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = diffusion.phi_v(rho[k]);
  TvInequality out;
  double squares = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = a[(k + 1) % n] - a[k];
    out.lhs += std::fabs(d);
    squares += d * d;
  }
  out.rhs = std::max(1.0, static_cast<double>(n) * squares);
  out.holds = out.lhs <= out.rhs;
  return out;
}

double wasserstein1(const PiecewiseDensity& d1, const PiecewiseDensity& d2) {
  if (!(d1.domain() == d2.domain())) {
    throw Error(ErrorCode::DomainMismatch, "W1 between densities on different tori");
  }
  if (std::fabs(d1.mass() - d2.mass()) > 1e-10) {
    throw Error(ErrorCode::MassMismatch, "W1 inputs have masses " + format_double(d1.mass()) +
                                             " and " + format_double(d2.mass()));
  }
  const double z_end = std::min(d1.mass(), d2.mass());
  const std::size_t n1 = d1.size(), n2 = d2.size();
  // X on cell k, evaluated at z inside [cum(k), cum(k+1)].
  auto X = [](const PiecewiseDensity& d, std::size_t k, double z) {
    const double lo = d.cumulative(k), hi = d.cumulative(k + 1);
    const double frac = std::clamp((z - lo) / (hi - lo), 0.0, 1.0);
    return d.breakpoints()[k] + frac * d.gap(k);
  };
  double total = 0.0;
  double z = 0.0;
  std::size_t i = 0, j = 0;
  while (z < z_end) {
    while (i + 1 < n1 && d1.cumulative(i + 1) <= z) ++i;
    while (j + 1 < n2 && d2.cumulative(j + 1) <= z) ++j;
    const double z_next = std::min({d1.cumulative(i + 1), d2.cumulative(j + 1), z_end});
    if (!(z_next > z)) break;
    const double fa = X(d1, i, z) - X(d2, j, z);
    const double fb = X(d1, i, z_next) - X(d2, j, z_next);
    const double dz = z_next - z;
    if ((fa >= 0.0) == (fb >= 0.0)) {
      total += 0.5 * (std::fabs(fa) + std::fabs(fb)) * dz;
    } else {
      total += 0.5 * (fa * fa + fb * fb) / (std::fabs(fa) + std::fabs(fb)) * dz;
    }
    z = z_next;
  }
  return total;
}

DiagnosticsRecord diagnose(const ParticleState& state, const Physics& physics,
                           const PiecewiseDensity& initial, bool with_energy) {
  const PiecewiseDensity density = to_density(state);
  DiagnosticsRecord rec;
  rec.t = state.time();
  for (std::size_t k = 0; k < density.size(); ++k) {
    rec.mass += density.values()[k] * density.gap(k);
    rec.linf = std::max(rec.linf, density.values()[k]);
    rec.linf_phi = std::max(rec.linf_phi, physics.diffusion.phi_v(density.values()[k]));
  }
  rec.tv = total_variation(density);
  rec.energy = with_energy ? energy(density, physics.kernel, physics.diffusion) : std::nan("");
  rec.a2 = dissipation_a2(state, physics.diffusion);
  rec.w1_to_initial = wasserstein1(density.normalized(), initial.normalized());
  return rec;
}

std::vector<DiagnosticsRecord> diagnose_trajectory(const Trajectory& trajectory, const Physics& physics,
                                                   bool with_energy) {
  std::vector<DiagnosticsRecord> out;
  if (trajectory.snapshots.empty()) return out;
  const PiecewiseDensity initial = to_density(trajectory.snapshots.front());
  out.reserve(trajectory.snapshots.size());
  for (const auto& s : trajectory.snapshots) out.push_back(diagnose(s, physics, initial, with_energy));
  return out;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "t,mass,linf,linf_phi,tv,energy,a2,w1_to_initial\n";
  for (const auto& r : records) {
    out << format_double(r.t) << "," << format_double(r.mass) << "," << format_double(r.linf) << ","
        << format_double(r.linf_phi) << "," << format_double(r.tv) << "," << format_double(r.energy)
        << "," << format_double(r.a2) << "," << format_double(r.w1_to_initial) << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "t,mass,linf,linf_phi,tv,energy,a2,w1_to_initial") {
    throw Error(ErrorCode::ParseError, path + ":1: unexpected diagnostics header");
  }
  std::vector<DiagnosticsRecord> out;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    double f[8];
    const char* p = line.c_str();
    int count = 0;
    for (; count < 8; ++count) {
      char* end = nullptr;
      f[count] = std::strtod(p, &end);
      if (end == p) break;
      p = end;
      if (count < 7) {
        if (*p != ',') break;
        ++p;
      }
    }
    if (count != 8 || *p != '\0') {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(number) + ": expected 8 numbers");
    }
    const DiagnosticsRecord r{f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7]};
    out.push_back(r);
  }
  return out;
}

EnergyDissipationReport energy_dissipation_monitor(const std::vector<double>& t,
                                                   const std::vector<double>& energy,
                                                   const std::vector<double>& a2, double tol_energy) {
  EnergyDissipationReport rep;
  rep.t = t;
  rep.energy = energy;
  rep.a2 = a2;
  rep.tol_energy = tol_energy;
  if (t.size() < 2) return rep;
  rep.strictly_decreasing = true;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i];
    const double slope = (energy[i + 1] - energy[i]) / dt;
    const double mean_a2 = 0.5 * (a2[i] + a2[i + 1]);
    const double a = std::sqrt(mean_a2);
    const double c = std::max(0.0, (slope + 0.5 * mean_a2) / (a + 1.0));
    rep.slope.push_back(slope);
    rep.interval_C.push_back(c);
    rep.fitted_C = std::max(rep.fitted_C, c);
    rep.integral_a2 += mean_a2 * dt;
    rep.strictly_decreasing = rep.strictly_decreasing && energy[i + 1] < energy[i];
  }
  rep.energy_ok = energy.back() <= energy.front() + tol_energy;
  return rep;
}

EnergyDissipationReport energy_dissipation_monitor(const Trajectory& trajectory, const Physics& physics,
                                                   double tol_energy) {
  std::vector<double> t, e, a2;
  for (const auto& s : trajectory.snapshots) {
    t.push_back(s.time());
    e.push_back(energy(to_density(s), physics.kernel, physics.diffusion));
    a2.push_back(dissipation_a2(s, physics.diffusion));
  }
  return energy_dissipation_monitor(t, e, a2, tol_energy);
}

double holder_half_estimate(const std::vector<PiecewiseDensity>& snapshots,
                            const std::vector<double>& times) {
  std::vector<PiecewiseDensity> unit;
  unit.reserve(snapshots.size());
  for (const auto& d : snapshots) unit.push_back(d.normalized());
  double best = 0.0;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    for (std::size_t j = i + 1; j < unit.size(); ++j) {
      const double gap = std::fabs(times[j] - times[i]);
      if (!(gap > 0.0)) continue;
      best = std::max(best, wasserstein1(unit[i], unit[j]) / std::sqrt(gap));
    }
  }
  return best;
}

double holder_half_estimate(const Trajectory& trajectory) {
  std::vector<PiecewiseDensity> snaps;
  std::vector<double> times;
  for (const auto& s : trajectory.snapshots) {
    snaps.push_back(to_density(s));
    times.push_back(s.time());
  }
  return holder_half_estimate(snaps, times);
}

}  // namespace aggdiff

#include "aggdiff/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "aggdiff/error.h"
#include "aggdiff/quadrature.h"
#include "aggdiff/snapshot_io.h"

namespace aggdiff {

namespace fs = std::filesystem;

namespace {

// Sum of |f - g| over the cells cut by every breakpoint of either function.
template <class F, class G>
double cut_l1(std::vector<double>& cuts, F&& f, G&& g) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    total += std::fabs(f(mid) - g(mid)) * (cuts[i + 1] - cuts[i]);
  }
  return total;
}

double grid_value(const GridDensity& grid, double x) {
  const double dx = grid.dx();
  auto i = static_cast<std::ptrdiff_t>(std::floor((x - grid.domain.base()) / dx));
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(grid.size()) - 1);
  return grid.values[static_cast<std::size_t>(i)];
}

void add_breakpoints(std::vector<double>& cuts, const PiecewiseDensity& d) {
  for (double b : d.breakpoints()) cuts.push_back(d.domain().wrap(b));
}

void add_edges(std::vector<double>& cuts, const GridDensity& g) {
  for (std::size_t i = 0; i <= g.size(); ++i) {
    cuts.push_back(i == g.size() ? g.domain.base() + g.domain.length() : g.cell_left(i));
  }
}

double param(const InitSpec& init, const char* key, double fallback) {
  auto it = init.params.find(key);
  return it == init.params.end() ? fallback : it->second;
}

std::string time_tag(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

std::string number_text(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

struct SnapshotSeries {
  std::vector<double> t;
  std::vector<PiecewiseDensity> densities;
};

SnapshotSeries series_of(const Trajectory& traj) {
  SnapshotSeries s;
  for (const auto& st : traj.snapshots) {
    s.t.push_back(st.time());
    s.densities.push_back(to_density(st));
  }
  return s;
}

CellResult run_cell(const StudyConfig& cfg, const TorusDomain& domain, std::size_t n,
                    const std::string& label, double parameter) {
  CellResult cell;
  cell.label = label;
  cell.parameter = parameter;
  const auto start = std::chrono::steady_clock::now();
  try {
    const ParticleState state0 = make_initial_state(cfg.init, domain, n);
    Trajectory traj = integrate(state0, cfg.physics, cfg.scheme);
    cell.diagnostics = diagnose_trajectory(traj, cfg.physics, cfg.energy_series);

    auto& m = cell.metrics;
    m["N"] = static_cast<double>(n);
    m["L"] = domain.length();
    m["mass"] = state0.mass();
    m["accepted_steps"] = static_cast<double>(traj.accepted);
    m["rejected_steps"] = static_cast<double>(traj.rejected);
    m["min_gap_fraction"] = traj.min_gap_fraction;
    double mass_err = 0.0, max_linf = 0.0, min_rho = INFINITY, init_min_rho = INFINITY;
    bool identity = true;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const auto& rec = cell.diagnostics[i];
      mass_err = std::max(mass_err, std::fabs(rec.mass - state0.mass()) / state0.mass());
      max_linf = std::max(max_linf, rec.linf);
      identity = identity && rec.linf_phi == cfg.physics.diffusion.phi_v(rec.linf);
      const auto rho = densities(traj.snapshots[i]);
      const double lo = *std::min_element(rho.begin(), rho.end());
      min_rho = std::min(min_rho, lo);
      if (i == 0) init_min_rho = lo;
    }
    m["max_mass_rel_error"] = mass_err;
    m["max_linf"] = max_linf;
    m["linf_phi_identity"] = identity ? 1.0 : 0.0;
    m["min_density"] = min_rho;
    m["initial_min_density"] = init_min_rho;
    m["holder_half"] = holder_half_estimate(traj);
    std::vector<double> t, e, a2;
    for (const auto& rec : cell.diagnostics) {
      t.push_back(rec.t);
      e.push_back(rec.energy);
      a2.push_back(rec.a2);
    }
    const auto mon = energy_dissipation_monitor(t, e, a2);
    m["integral_a2"] = mon.integral_a2;
    if (cfg.energy_series) {
      m["energy_start"] = e.front();
      m["energy_end"] = e.back();
      m["fitted_C"] = mon.fitted_C;
      m["energy_ok"] = mon.energy_ok ? 1.0 : 0.0;
      m["energy_strictly_decreasing"] = mon.strictly_decreasing ? 1.0 : 0.0;
    }
    cell.trajectory = std::move(traj);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.failure = e.what();
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  cell.metrics["wall_seconds"] = elapsed.count();
  return cell;
}

void write_cell_evidence(const std::string& dir, const CellResult& cell) {
  if (dir.empty() || !cell.ok) return;
  const fs::path path = fs::path(dir) / cell.label;
  fs::create_directories(path);
  write_diagnostics_csv((path / "diagnostics.csv").string(), cell.diagnostics);
  for (const auto& s : cell.trajectory->snapshots) {
    write_density_csv((path / ("snap_t" + time_tag(s.time()) + ".csv")).string(), to_density(s), s.time());
  }
}

nlohmann::json environment_json(int threads) {
  nlohmann::json env;
  env["compiler"] = __VERSION__;
  env["cxx_standard"] = static_cast<long>(__cplusplus);
  env["hardware_threads"] = std::thread::hardware_concurrency();
  env["workers"] = threads;
  return env;
}

}  // namespace

double l1_distance(const PiecewiseDensity& particle, const GridDensity& grid) {
  if (!(particle.domain() == grid.domain)) {
    throw Error(ErrorCode::DomainMismatch, "L1 distance between different tori");
  }
  std::vector<double> cuts;
  add_breakpoints(cuts, particle);
  add_edges(cuts, grid);
  return cut_l1(cuts, [&](double x) { return particle.value_at(x); },
                [&](double x) { return grid_value(grid, x); });
}

double l1_distance(const PiecewiseDensity& a, const PiecewiseDensity& b) {
  if (!(a.domain() == b.domain())) throw Error(ErrorCode::DomainMismatch, "L1 distance between different tori");
  const auto& d = a.domain();
  std::vector<double> cuts{d.base(), d.base() + d.length()};
  add_breakpoints(cuts, a);
  add_breakpoints(cuts, b);
  return cut_l1(cuts, [&](double x) { return a.value_at(x); }, [&](double x) { return b.value_at(x); });
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
  if (!(a.domain == b.domain)) throw Error(ErrorCode::DomainMismatch, "L1 distance between different tori");
  std::vector<double> cuts;
  add_edges(cuts, a);
  add_edges(cuts, b);
  return cut_l1(cuts, [&](double x) { return grid_value(a, x); }, [&](double x) { return grid_value(b, x); });
}

double window_l1_distance(const PiecewiseDensity& a, const PiecewiseDensity& b, double lo, double hi) {
  for (const auto* d : {&a, &b}) {
    const auto& dom = d->domain();
    if (lo < dom.base() || hi > dom.base() + dom.length()) {
      throw Error(ErrorCode::DomainMismatch, "window leaves a fundamental cell");
    }
  }
  std::vector<double> cuts{lo, hi};
  for (const auto* d : {&a, &b}) {
    for (double x : d->breakpoints()) {
      const double w = d->domain().wrap(x);
      if (w > lo && w < hi) cuts.push_back(w);
    }
  }
  return cut_l1(cuts, [&](double x) { return a.value_at(x); }, [&](double x) { return b.value_at(x); });
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  if (t.size() == 1) return f.front();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) sum += 0.5 * (f[i] + f[i + 1]) * (t[i + 1] - t[i]);
  return sum;
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::uniform: return "uniform";
    case InitKind::sine: return "sine";
    case InitKind::hat: return "hat";
    case InitKind::gaussian_window: return "gaussian_window";
    case InitKind::file: return "file";
  }
  return "unknown";
}

std::function<double(double)> make_profile(const InitSpec& init, double length) {
  switch (init.kind) {
    case InitKind::uniform: {
      const double level = param(init, "level", 1.0 / length);
      return [level](double) { return level; };
    }
    case InitKind::sine: {
      const double mean = param(init, "mean", 1.0 / length);
      const double amp = param(init, "amplitude", 0.5 / length);
      const double k = 2.0 * std::numbers::pi * param(init, "mode", 1.0) / length;
      return [mean, amp, k](double x) { return mean + amp * std::sin(k * x); };
    }
    case InitKind::hat: {
      const double c = param(init, "center", 0.0);
      const double w = param(init, "halfwidth", 2.0);
      const double h = param(init, "mass", 1.0) / w;
      if (!(w > 0.0)) throw Error(ErrorCode::BadParameter, "hat halfwidth must be positive");
      return [c, w, h](double x) { return h * std::max(0.0, 1.0 - std::fabs(x - c) / w); };
    }
    case InitKind::gaussian_window: {
      const double c = param(init, "center", 0.0);
      const double s = param(init, "sigma", 1.0);
      if (!(s > 0.0)) throw Error(ErrorCode::BadParameter, "gaussian sigma must be positive");
      const double a = param(init, "mass", 1.0) / (s * std::sqrt(2.0 * std::numbers::pi));
      return [c, s, a](double x) { return a * std::exp(-0.5 * (x - c) * (x - c) / (s * s)); };
    }
    case InitKind::file:
      break;
  }
  throw Error(ErrorCode::BadParameter, "file initial data has no closed form");
}

ParticleState make_initial_state(const InitSpec& init, const TorusDomain& domain, std::size_t n) {
  if (init.kind == InitKind::file) {
    const DensitySnapshot snap = read_density_csv(init.path);
    if (!(snap.density.domain() == domain)) {
      throw Error(ErrorCode::DomainMismatch, init.path + " is defined on a torus of another length");
    }
    return init_particles(snap.density, n);
  }
  return init_particles(make_profile(init, domain.length()), n, domain);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t StudyReport::failures() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return !c.ok; }));
}

nlohmann::json StudyReport::to_json() const {
  nlohmann::json j;
  j["study"] = kind;
  j["parameter"] = parameter_name;
  j["grid"] = grid;
  j["failures"] = failures();
  auto& cells_json = j["cells"];
  cells_json = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json cj;
    cj["label"] = c.label;
    cj[parameter_name] = c.parameter;
    cj["ok"] = c.ok;
    if (!c.ok) cj["failure"] = c.failure;
    for (const auto& [k, v] : c.metrics) {
      if (std::isfinite(v)) {
        cj["metrics"][k] = v;
      } else {
        cj["metrics"][k] = nullptr;
      }
    }
    cells_json.push_back(cj);
  }
  j["pair_differences"] = pair_differences;
  auto& v = j["verdicts"];
  v = nlohmann::json::array();
  for (const auto& verdict : verdicts) {
    v.push_back({{"criterion", verdict.criterion}, {"status", verdict.status}, {"detail", verdict.detail}});
  }
  j["environment"] = environment;
  return j;
}

std::string StudyReport::to_table() const {
  std::vector<std::string> columns;
  for (const auto& c : cells) {
    for (const auto& [k, v] : c.metrics) {
      if (k != parameter_name && std::find(columns.begin(), columns.end(), k) == columns.end()) {
        columns.push_back(k);
      }
    }
  }
  std::ostringstream os;
  os << "study " << kind << " (" << failures() << " failed cells)\n";
  os << std::left << std::setw(12) << parameter_name;
  for (const auto& col : columns) os << std::setw(std::max<int>(14, static_cast<int>(col.size()) + 2)) << col;
  os << "\n";
  for (const auto& c : cells) {
    os << std::setw(12) << number_text(c.parameter);
    if (!c.ok) {
      os << "FAILED: " << c.failure << "\n";
      continue;
    }
    for (const auto& col : columns) {
      auto it = c.metrics.find(col);
      char buf[32];
      if (it == c.metrics.end()) {
        std::snprintf(buf, sizeof buf, "-");
      } else {
        std::snprintf(buf, sizeof buf, "%.6g", it->second);
      }
      os << std::setw(std::max<int>(14, static_cast<int>(col.size()) + 2)) << buf;
    }
    os << "\n";
  }
  if (!pair_differences.empty()) {
    os << "consecutive differences:";
    for (double d : pair_differences) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.6g", d);
      os << buf;
    }
    os << "\n";
  }
  for (const auto& v : verdicts) os << "[" << v.status << "] " << v.criterion << ": " << v.detail << "\n";
  return os.str();
}

StudyReport convergence_in_N(const StudyConfig& base, const std::vector<std::size_t>& n_list) {
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 8) throw Error(ErrorCode::BadParameter, "convergence studies need N >= 8");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw Error(ErrorCode::BadParameter, "N list must increase");
  }
  StudyReport report;
  report.kind = "convergence_in_N";
  report.parameter_name = "N";
  report.environment = environment_json(base.threads);
  const TorusDomain domain(base.length);
  std::vector<double> records = base.scheme.record_times;
  if (records.empty()) records.push_back(base.scheme.t_end);

  // Oracle snapshots shared by every N.
  std::vector<GridDensity> oracle;
  if (base.oracle == OracleKind::exact_heat) {
    const FourierSeries modes = fourier_modes(make_profile(base.init, base.length), base.length);
    for (double t : records) oracle.push_back(exact_heat(modes, t, base.oracle_cells));
  } else if (base.oracle == OracleKind::finite_volume) {
    const GridDensity g0 = grid_from_profile(make_profile(base.init, base.length), base.oracle_cells, domain);
    oracle = fv_solve(g0, base.physics, base.scheme.t_end, records).snapshots;
  }

  report.cells.resize(n_list.size());
  parallel_for(n_list.size(), base.threads, [&](std::size_t i) {
    const std::size_t n = n_list[i];
    report.cells[i] = run_cell(base, domain, n, "N" + std::to_string(n), static_cast<double>(n));
  });
  for (std::size_t n : n_list) report.grid.push_back(static_cast<double>(n));

  for (auto& cell : report.cells) {
    if (!cell.ok || oracle.empty()) continue;
    const auto series = series_of(*cell.trajectory);
    std::vector<double> err;
    for (std::size_t i = 0; i < series.t.size(); ++i) err.push_back(l1_distance(series.densities[i], oracle[i]));
    cell.metrics["oracle_l1_final"] = err.back();
    cell.metrics["oracle_l1_spacetime"] = trapezoid(series.t, err);
  }
  for (std::size_t i = 0; i + 1 < report.cells.size(); ++i) {
    const auto& a = report.cells[i];
    const auto& b = report.cells[i + 1];
    if (!a.ok || !b.ok) {
      report.pair_differences.push_back(std::nan(""));
      continue;
    }
    const auto sa = series_of(*a.trajectory);
    const auto sb = series_of(*b.trajectory);
    std::vector<double> diff;
    for (std::size_t k = 0; k < sa.t.size(); ++k) diff.push_back(l1_distance(sa.densities[k], sb.densities[k]));
    report.pair_differences.push_back(trapezoid(sa.t, diff));
  }

  if (!base.out_dir.empty()) {
    const std::string dir = (fs::path(base.out_dir) / report.kind).string();
    for (const auto& cell : report.cells) write_cell_evidence(dir, cell);
    if (!oracle.empty()) {
      fs::create_directories(fs::path(dir) / "oracle");
      for (const auto& g : oracle) {
        write_grid_csv((fs::path(dir) / "oracle" / ("grid_t" + time_tag(g.t) + ".csv")).string(), g);
      }
    }
  }
  return report;
}

StudyReport torus_growth(const StudyConfig& base, const std::vector<double>& l_list, double n0) {
  for (std::size_t i = 0; i < l_list.size(); ++i) {
    if (!(l_list[i] > 0.0)) throw Error(ErrorCode::BadParameter, "torus lengths must be positive");
    if (i > 0 && l_list[i] <= l_list[i - 1]) throw Error(ErrorCode::BadParameter, "L list must increase");
  }
  if (base.init.kind == InitKind::file) {
    throw Error(ErrorCode::BadParameter, "torus growth needs a closed-form profile on the line");
  }
  StudyReport report;
  report.kind = "torus_growth";
  report.parameter_name = "L";
  report.environment = environment_json(base.threads);
  report.grid = l_list;

  // First moment on the largest torus as the declared finite-moment check.
  const auto profile = make_profile(base.init, l_list.empty() ? 1.0 : l_list.back());
  report.cells.resize(l_list.size());
  parallel_for(l_list.size(), base.threads, [&](std::size_t i) {
    const double L = l_list[i];
    const auto n = static_cast<std::size_t>(std::ceil(n0 * L - 1e-9));
    report.cells[i] = run_cell(base, TorusDomain(L), n, "L" + number_text(L), L);
  });
  for (std::size_t i = 0; i < l_list.size(); ++i) {
    const double L = l_list[i];
    auto moment = [&](double x) { return std::fabs(x) * profile(x); };
    report.cells[i].metrics["first_moment"] =
        quad::adaptive_simpson(moment, -0.5 * L, 0.5 * L, 1e-10, 40, 256);
  }

  const double half = l_list.empty() ? 0.0 : 0.5 * l_list.front();
  for (std::size_t i = 0; i + 1 < report.cells.size(); ++i) {
    const auto& a = report.cells[i];
    const auto& b = report.cells[i + 1];
    if (!a.ok || !b.ok) {
      report.pair_differences.push_back(std::nan(""));
      continue;
    }
    const auto sa = series_of(*a.trajectory);
    const auto sb = series_of(*b.trajectory);
    std::vector<double> diff;
    for (std::size_t k = 0; k < sa.t.size(); ++k) {
      diff.push_back(window_l1_distance(sa.densities[k], sb.densities[k], -half, half));
    }
    report.pair_differences.push_back(trapezoid(sa.t, diff));
  }
  if (!base.out_dir.empty()) {
    const std::string dir = (fs::path(base.out_dir) / report.kind).string();
    for (const auto& cell : report.cells) write_cell_evidence(dir, cell);
  }
  return report;
}

void write_report(const StudyReport& report, const std::string& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / (report.kind + ".json"));
    if (!out) throw Error(ErrorCode::IoError, "cannot write report in " + dir);
    out << report.to_json().dump(2) << "\n";
  }
  std::ofstream out(fs::path(dir) / (report.kind + ".txt"));
  if (!out) throw Error(ErrorCode::IoError, "cannot write report in " + dir);
  out << report.to_table();
}

}  // namespace aggdiff

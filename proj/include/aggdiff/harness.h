#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aggdiff/density.h"
#include "aggdiff/diagnostics.h"
#include "aggdiff/grid.h"
#include "aggdiff/reference.h"
#include "aggdiff/scheme.h"

namespace aggdiff {

/// Exact L1 distances between piecewise-constant functions on the same torus.
double l1_distance(const PiecewiseDensity& particle, const GridDensity& grid);
double l1_distance(const PiecewiseDensity& a, const PiecewiseDensity& b);
double l1_distance(const GridDensity& a, const GridDensity& b);
/// L1 distance on the line window [lo, hi), which must lie inside both
/// fundamental cells; the densities may live on tori of different length.
double window_l1_distance(const PiecewiseDensity& a, const PiecewiseDensity& b, double lo, double hi);

/// Trapezoid rule in time.
double trapezoid(const std::vector<double>& t, const std::vector<double>& f);

enum class InitKind { uniform, sine, hat, gaussian_window, file };

/// Initial profile. Parameters (all optional):
///   uniform          level (1/L)
///   sine             mean (1/L), amplitude (0.5/L), mode (1): mean + amplitude sin(2 pi mode x / L)
///   hat              center (0), halfwidth (2), mass (1): triangular bump
///   gaussian_window  center (0), sigma (1), mass (1): line Gaussian cut to the torus
///   file             path to a density snapshot CSV
struct InitSpec {
  InitKind kind = InitKind::uniform;
  std::map<std::string, double> params;
  std::string path;
};

std::string to_string(InitKind kind);
/// Closed-form profile on the line; throws BadParameter for `file`.
std::function<double(double)> make_profile(const InitSpec& init, double length);
/// Quantile initialization for any init kind.
ParticleState make_initial_state(const InitSpec& init, const TorusDomain& domain, std::size_t n);

/// Runs `count` tasks on at most `threads` workers; task i writes slot i only.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

enum class OracleKind { none, exact_heat, finite_volume };

struct StudyConfig {
  double length = 1.0;
  Physics physics;
  SchemeConfig scheme;  // t_end, record_times, step control
  InitSpec init;
  OracleKind oracle = OracleKind::none;
  std::size_t oracle_cells = 2048;
  bool energy_series = true;  // energy at every snapshot (costly for large N)
  int threads = 1;
  std::string out_dir;        // evidence CSVs when non-empty
};

/// Result of one particle run inside a study.
struct CellResult {
  std::string label;
  double parameter = 0.0;  // N or L
  bool ok = false;
  std::string failure;
  std::map<std::string, double> metrics;
  std::vector<DiagnosticsRecord> diagnostics;
  std::optional<Trajectory> trajectory;
};

struct Verdict {
  std::string criterion;
  std::string status;  // PASS, FAIL or SKIPPED
  std::string detail;
};

struct StudyReport {
  std::string kind;
  std::string parameter_name;  // "N" or "L"
  std::vector<double> grid;
  std::vector<CellResult> cells;
  /// Differences between consecutive cells (Cauchy or window differences).
  std::vector<double> pair_differences;
  std::vector<Verdict> verdicts;
  nlohmann::json environment;

  std::size_t failures() const;
  nlohmann::json to_json() const;
  std::string to_table() const;
};

/// Particle runs for every N with oracle errors (space-time and final time),
/// Cauchy differences between consecutive N and diagnostics summaries.
StudyReport convergence_in_N(const StudyConfig& base, const std::vector<std::size_t>& n_list);

/// Runs the restriction of `base.init` to T_L with N = ceil(n0 L) for each L
/// and compares consecutive runs on the window [-L_min/2, L_min/2).
StudyReport torus_growth(const StudyConfig& base, const std::vector<double>& l_list, double n0);

void write_report(const StudyReport& report, const std::string& dir);

}  // namespace aggdiff

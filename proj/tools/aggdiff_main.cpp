// aggdiff: particle runs, convergence studies, acceptance suite, physics checks.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aggdiff/acceptance.h"
#include "aggdiff/config.h"
#include "aggdiff/error.h"
#include "aggdiff/snapshot_io.h"
#include "aggdiff/validation.h"

namespace fs = std::filesystem;
using namespace aggdiff;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;
constexpr int kAcceptance = 3;

struct Flags {
  std::string config;
  std::string out;
  int threads = 1;
  bool quiet = false;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::UnknownKey:
    case ErrorCode::BadValue:
    case ErrorCode::BadParameter:
    case ErrorCode::IoError:
      return kUsage;
    default:
      return kNumerical;
  }
}

RunConfig load(const Flags& f) {
  RunConfig cfg = f.config.empty() ? parse_config_text("", "<defaults>") : parse_config(f.config);
  if (!f.out.empty()) cfg.output_dir = f.out;
  return cfg;
}

bool wants(const RunConfig& cfg, const std::string& format) {
  return std::find(cfg.output_formats.begin(), cfg.output_formats.end(), format) != cfg.output_formats.end();
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["domain.L"] = c.L;
  j["particles.N"] = c.N;
  j["time.T"] = c.T;
  j["time.dt_init"] = c.dt_init;
  j["time.dt_max"] = c.dt_max;
  j["time.record_count"] = c.record_count;
  j["time.safety"] = c.safety;
  j["time.gap_min_fraction"] = c.gap_min_fraction;
  j["kernel.kind"] = c.kernel_kind;
  j["kernel.beta"] = c.kernel_beta;
  j["mobility.kind"] = c.mobility_kind;
  j["mobility.sbar"] = c.mobility_sbar;
  j["diffusion.family"] = c.diffusion_family;
  j["diffusion.m"] = c.diffusion_m;
  j["diffusion.s_max"] = c.diffusion_s_max;
  j["init.kind"] = to_string(c.init.kind);
  for (const auto& [k, v] : c.init.params) j["init." + k] = v;
  j["init.path"] = c.init.path;
  j["output.dir"] = c.output_dir;
  j["output.formats"] = c.output_formats;
  return j;
}

std::string time_tag(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

int cmd_run(const Flags& f) {
  const RunConfig cfg = load(f);
  const Physics physics = make_physics(cfg);
  const SchemeConfig scheme = make_scheme(cfg);
  const TorusDomain domain(cfg.L);
  const ParticleState state0 = make_initial_state(cfg.init, domain, cfg.N);

  fs::create_directories(cfg.output_dir);
  nlohmann::json manifest;
  manifest["config"] = config_json(cfg);
  manifest["physics"] = {{"kernel", physics.kernel.label},
                         {"mobility", physics.mobility.label},
                         {"diffusion", physics.diffusion.label()}};
  const auto start = std::chrono::steady_clock::now();
  int status = kOk;
  try {
    const Trajectory traj = integrate(state0, physics, scheme);
    const auto records = diagnose_trajectory(traj, physics);
    if (wants(cfg, "csv")) {
      for (const auto& s : traj.snapshots) {
        write_density_csv((fs::path(cfg.output_dir) / ("snap_t" + time_tag(s.time()) + ".csv")).string(),
                          to_density(s), s.time());
      }
      write_diagnostics_csv((fs::path(cfg.output_dir) / "diagnostics.csv").string(), records);
    }
    manifest["accepted_steps"] = traj.accepted;
    manifest["rejected_steps"] = traj.rejected;
    manifest["min_gap_fraction"] = traj.min_gap_fraction;
    manifest["failure"] = nullptr;
    if (!f.quiet) {
      std::cout << "run finished: " << traj.accepted << " accepted, " << traj.rejected << " rejected steps, "
                << traj.snapshots.size() << " snapshots in " << cfg.output_dir << "\n";
    }
  } catch (const Error& e) {
    manifest["failure"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (e.time()) manifest["failure"]["time"] = *e.time();
    std::cerr << "error: " << e.what() << "\n";
    status = exit_code_for(e.code());
  }
  manifest["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (wants(cfg, "json")) {
    std::ofstream out(fs::path(cfg.output_dir) / "manifest.json");
    out << manifest.dump(2) << "\n";
  }
  return status;
}

int finish_study(const StudyReport& report, const RunConfig& cfg, const Flags& f) {
  write_report(report, cfg.output_dir);
  if (!f.quiet) std::cout << report.to_table();
  if (report.failures() > 0) {
    std::cerr << report.failures() << " run(s) failed, see " << report.kind << ".txt\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_converge(const Flags& f) {
  const RunConfig cfg = load(f);
  return finish_study(convergence_in_N(make_study(cfg, f.threads), cfg.study_N), cfg, f);
}

int cmd_grow(const Flags& f) {
  const RunConfig cfg = load(f);
  StudyConfig study = make_study(cfg, f.threads);
  study.energy_series = false;
  return finish_study(torus_growth(study, cfg.study_L, cfg.study_n0), cfg, f);
}

int cmd_accept(const Flags& f) {
  AcceptanceOptions o;
  o.out_dir = f.out.empty() ? "acceptance_out" : f.out;
  o.threads = f.threads;
  if (!f.quiet) o.progress = &std::cout;
  const StudyReport report = acceptance_suite(o);
  const bool passed = acceptance_passed(report);
  if (!f.quiet) std::cout << (passed ? "acceptance: PASS" : "acceptance: FAIL") << " (verdicts in " << o.out_dir << ")\n";
  return passed ? kOk : kAcceptance;
}

int cmd_validate(const Flags& f) {
  const RunConfig cfg = load(f);
  const Physics p = make_physics(cfg);
  const ValidationReport reports[] = {validate_kernel(p.kernel), validate_mobility(p.mobility),
                                      validate_diffusion(p.diffusion)};
  const auto bound = mobility_product_bound_check(p.mobility, p.diffusion, cfg.diffusion_s_max);
  std::string text;
  bool ok = true;
  for (const auto& r : reports) {
    text += r.to_text();
    ok = ok && r.all_passed();
  }
  text += "mobility product bound: " + bound.message + "\n";
  ok = ok && bound.holds;
  if (!f.out.empty()) {
    fs::create_directories(f.out);
    std::ofstream(fs::path(f.out) / "validate_physics.txt") << text;
  }
  if (!f.quiet) std::cout << text;
  return ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic particle scheme for 1D aggregation-diffusion with nonlinear mobility"};
  app.require_subcommand(1);
  Flags flags;
  auto add_flags = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", flags.config, "configuration file (dotted.key = value)");
    if (config_required) opt->required();
    sub->add_option("--out", flags.out, "output directory (overrides output.dir)");
    sub->add_option("--threads", flags.threads, "worker cap for independent runs")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", flags.quiet, "no progress output");
  };
  auto* run = app.add_subcommand("run", "single trajectory with snapshots, diagnostics and manifest");
  auto* converge = app.add_subcommand("converge", "convergence in N over study.N_list");
  auto* grow = app.add_subcommand("grow", "torus growth over study.L_list");
  auto* accept = app.add_subcommand("accept", "run every acceptance criterion");
  auto* validate = app.add_subcommand("validate-physics", "kernel, mobility and diffusion checks");
  add_flags(run, true);
  add_flags(converge, false);
  add_flags(grow, false);
  add_flags(accept, false);
  add_flags(validate, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(flags);
    if (*converge) return cmd_converge(flags);
    if (*grow) return cmd_grow(flags);
    if (*accept) return cmd_accept(flags);
    if (*validate) return cmd_validate(flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

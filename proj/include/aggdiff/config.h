#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aggdiff/harness.h"
#include "aggdiff/scheme.h"

namespace aggdiff {

/// Plain-text run configuration: one `dotted.key = value` per line, `#`
/// starts a comment. Every key and its default is listed in config_defaults().
struct RunConfig {
  double L = 1.0;
  std::size_t N = 200;
  double T = 0.05;
  double dt_init = 1e-6;
  double dt_max = 1e-3;
  int record_count = 11;
  double safety = 0.4;
  double gap_min_fraction = 1e-8;

  std::string kernel_kind = "zero";
  double kernel_beta = 2.0;
  std::string mobility_kind = "constant";
  double mobility_sbar = 1.0;
  std::string diffusion_family = "log";
  double diffusion_m = 2.0;
  double diffusion_s_max = 16.0;

  InitSpec init;

  std::string output_dir = "out";
  std::vector<std::string> output_formats{"csv", "json"};

  std::vector<std::size_t> study_N{50, 100, 200, 400};
  std::vector<double> study_L{8.0, 16.0, 32.0};
  double study_n0 = 50.0;
  std::string study_oracle = "none";
  std::size_t study_oracle_M = 2048;
};

struct ConfigKey {
  const char* key;
  const char* default_value;
  const char* description;
};

/// The documented defaults table.
const std::vector<ConfigKey>& config_defaults();

/// Throws ParseError, UnknownKey or BadValue naming `source:line`.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<string>");

Physics make_physics(const RunConfig& config);
SchemeConfig make_scheme(const RunConfig& config);
StudyConfig make_study(const RunConfig& config, int threads);

/// Markdown table of config_defaults().
std::string config_reference();

}  // namespace aggdiff

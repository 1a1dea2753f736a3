#include "aggdiff/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "aggdiff/error.h"

namespace aggdiff {

namespace {

const char* const kProfileDefault = "(per profile)";

struct Context {
  std::string where;  // "source:line"
  const std::string& key;
};

[[noreturn]] void bad_value(const Context& c, const std::string& what) {
  throw Error(ErrorCode::BadValue, c.where + ": " + c.key + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double number(const Context& c, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad_value(c, "'" + v + "' is not a number");
  }
  if (used != v.size() || !std::isfinite(x)) bad_value(c, "'" + v + "' is not a finite number");
  return x;
}

double positive(const Context& c, const std::string& v) {
  const double x = number(c, v);
  if (!(x > 0.0)) bad_value(c, "must be positive");
  return x;
}

std::size_t count(const Context& c, const std::string& v, std::size_t minimum) {
  const double x = number(c, v);
  if (x != std::floor(x) || x < static_cast<double>(minimum)) {
    bad_value(c, "must be an integer >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(x);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string choice(const Context& c, const std::string& v, std::initializer_list<const char*> valid) {
  for (const char* option : valid) {
    if (v == option) return v;
  }
  std::string list;
  for (const char* option : valid) list += (list.empty() ? "" : ", ") + std::string(option);
  throw Error(ErrorCode::UnknownKey, c.where + ": " + c.key + ": unknown kind '" + v + "' (valid: " + list + ")");
}

using Setter = std::function<void(RunConfig&, const Context&, const std::string&)>;

void set_init_param(RunConfig& r, const std::string& name, const Context& c, const std::string& v) {
  if (v == kProfileDefault) return;
  r.init.params[name] = number(c, v);
}

const std::vector<ConfigKey>& table() {
  static const std::vector<ConfigKey> keys{
      {"domain.L", "1", "torus length L"},
      {"particles.N", "200", "number of particles (>= 2)"},
      {"time.T", "0.05", "final time"},
      {"time.dt_init", "1e-6", "initial time step"},
      {"time.dt_max", "1e-3", "largest time step"},
      {"time.record_count", "11", "equally spaced snapshot times on [0, T], endpoints included"},
      {"time.safety", "0.4", "factor of the diffusive step cap safety * min_gap^2 / max phi_v'"},
      {"time.gap_min_fraction", "1e-8", "steps leaving a gap <= fraction * L are rejected"},
      {"kernel.kind", "zero", "zero, two_yukawa or gaussian_bump"},
      {"kernel.beta", "2", "kernel parameter (two_yukawa needs > 1)"},
      {"mobility.kind", "constant", "constant, linear_cutoff or rational"},
      {"mobility.sbar", "1", "cutoff density of linear_cutoff"},
      {"diffusion.family", "log", "log (W = s log s) or power (W = s^m / (m - 1))"},
      {"diffusion.m", "2", "exponent of the power family (> 1)"},
      {"diffusion.s_max", "16", "upper end of the phi_v / W_v tables when no closed form exists"},
      {"init.kind", "uniform", "uniform, sine, hat, gaussian_window or file"},
      {"init.level", kProfileDefault, "uniform: density value (default 1/L)"},
      {"init.mean", kProfileDefault, "sine: mean value (default 1/L)"},
      {"init.amplitude", kProfileDefault, "sine: amplitude (default 0.5/L)"},
      {"init.mode", kProfileDefault, "sine: wave number (default 1)"},
      {"init.center", kProfileDefault, "hat, gaussian_window: centre (default 0)"},
      {"init.halfwidth", kProfileDefault, "hat: half width (default 2)"},
      {"init.sigma", kProfileDefault, "gaussian_window: standard deviation (default 1)"},
      {"init.mass", kProfileDefault, "hat, gaussian_window: mass on the line (default 1)"},
      {"init.path", "", "file: density snapshot CSV"},
      {"output.dir", "out", "output directory"},
      {"output.formats", "csv,json", "any of csv, json"},
      {"study.N_list", "50,100,200,400", "converge: particle counts (ascending, each >= 8)"},
      {"study.L_list", "8,16,32", "grow: torus lengths (ascending)"},
      {"study.n0", "50", "grow: particles per unit length"},
      {"study.oracle", "none", "converge: none, exact_heat or finite_volume"},
      {"study.oracle_M", "2048", "converge: oracle cells"},
  };
  return keys;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> map{
      {"domain.L", [](RunConfig& r, const Context& c, const std::string& v) { r.L = positive(c, v); }},
      {"particles.N", [](RunConfig& r, const Context& c, const std::string& v) { r.N = count(c, v, 2); }},
      {"time.T", [](RunConfig& r, const Context& c, const std::string& v) { r.T = positive(c, v); }},
      {"time.dt_init", [](RunConfig& r, const Context& c, const std::string& v) { r.dt_init = positive(c, v); }},
      {"time.dt_max", [](RunConfig& r, const Context& c, const std::string& v) { r.dt_max = positive(c, v); }},
      {"time.record_count",
       [](RunConfig& r, const Context& c, const std::string& v) { r.record_count = static_cast<int>(count(c, v, 2)); }},
      {"time.safety",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.safety = positive(c, v);
         if (r.safety > 1.0) bad_value(c, "must lie in (0, 1]");
       }},
      {"time.gap_min_fraction",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.gap_min_fraction = positive(c, v);
         if (r.gap_min_fraction >= 1.0) bad_value(c, "must lie in (0, 1)");
       }},
      {"kernel.kind",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.kernel_kind = choice(c, v, {"zero", "two_yukawa", "gaussian_bump"});
       }},
      {"kernel.beta", [](RunConfig& r, const Context& c, const std::string& v) { r.kernel_beta = positive(c, v); }},
      {"mobility.kind",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.mobility_kind = choice(c, v, {"constant", "linear_cutoff", "rational"});
       }},
      {"mobility.sbar", [](RunConfig& r, const Context& c, const std::string& v) { r.mobility_sbar = positive(c, v); }},
      {"diffusion.family",
       [](RunConfig& r, const Context& c, const std::string& v) { r.diffusion_family = choice(c, v, {"log", "power"}); }},
      {"diffusion.m",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.diffusion_m = number(c, v);
         if (!(r.diffusion_m > 1.0)) bad_value(c, "the power family needs m > 1");
       }},
      {"diffusion.s_max", [](RunConfig& r, const Context& c, const std::string& v) { r.diffusion_s_max = positive(c, v); }},
      {"init.kind",
       [](RunConfig& r, const Context& c, const std::string& v) {
         const std::string k = choice(c, v, {"uniform", "sine", "hat", "gaussian_window", "file"});
         r.init.kind = k == "uniform" ? InitKind::uniform
                       : k == "sine"  ? InitKind::sine
                       : k == "hat"   ? InitKind::hat
                       : k == "file"  ? InitKind::file
                                      : InitKind::gaussian_window;
       }},
      {"init.level", [](RunConfig& r, const Context& c, const std::string& v) { set_init_param(r, "level", c, v); }},
      {"init.mean", [](RunConfig& r, const Context& c, const std::string& v) { set_init_param(r, "mean", c, v); }},
      {"init.amplitude", [](RunConfig& r, const Context& c, const std::string& v) { set_init_param(r, "amplitude", c, v); }},
      {"init.mode", [](RunConfig& r, const Context& c, const std::string& v) { set_init_param(r, "mode", c, v); }},
      {"init.center", [](RunConfig& r, const Context& c, const std::string& v) { set_init_param(r, "center", c, v); }},
      {"init.halfwidth", [](RunConfig& r, const Context& c, const std::string& v) { set_init_param(r, "halfwidth", c, v); }},
      {"init.sigma", [](RunConfig& r, const Context& c, const std::string& v) { set_init_param(r, "sigma", c, v); }},
      {"init.mass", [](RunConfig& r, const Context& c, const std::string& v) { set_init_param(r, "mass", c, v); }},
      {"init.path", [](RunConfig& r, const Context&, const std::string& v) { r.init.path = v; }},
      {"output.dir",
       [](RunConfig& r, const Context& c, const std::string& v) {
         if (v.empty()) bad_value(c, "must not be empty");
         r.output_dir = v;
       }},
      {"output.formats",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.output_formats.clear();
         for (const auto& f : split_list(v)) r.output_formats.push_back(choice(c, f, {"csv", "json"}));
         if (r.output_formats.empty()) bad_value(c, "needs at least one format");
       }},
      {"study.N_list",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.study_N.clear();
         for (const auto& item : split_list(v)) {
           const std::size_t n = count(c, item, 8);
           if (!r.study_N.empty() && n <= r.study_N.back()) bad_value(c, "must be ascending");
           r.study_N.push_back(n);
         }
         if (r.study_N.empty()) bad_value(c, "needs at least one entry");
       }},
      {"study.L_list",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.study_L.clear();
         for (const auto& item : split_list(v)) {
           const double l = positive(c, item);
           if (!r.study_L.empty() && l <= r.study_L.back()) bad_value(c, "must be ascending");
           r.study_L.push_back(l);
         }
         if (r.study_L.empty()) bad_value(c, "needs at least one entry");
       }},
      {"study.n0", [](RunConfig& r, const Context& c, const std::string& v) { r.study_n0 = positive(c, v); }},
      {"study.oracle",
       [](RunConfig& r, const Context& c, const std::string& v) {
         r.study_oracle = choice(c, v, {"none", "exact_heat", "finite_volume"});
       }},
      {"study.oracle_M",
       [](RunConfig& r, const Context& c, const std::string& v) { r.study_oracle_M = count(c, v, 2); }},
  };
  return map;
}

}  // namespace

const std::vector<ConfigKey>& config_defaults() { return table(); }

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  RunConfig cfg;
  for (const auto& entry : table()) {
    const std::string key = entry.key;
    setters().at(key)(cfg, Context{source + ":default", key}, entry.default_value);
  }

  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    const std::string where = source + ":" + std::to_string(number_of_line);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, where + ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::ParseError, where + ": missing key before '='");
    auto it = setters().find(key);
    if (it == setters().end()) throw Error(ErrorCode::UnknownKey, where + ": unknown key '" + key + "'");
    if (seen.count(key)) {
      throw Error(ErrorCode::ParseError, where + ": duplicate key '" + key + "' (first set on line " +
                                             std::to_string(seen[key]) + ")");
    }
    seen[key] = number_of_line;
    it->second(cfg, Context{where, key}, value);
  }

  auto line_of = [&](const std::string& key) {
    auto found = seen.find(key);
    return found == seen.end() ? source + ":default" : source + ":" + std::to_string(found->second);
  };
  auto cross = [&](const std::string& key, const std::string& what) {
    throw Error(ErrorCode::BadValue, line_of(key) + ": " + key + ": " + what);
  };
  if (cfg.dt_init > cfg.dt_max) cross(seen.count("time.dt_init") ? "time.dt_init" : "time.dt_max", "dt_init must not exceed dt_max");
  if (cfg.kernel_kind == "two_yukawa" && !(cfg.kernel_beta > 1.0)) cross("kernel.beta", "two_yukawa needs beta > 1");
  if (cfg.init.kind == InitKind::file && cfg.init.path.empty()) cross("init.kind", "file initial data needs init.path");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

Physics make_physics(const RunConfig& c) {
  Physics p;
  if (c.kernel_kind == "two_yukawa") {
    p.kernel = two_yukawa(c.kernel_beta);
  } else if (c.kernel_kind == "gaussian_bump") {
    p.kernel = gaussian_bump(c.kernel_beta);
  } else {
    p.kernel = zero_kernel();
  }
  if (c.mobility_kind == "linear_cutoff") {
    p.mobility = linear_cutoff_mobility(c.mobility_sbar);
  } else if (c.mobility_kind == "rational") {
    p.mobility = rational_mobility();
  } else {
    p.mobility = constant_mobility();
  }
  const auto family = c.diffusion_family == "power" ? DiffusionFamily::power : DiffusionFamily::log_entropy;
  p.diffusion = make_diffusion(family, c.diffusion_m, p.mobility, c.diffusion_s_max);
  return p;
}

SchemeConfig make_scheme(const RunConfig& c) {
  SchemeConfig s;
  s.dt_init = c.dt_init;
  s.dt_max = c.dt_max;
  s.safety = c.safety;
  s.gap_min_fraction = c.gap_min_fraction;
  s.t_end = c.T;
  s.record_times = uniform_record_times(c.T, c.record_count);
  return s;
}

StudyConfig make_study(const RunConfig& c, int threads) {
  StudyConfig s;
  s.length = c.L;
  s.physics = make_physics(c);
  s.scheme = make_scheme(c);
  s.init = c.init;
  s.oracle = c.study_oracle == "exact_heat"      ? OracleKind::exact_heat
             : c.study_oracle == "finite_volume" ? OracleKind::finite_volume
                                                 : OracleKind::none;
  s.oracle_cells = c.study_oracle_M;
  s.threads = threads;
  s.out_dir = c.output_dir;
  return s;
}

std::string config_reference() {
  std::ostringstream os;
  os << "| key | default | meaning |\n|---|---|---|\n";
  for (const auto& k : table()) {
    os << "| `" << k.key << "` | " << (*k.default_value ? k.default_value : "(empty)") << " | " << k.description
       << " |\n";
  }
  return os.str();
}

}  // namespace aggdiff

#include "aggdiff/snapshot_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "aggdiff/error.h"

namespace aggdiff {

double GridDensity::mass() const noexcept {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * dx();
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return in;
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line) + ": " + what);
}

double to_number(const std::string& text, const std::string& path, int line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    parse_fail(path, line, "not a number: '" + text + "'");
  }
  if (used != text.size()) parse_fail(path, line, "trailing characters in '" + text + "'");
  return value;
}

// Parses `# k1=v1 k2=v2 ...`.
std::map<std::string, double> parse_comment(const std::string& text, const std::string& path,
                                            int line) {
  if (text.empty() || text[0] != '#') parse_fail(path, line, "expected '# key=value ...' line");
  std::map<std::string, double> out;
  std::istringstream is(text.substr(1));
  std::string token;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) parse_fail(path, line, "expected key=value, got '" + token + "'");
    out[token.substr(0, eq)] = to_number(token.substr(eq + 1), path, line);
  }
  return out;
}

double require(const std::map<std::string, double>& fields, const std::string& key,
               const std::string& path) {
  auto it = fields.find(key);
  if (it == fields.end()) parse_fail(path, 1, "missing '" + key + "=' in comment line");
  return it->second;
}

struct Rows {
  std::vector<double> first, second;
};

Rows read_rows(std::ifstream& in, const std::string& path, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || line != header) parse_fail(path, 2, "expected header '" + header + "'");
  Rows rows;
  int number = 2;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) parse_fail(path, number, "expected two comma-separated fields");
    rows.first.push_back(to_number(line.substr(0, comma), path, number));
    rows.second.push_back(to_number(line.substr(comma + 1), path, number));
  }
  return rows;
}

}  // namespace

void write_density_csv(const std::string& path, const PiecewiseDensity& density, double t) {
  const auto& domain = density.domain();
  const std::size_t n = density.size();
  std::vector<double> wrapped(n);
  for (std::size_t k = 0; k < n; ++k) wrapped[k] = domain.wrap(density.breakpoints()[k]);
  const std::size_t start =
      static_cast<std::size_t>(std::min_element(wrapped.begin(), wrapped.end()) - wrapped.begin());

  auto out = open_out(path);
  out << "# L=" << format_double(domain.length()) << " mass=" << format_double(density.mass())
      << " t=" << format_double(t) << "\n";
  out << "breakpoint,value\n";
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (start + i) % n;
    out << format_double(wrapped[k]) << "," << format_double(density.values()[k]) << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

DensitySnapshot read_density_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  const auto fields = parse_comment(line, path, 1);
  const double L = require(fields, "L", path);
  const double t = require(fields, "t", path);
  if (!(L > 0.0)) parse_fail(path, 1, "L must be positive");
  Rows rows = read_rows(in, path, "breakpoint,value");
  if (rows.first.empty()) parse_fail(path, 3, "no density cells");
  try {
    return {PiecewiseDensity(TorusDomain(L), std::move(rows.first), std::move(rows.second)), t};
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_grid_csv(const std::string& path, const GridDensity& grid) {
  auto out = open_out(path);
  out << "# M=" << grid.size() << " L=" << format_double(grid.domain.length())
      << " t=" << format_double(grid.t) << "\n";
  out << "x_center,value\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid.x_center(i)) << "," << format_double(grid.values[i]) << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

GridDensity read_grid_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  const auto fields = parse_comment(line, path, 1);
  const double M = require(fields, "M", path);
  const double L = require(fields, "L", path);
  if (!(L > 0.0)) parse_fail(path, 1, "L must be positive");
  Rows rows = read_rows(in, path, "x_center,value");
  if (static_cast<double>(rows.second.size()) != M) {
    parse_fail(path, 1, "M does not match the number of rows");
  }
  GridDensity grid;
  grid.domain = TorusDomain(L);
  grid.values = std::move(rows.second);
  grid.t = require(fields, "t", path);
  return grid;
}

}  // namespace aggdiff

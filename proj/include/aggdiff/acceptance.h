#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "aggdiff/harness.h"

namespace aggdiff {

struct AcceptanceOptions {
  std::string out_dir;  // evidence and verdict table; nothing is written when empty
  int threads = 1;
  std::vector<std::size_t> heat_N{100, 200, 400};
  std::vector<std::size_t> porous_N{100, 200, 400};
  std::vector<std::size_t> full_N{50, 100, 200, 400};
  std::vector<double> growth_L{8.0, 16.0, 32.0};
  double growth_T = 0.2;
  std::ostream* progress = nullptr;  // one line per verdict as soon as it is decided
};

/// Runs every acceptance criterion. Failures are verdicts, never exceptions.
StudyReport acceptance_suite(const AcceptanceOptions& options);
StudyReport acceptance_suite(const std::string& out_dir);

/// Criteria whose failure has been analysed and is documented as a property
/// of the model rather than a defect. They still report FAIL.
bool is_known_failure(const std::string& criterion);

/// No FAIL verdict other than the documented known failures.
bool acceptance_passed(const StudyReport& report);

/// "STATUS  criterion  detail"
std::string verdict_line(const Verdict& verdict);

}  // namespace aggdiff

// Acceptance binary: one verdict line per criterion, nonzero exit on any
// failure that is not a documented known limitation.

#include <iostream>

#include "aggdiff/acceptance.h"

int main(int argc, char** argv) {
  aggdiff::AcceptanceOptions options;
  options.out_dir = argc > 1 ? argv[1] : "acceptance_out";
  options.progress = &std::cout;
  const auto report = aggdiff::acceptance_suite(options);
  const bool passed = aggdiff::acceptance_passed(report);
  std::cout << "\nsummary: " << report.verdicts.size() << " verdicts, overall " << (passed ? "PASS" : "FAIL") << "\n";
  for (const auto& v : report.verdicts) {
    if (v.status == "FAIL" && aggdiff::is_known_failure(v.criterion)) {
      std::cout << "known limitation (documented in README): " << v.criterion << "\n";
    }
  }
  return passed ? 0 : 1;
}

#pragma once

#include <string>
#include <vector>

#include "aggdiff/diffusion.h"
#include "aggdiff/kernel.h"
#include "aggdiff/mobility.h"

namespace aggdiff {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::string subject;
  std::vector<Check> checks;

  bool all_passed() const;
  const Check* find(const std::string& name) const;
  std::string to_text() const;
};

/// Audits evenness, continuity, the declared sup norms of K, K', K'' and the
/// L1 norm of K' on [-range, range].
ValidationReport validate_kernel(const KernelSpec& spec, int n_samples = 2001,
                                 double range = 10.0);

/// Nonnegativity, monotonicity, sup norm at 0, Lipschitz bound and the
/// min(v(a), v(b)) = v(max(a, b)) identity on [0, s_max].
ValidationReport validate_mobility(const MobilitySpec& spec, int n_samples = 1000,
                                   double s_max = 16.0);

/// phi_v(0) = 0, monotonicity, phi_v = s W_v' - W_v, the v = 1 reductions and,
/// where a closed form exists, agreement with the quadrature oracle.
ValidationReport validate_diffusion(const DiffusionSpec& spec, int n_samples = 1000);

struct MobilityBoundReport {
  bool bounded_branch = false;  // phi_v saturates on [0, s_max]
  double sup_phi_v = 0.0;
  double sup_s_v = 0.0;         // sampled sup of s v(s)
  double bound = 0.0;           // sup phi_v + ||v||_inf
  bool holds = false;           // sup_s_v <= bound
  std::string message;
};

MobilityBoundReport mobility_product_bound_check(const MobilitySpec& mobility,
                                                 const DiffusionSpec& diffusion, double s_max,
                                                 int n_samples = 4001);

}  // namespace aggdiff

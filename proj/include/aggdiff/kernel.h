#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace aggdiff {

enum class KernelKind { zero, constant, two_yukawa, gaussian_bump, custom };

/// One term a * exp(-rate * z) of K'(z) for z > 0.
struct ExpTerm {
  double amplitude;
  double rate;
};

/// Even interaction kernel K with derivative K' (odd; K'(0) := 0) and the
/// norms entering the well-posedness constants.
struct KernelSpec {
  KernelKind kind = KernelKind::zero;
  double beta = 0.0;   // two_yukawa / gaussian_bump parameter
  double kappa = 0.0;  // constant kernel value
  std::function<double(double)> custom_K;
  std::function<double(double)> custom_Kprime;

  double norm_K_inf = 0.0;
  double norm_Kprime_inf = 0.0;
  double norm_Ksecond_inf = 0.0;
  double norm_Kprime_L1 = 0.0;
  std::string label = "zero";

  /// Non-empty when K'(z) = sum a_i exp(-rate_i z) for z > 0, which enables
  /// the linear-time interaction sweep.
  std::vector<ExpTerm> exp_terms;

  bool is_zero() const noexcept { return kind == KernelKind::zero || kind == KernelKind::constant; }

  double K(double z) const {
    switch (kind) {
      case KernelKind::zero: return 0.0;
      case KernelKind::constant: return kappa;
      case KernelKind::two_yukawa: {
        const double a = std::fabs(z);
        return -beta * beta * std::exp(-beta * a) + std::exp(-a);
      }
      case KernelKind::gaussian_bump: return -std::exp(-beta * z * z);
      case KernelKind::custom: return custom_K(z);
    }
    return 0.0;
  }

  double Kprime(double z) const {
    if (z == 0.0) return 0.0;
    switch (kind) {
      case KernelKind::zero:
      case KernelKind::constant: return 0.0;
      case KernelKind::two_yukawa: {
        const double a = std::fabs(z);
        const double mag = beta * beta * beta * std::exp(-beta * a) - std::exp(-a);
        return z > 0.0 ? mag : -mag;
      }
      case KernelKind::gaussian_bump: return 2.0 * beta * z * std::exp(-beta * z * z);
      case KernelKind::custom: return custom_Kprime(z);
    }
    return 0.0;
  }
};

KernelSpec zero_kernel();
KernelSpec constant_kernel(double kappa);

/// K(z) = -beta^2 exp(-beta |z|) + exp(-|z|): short-range attraction,
/// long-range repulsion. Throws BadParameter unless beta > 1.
KernelSpec two_yukawa(double beta, double range = 0.0);

/// K(z) = -exp(-beta z^2), purely attractive.
KernelSpec gaussian_bump(double beta);

/// User kernel; the declared norms are audited by validate_kernel.
KernelSpec custom_kernel(std::string label, std::function<double(double)> K,
                         std::function<double(double)> Kprime, double norm_K_inf,
                         double norm_Kprime_inf, double norm_Ksecond_inf, double norm_Kprime_L1);

}  // namespace aggdiff

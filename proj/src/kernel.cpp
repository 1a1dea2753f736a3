#include "aggdiff/kernel.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aggdiff/error.h"
#include "aggdiff/quadrature.h"

namespace aggdiff {

namespace {

constexpr int kNormSamples = 100000;

std::string format_label(const char* name, double parameter) {
  std::ostringstream os;
  os << name << "(" << parameter << ")";
  return os.str();
}

}  // namespace

KernelSpec zero_kernel() { return KernelSpec{}; }

KernelSpec constant_kernel(double kappa) {
  KernelSpec spec;
  spec.kind = KernelKind::constant;
  spec.kappa = kappa;
  spec.norm_K_inf = std::fabs(kappa);
  spec.label = format_label("constant", kappa);
  return spec;
}

KernelSpec two_yukawa(double beta, double range) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::BadParameter, "two-Yukawa kernel needs beta > 1");
  }
  KernelSpec spec;
  spec.kind = KernelKind::two_yukawa;
  spec.beta = beta;
  spec.label = format_label("two_yukawa", beta);
  spec.exp_terms = {{beta * beta * beta, beta}, {-1.0, 1.0}};

  if (!(range > 0.0)) range = 20.0 / beta;
  auto second = [beta](double z) {
    const double a = std::fabs(z);
    return -beta * beta * beta * beta * std::exp(-beta * a) + std::exp(-a);
  };
  double k_max = std::fabs(spec.K(0.0));
  double kp_max = beta * beta * beta - 1.0;          // one-sided limit at the origin
  double kpp_max = beta * beta * beta * beta - 1.0;  // likewise for K''
  for (int i = 0; i <= kNormSamples; ++i) {
    const double z = -range + 2.0 * range * i / kNormSamples;
    k_max = std::max(k_max, std::fabs(spec.K(z)));
    kp_max = std::max(kp_max, std::fabs(spec.Kprime(z)));
    if (z != 0.0) kpp_max = std::max(kpp_max, std::fabs(second(z)));
  }
  spec.norm_K_inf = k_max;
  spec.norm_Kprime_inf = kp_max;
  spec.norm_Ksecond_inf = kpp_max;
  const double tail = std::max(range, 40.0);
  // One-sided form on z >= 0 (no jump at the origin), split where K' changes sign.
  auto abs_kp = [beta](double z) {
    return std::fabs(beta * beta * beta * std::exp(-beta * z) - std::exp(-z));
  };
  const double root = 3.0 * std::log(beta) / (beta - 1.0);
  spec.norm_Kprime_L1 = 2.0 * (quad::adaptive_simpson(abs_kp, 0.0, root, 1e-13, 40, 16) +
                               quad::adaptive_simpson(abs_kp, root, tail, 1e-13, 40, 64));
  return spec;
}

KernelSpec gaussian_bump(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::BadParameter, "gaussian bump kernel needs beta > 0");
  }
  KernelSpec spec;
  spec.kind = KernelKind::gaussian_bump;
  spec.beta = beta;
  spec.label = format_label("gaussian_bump", beta);
  spec.norm_K_inf = 1.0;
  spec.norm_Kprime_inf = std::sqrt(2.0 * beta) * std::exp(-0.5);
  spec.norm_Ksecond_inf = 2.0 * beta;
  spec.norm_Kprime_L1 = 2.0;
  return spec;
}

KernelSpec custom_kernel(std::string label, std::function<double(double)> K,
                         std::function<double(double)> Kprime, double norm_K_inf,
                         double norm_Kprime_inf, double norm_Ksecond_inf,
                         double norm_Kprime_L1) {
  if (!K || !Kprime) throw Error(ErrorCode::BadParameter, "custom kernel needs K and K'");
  KernelSpec spec;
  spec.kind = KernelKind::custom;
  spec.custom_K = std::move(K);
  spec.custom_Kprime = std::move(Kprime);
  spec.norm_K_inf = norm_K_inf;
  spec.norm_Kprime_inf = norm_Kprime_inf;
  spec.norm_Ksecond_inf = norm_Ksecond_inf;
  spec.norm_Kprime_L1 = norm_Kprime_L1;
  spec.label = std::move(label);
  return spec;
}

}  // namespace aggdiff

#include "aggdiff/validation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "aggdiff/quadrature.h"

namespace aggdiff {

namespace {

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

void add(ValidationReport& r, std::string name, bool passed, std::string detail) {
  r.checks.push_back({std::move(name), passed, std::move(detail)});
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << subject << "\n";
  for (const auto& c : checks) {
    os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  return os.str();
}

ValidationReport validate_kernel(const KernelSpec& spec, int n_samples, double range) {
  ValidationReport r;
  r.subject = "kernel " + spec.label;
  n_samples = std::max(n_samples, 100);

  double worst_even = 0.0, worst_odd = 0.0;
  double k_max = std::fabs(spec.K(0.0)), kp_max = 0.0, kpp_max = 0.0;
  double worst_lip = 0.0;
  double prev_z = -range, prev_k = spec.K(-range);
  for (int i = 1; i < n_samples; ++i) {
    const double z = range * i / (n_samples - 1);
    const double kz = spec.K(z), kmz = spec.K(-z);
    worst_even = std::max(worst_even, std::fabs(kz - kmz) / (1.0 + std::fabs(kz)));
    const double p = spec.Kprime(z), pm = spec.Kprime(-z);
    worst_odd = std::max(worst_odd, std::fabs(p + pm) / (1.0 + std::fabs(p)));
    k_max = std::max({k_max, std::fabs(kz), std::fabs(kmz)});
    kp_max = std::max({kp_max, std::fabs(p), std::fabs(pm)});
    const double h = 1e-5 * std::max(1.0, z);
    if (z > 2.0 * h) {
      const double second = (spec.Kprime(z + h) - spec.Kprime(z - h)) / (2.0 * h);
      kpp_max = std::max(kpp_max, std::fabs(second));
    }
  }
  // Consecutive samples across the whole window, origin included.
  for (int i = 1; i < 2 * n_samples - 1; ++i) {
    const double z = -range + range * i / (n_samples - 1);
    const double kz = spec.K(z);
    const double allowed = spec.norm_Kprime_inf * (z - prev_z);
    worst_lip = std::max(worst_lip, std::fabs(kz - prev_k) - allowed * (1.0 + 1e-9));
    prev_z = z;
    prev_k = kz;
  }

  add(r, "evenness", worst_even <= 1e-12, fmt("max relative |K(z) - K(-z)| = %.3e", worst_even));
  add(r, "oddness", worst_odd <= 1e-12, fmt("max relative |K'(z) + K'(-z)| = %.3e", worst_odd));
  add(r, "continuity", worst_lip <= 1e-14,
      fmt("max excess of |dK| over ||K'|| dz = %.3e", std::max(worst_lip, 0.0)));
  add(r, "K bounded", k_max <= spec.norm_K_inf * (1.0 + 1e-9) + 1e-300,
      fmt("sampled %.6g, declared %.6g", k_max, spec.norm_K_inf));
  add(r, "K' bounded", kp_max <= spec.norm_Kprime_inf * (1.0 + 1e-9) + 1e-300,
      fmt("sampled %.6g, declared %.6g", kp_max, spec.norm_Kprime_inf));
  // Centered differences carry O(h^2) truncation error.
  add(r, "K'' bounded", kpp_max <= spec.norm_Ksecond_inf * (1.0 + 1e-6) + 1e-12,
      fmt("sampled %.6g, declared %.6g", kpp_max, spec.norm_Ksecond_inf));

  double l1 = 0.0;
  bool finite = true;
  try {
    // One-sided values at the origin, where K' may jump.
    auto right = [&spec](double z) { return std::fabs(spec.Kprime(std::max(z, 1e-300))); };
    auto left = [&spec](double z) { return std::fabs(spec.Kprime(std::min(z, -1e-300))); };
    l1 = quad::adaptive_simpson(right, 0.0, range, 1e-10, 50, 64) +
         quad::adaptive_simpson(left, -range, 0.0, 1e-10, 50, 64);
    finite = std::isfinite(l1);
  } catch (const Error&) {
    finite = false;
  }
  add(r, "K' integrable", finite && l1 <= spec.norm_Kprime_L1 * (1.0 + 1e-6) + 1e-12,
      fmt("quadrature %.6g, declared %.6g", l1, spec.norm_Kprime_L1));
  return r;
}

ValidationReport validate_mobility(const MobilitySpec& spec, int n_samples, double s_max) {
  ValidationReport r;
  r.subject = "mobility " + spec.label;
  n_samples = std::max(n_samples, 100);
  std::vector<double> s(n_samples), v(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    s[i] = s_max * i / (n_samples - 1);
    v[i] = spec.v(s[i]);
  }
  const double v0 = spec.v(0.0);
  bool nonneg = true, below_v0 = true, monotone = true;
  double worst_lip = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    nonneg = nonneg && v[i] >= 0.0;
    below_v0 = below_v0 && v[i] <= v0;
    if (i > 0) {
      monotone = monotone && v[i] <= v[i - 1];
      worst_lip = std::max(worst_lip, std::fabs(v[i] - v[i - 1]) / (s[i] - s[i - 1]));
    }
  }
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, s_max);
  bool min_identity = true;
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    if (a != b) worst_lip = std::max(worst_lip, std::fabs(spec.v(a) - spec.v(b)) / std::fabs(a - b));
    min_identity = min_identity && std::min(spec.v(a), spec.v(b)) == spec.v(std::max(a, b));
  }
  add(r, "nonnegative", nonneg, "");
  add(r, "nonincreasing", below_v0 && monotone, "v(s) <= v(0) and consecutive samples nonincreasing");
  add(r, "sup norm at origin", std::fabs(spec.norm_v_inf - v0) <= 1e-12 * std::max(1.0, v0),
      fmt("declared %.6g, v(0) = %.6g", spec.norm_v_inf, v0));
  add(r, "lipschitz", worst_lip <= spec.lipschitz_v * (1.0 + 1e-9) + 1e-12,
      fmt("sampled %.6g, declared %.6g", worst_lip, spec.lipschitz_v));
  add(r, "min identity", min_identity, "min(v(a), v(b)) = v(max(a, b))");
  return r;
}

ValidationReport validate_diffusion(const DiffusionSpec& spec, int n_samples) {
  ValidationReport r;
  r.subject = "diffusion " + spec.label();
  n_samples = std::max(n_samples, 100);
  const double s_max = spec.s_max();

  add(r, "phi_v(0) = 0", spec.phi_v(0.0) == 0.0, "");

  bool monotone = true;
  double prev = spec.phi_v(0.0);
  for (int i = 1; i < n_samples; ++i) {
    const double cur = spec.phi_v(s_max * i / (n_samples - 1));
    monotone = monotone && cur >= prev;
    prev = cur;
  }
  add(r, "phi_v nondecreasing", monotone, "");

  double worst_identity = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = 0.01 + (s_max - 0.01) * i / 99.0;
    const double h = 1e-5 * s;
    const double dW = (spec.W_v(s + h) - spec.W_v(s - h)) / (2.0 * h);
    const double lhs = spec.phi_v(s);
    const double rel = std::fabs(lhs - (s * dW - spec.W_v(s))) / std::max(std::fabs(lhs), 1e-300);
    worst_identity = std::max(worst_identity, rel);
  }
  add(r, "entropy identity", worst_identity <= 1e-6,
      fmt("max relative |phi_v - (s W_v' - W_v)| = %.3e", worst_identity));
  add(r, "normalization", std::fabs(spec.W_v(1.0)) <= 1e-12, fmt("W_v(1) = %.3e", spec.W_v(1.0)));

  if (spec.mobility().kind == MobilityKind::constant) {
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      const double s = s_max * i / (n_samples - 1);
      worst = std::max(worst, std::fabs(spec.phi_v(s) - spec.phi(s)) / std::max(1.0, spec.phi(s)));
    }
    add(r, "constant mobility reduction", worst <= 1e-12, fmt("max relative deviation %.3e", worst));
  }

  double worst_quad = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double s = s_max * i / 200.0;
    const double oracle = phi_v_quadrature(spec.family(), spec.m(), spec.mobility(), s);
    worst_quad = std::max(worst_quad, std::fabs(spec.phi_v(s) - oracle));
  }
  add(r, "quadrature agreement", worst_quad <= 1e-9, fmt("max |phi_v - oracle| = %.3e", worst_quad));
  return r;
}

MobilityBoundReport mobility_product_bound_check(const MobilitySpec& mobility,
                                                 const DiffusionSpec& diffusion, double s_max,
                                                 int n_samples) {
  MobilityBoundReport rep;
  n_samples = std::max(n_samples, 100);
  for (int i = 0; i < n_samples; ++i) {
    const double s = s_max * i / (n_samples - 1);
    rep.sup_phi_v = std::max(rep.sup_phi_v, diffusion.phi_v(s));
    rep.sup_s_v = std::max(rep.sup_s_v, s * mobility.v(s));
  }
  const double top = diffusion.phi_v(s_max);
  const double half = diffusion.phi_v(0.5 * s_max);
  rep.bounded_branch = top <= half * (1.0 + 1e-12);
  rep.bound = rep.sup_phi_v + mobility.v(0.0);
  rep.holds = rep.sup_s_v <= rep.bound * (1.0 + 1e-12);
  if (rep.bounded_branch) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "phi_v <= %.6g; sup s v(s) = %.6g <= %.6g: %s", rep.sup_phi_v,
                  rep.sup_s_v, rep.bound, rep.holds ? "holds" : "VIOLATED");
    rep.message = buf;
  } else {
    rep.message = "unbounded φ_v branch, no bound asserted";
  }
  return rep;
}

}  // namespace aggdiff

#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "aggdiff/mobility.h"

namespace aggdiff {

/// log_entropy is W(s) = s log s (flux function s); power is W(s) = s^m / (m - 1), m > 1.
enum class DiffusionFamily { log_entropy, power };

enum class DiffusionBuild {
  automatic,         // closed form when one is known, table otherwise
  force_tabulated,   // always tabulate (used to audit the closed forms)
};

namespace detail {
struct DiffusionForm {
  virtual ~DiffusionForm() = default;
  virtual double phi_v(double s) const = 0;
  virtual double W_v(double s) const = 0;
  virtual void phi_v_many(const double* s, double* out, std::size_t n) const {
    for (std::size_t i = 0; i < n; ++i) out[i] = phi_v(s[i]);
  }
};
}  // namespace detail

/// Mobility-weighted diffusion package: phi_v(s) = int_0^s xi W''(xi) v(xi) dxi
/// and the entropy density W_v(s) = s int_1^s phi_v(t) / t^2 dt, so that
/// phi_v = s W_v' - W_v and W_v(1) = 0. Immutable and cheap to copy.
class DiffusionSpec {
 public:
  DiffusionFamily family() const noexcept { return family_; }
  /// Exponent of the flux function; 1 for the log-entropy family.
  double m() const noexcept { return m_; }
  const MobilitySpec& mobility() const noexcept { return mobility_; }
  bool closed_form() const noexcept { return closed_form_; }
  double s_max() const noexcept { return s_max_; }
  const std::string& label() const noexcept { return label_; }

  /// The unweighted flux function s^m (s for log-entropy).
  double phi(double s) const;
  double phi_v(double s) const { return form_->phi_v(s); }
  /// out[i] = phi_v(s[i]) with one dispatch for the whole array.
  void phi_v_many(const double* s, double* out, std::size_t n) const { form_->phi_v_many(s, out, n); }
  /// Exact derivative s W''(s) v(s).
  double phi_v_prime(double s) const;
  double W_v(double s) const { return form_->W_v(s); }

 private:
  friend DiffusionSpec make_diffusion(DiffusionFamily, double, const MobilitySpec&, double,
                                      DiffusionBuild);
  DiffusionFamily family_ = DiffusionFamily::log_entropy;
  double m_ = 1.0;
  MobilitySpec mobility_;
  bool closed_form_ = true;
  double s_max_ = 16.0;
  std::string label_;
  std::shared_ptr<const detail::DiffusionForm> form_;
};

/// `m` is ignored for log_entropy. Tables cover [0, s_max]; beyond it values
/// are continued by direct quadrature. Throws BadParameter for m <= 1 in the
/// power family and QuadratureFailure if a table entry misses 1e-10.
DiffusionSpec make_diffusion(DiffusionFamily family, double m, const MobilitySpec& mobility,
                             double s_max = 16.0,
                             DiffusionBuild build = DiffusionBuild::automatic);

/// Independent oracle: int_0^s xi W''(xi) v(xi) dxi by adaptive Simpson.
double phi_v_quadrature(DiffusionFamily family, double m, const MobilitySpec& mobility, double s,
                        double abs_tol = 1e-12);

}  // namespace aggdiff

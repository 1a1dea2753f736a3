#include "aggdiff/diffusion.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "aggdiff/error.h"
#include "aggdiff/quadrature.h"

namespace aggdiff {

namespace {

using detail::DiffusionForm;

// s log s with the s -> 0 limit.
double xlogx(double s) { return s > 0.0 ? s * std::log(s) : 0.0; }

struct LogConstant final : DiffusionForm {
  double phi_v(double s) const override { return s; }
  void phi_v_many(const double* s, double* out, std::size_t n) const override {
    std::copy(s, s + n, out);
  }
  double W_v(double s) const override { return xlogx(s); }
};

struct PowerConstant final : DiffusionForm {
  explicit PowerConstant(double m) : m(m) {}
  double m;
  double phi_v(double s) const override { return m == 2.0 ? s * s : std::pow(s, m); }
  double W_v(double s) const override { return (phi_v(s) - s) / (m - 1.0); }
  void phi_v_many(const double* s, double* out, std::size_t n) const override {
    if (m != 2.0) return DiffusionForm::phi_v_many(s, out, n);
    for (std::size_t i = 0; i < n; ++i) out[i] = s[i] * s[i];
  }
};

// v(s) = max(0, 1 - s / sbar), log-entropy.
struct LogCutoff final : DiffusionForm {
  explicit LogCutoff(double sbar) : sbar(sbar), a_one(A(1.0)) {}
  double sbar;
  double a_one;
  double phi_v(double s) const override {
    const double c = std::min(s, sbar);
    return c - c * c / (2.0 * sbar);
  }
  // Antiderivative of phi_v / t^2.
  double A(double t) const {
    if (t <= sbar) return std::log(t) - t / (2.0 * sbar);
    return std::log(sbar) - 0.5 + 0.5 * sbar * (1.0 / sbar - 1.0 / t);
  }
  double W_v(double s) const override {
    if (s <= 0.0) return 0.0;
    if (s <= sbar) return xlogx(s) - s * s / (2.0 * sbar) - s * a_one;
    return s * (A(s) - a_one);
  }
};

// v(s) = max(0, 1 - s / sbar), power family.
struct PowerCutoff final : DiffusionForm {
  PowerCutoff(double m, double sbar) : m(m), sbar(sbar), a_one(A(1.0)) {}
  double m;
  double sbar;
  double a_one;
  double phi_v(double s) const override {
    const double c = std::min(s, sbar);
    return std::pow(c, m) - m * std::pow(c, m + 1.0) / ((m + 1.0) * sbar);
  }
  double A(double t) const {
    if (t <= sbar) return std::pow(t, m - 1.0) / (m - 1.0) - std::pow(t, m) / ((m + 1.0) * sbar);
    const double top = std::pow(sbar, m - 1.0) / (m - 1.0) - std::pow(sbar, m) / ((m + 1.0) * sbar);
    return top + phi_v(sbar) * (1.0 / sbar - 1.0 / t);
  }
  double W_v(double s) const override { return s <= 0.0 ? 0.0 : s * (A(s) - a_one); }
};

// v(s) = 1 / (1 + s), log-entropy.
struct LogRational final : DiffusionForm {
  double phi_v(double s) const override { return std::log1p(s); }
  double W_v(double s) const override {
    if (s <= 0.0) return 0.0;
    return -std::log1p(s) + s * std::log(s / (1.0 + s)) + 2.0 * s * std::log(2.0);
  }
};

// v(s) = 1 / (1 + s), m = 2.
struct QuadraticRational final : DiffusionForm {
  double phi_v(double s) const override { return 2.0 * (s - std::log1p(s)); }
  double W_v(double s) const override {
    return 2.0 * (1.0 + s) * std::log1p(s) - 4.0 * s * std::log(2.0);
  }
};

double weight(DiffusionFamily family, double m, double xi) {
  if (family == DiffusionFamily::log_entropy) return 1.0;
  return m == 2.0 ? 2.0 * xi : m * std::pow(xi, m - 1.0);
}

// int_a^b xi W''(xi) v(xi) dxi with xi = t^2, which removes the
// xi^(m-1) derivative singularity at the origin for non-integer m.
double weighted_integral(DiffusionFamily family, double m, const MobilitySpec& mobility, double a,
                         double b, double abs_tol, int panels) {
  auto f = [&](double t) {
    const double xi = t * t;
    return 2.0 * t * weight(family, m, xi) * mobility.v(xi);
  };
  return quad::adaptive_simpson(f, std::sqrt(a), std::sqrt(b), abs_tol, 50, panels);
}

// Cubic Hermite tables of phi_v and Psi(s) = int_1^s phi_v / t^2 on a
// geometric grid, both with exact nodal derivatives.
class Tabulated final : public DiffusionForm {
 public:
  Tabulated(DiffusionFamily family, double m, MobilitySpec mobility, double s_max)
      : family_(family), m_(m), mobility_(std::move(mobility)) {
    s_hi_ = std::max(s_max, 2.0);
    s_lo_ = 1e-8 * s_hi_;
    const int n = static_cast<int>(std::ceil(std::log(s_hi_ / s_lo_) / std::log(kRatio)));
    log_ratio_ = std::log(s_hi_ / s_lo_) / n;
    s_.resize(n + 1);
    for (int i = 0; i <= n; ++i) s_[i] = s_lo_ * std::exp(log_ratio_ * i);
    s_[n] = s_hi_;
    // A kink of v must sit on a node, otherwise the cubic pieces straddle it.
    if (mobility_.kind == MobilityKind::linear_cutoff && mobility_.sbar > s_lo_ &&
        mobility_.sbar < s_hi_) {
      auto it = std::lower_bound(s_.begin(), s_.end(), mobility_.sbar);
      const std::size_t i = static_cast<std::size_t>(it - s_.begin());
      if (*it != mobility_.sbar) {
        // Move the nearer neighbour onto the kink.
        const std::size_t j = (mobility_.sbar - s_[i - 1] < s_[i] - mobility_.sbar) ? i - 1 : i;
        if (j > 0 && j < static_cast<std::size_t>(n)) s_[j] = mobility_.sbar;
      }
    }

    auto f = [this](double xi) { return integrand(xi); };
    phi_.resize(n + 1);
    dphi_.resize(n + 1);
    phi_[0] = weighted_integral(family_, m_, mobility_, 0.0, s_lo_, 1e-16, 4);
    for (int i = 0; i < n; ++i) {
      phi_[i + 1] = phi_[i] + quad::adaptive_simpson(f, s_[i], s_[i + 1], 1e-14, 40);
    }
    for (int i = 0; i <= n; ++i) dphi_[i] = integrand(s_[i]);

    cum_.resize(n + 1);
    cum_[0] = 0.0;
    for (int i = 0; i < n; ++i) {
      auto g = [this, i](double t) { return hermite(phi_, dphi_, i, t) / (t * t); };
      cum_[i + 1] = cum_[i] + quad::gauss_legendre<5>(g, s_[i], s_[i + 1]);
    }
    cum_one_ = cumulative(1.0);
  }

  double phi_v(double s) const override {
    if (s <= 0.0) return 0.0;
    if (s < s_lo_) return phi_[0] * std::pow(s / s_lo_, m_);
    if (s > s_hi_) {
      auto f = [this](double xi) { return integrand(xi); };
      return phi_.back() + quad::adaptive_simpson(f, s_hi_, s, 1e-12, 40, 4);
    }
    return hermite(phi_, dphi_, locate(s), s);
  }

  double W_v(double s) const override {
    if (s <= 0.0) return 0.0;
    return s * (cumulative(s) - cum_one_);
  }

 private:
  static constexpr double kRatio = 1.005;

  double integrand(double xi) const { return weight(family_, m_, xi) * mobility_.v(xi); }

  std::size_t locate(double s) const {
    auto i = static_cast<std::ptrdiff_t>(std::log(s / s_lo_) / log_ratio_);
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(s_.size()) - 2);
    while (i > 0 && s < s_[i]) --i;
    while (i + 2 < static_cast<std::ptrdiff_t>(s_.size()) && s > s_[i + 1]) ++i;
    return static_cast<std::size_t>(i);
  }

  double hermite(const std::vector<double>& y, const std::vector<double>& dy, std::size_t i,
                 double s) const {
    const double h = s_[i + 1] - s_[i];
    const double t = (s - s_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    // Written as y0 + (y1 - y0) H(t) + ... so that flat pieces stay exactly flat.
    return y[i] + (y[i + 1] - y[i]) * (3 * t2 - 2 * t3) +
           h * (dy[i] * (t3 - 2 * t2 + t) + dy[i + 1] * (t3 - t2));
  }

  // int_{s_lo}^s phi_v / t^2.
  double cumulative(double s) const {
    if (s < s_lo_) {
      // phi_v ~ phi_v(s_lo) (t / s_lo)^m below the table.
      const double c = phi_[0] / std::pow(s_lo_, m_);
      if (m_ == 1.0) return -c * std::log(s_lo_ / s);
      return -c * (std::pow(s_lo_, m_ - 1.0) - std::pow(s, m_ - 1.0)) / (m_ - 1.0);
    }
    if (s > s_hi_) {
      auto g = [this](double t) { return phi_v(t) / (t * t); };
      return cum_.back() + quad::adaptive_simpson(g, s_hi_, s, 1e-12, 40, 4);
    }
    const std::size_t i = locate(s);
    const double h = s_[i + 1] - s_[i];
    const double t = (s - s_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double d0 = phi_[i] / (s_[i] * s_[i]);
    const double d1 = phi_[i + 1] / (s_[i + 1] * s_[i + 1]);
    return cum_[i] + (cum_[i + 1] - cum_[i]) * (3 * t2 - 2 * t3) + h * (d0 * (t3 - 2 * t2 + t) + d1 * (t3 - t2));
  }

  DiffusionFamily family_;
  double m_;
  MobilitySpec mobility_;
  double s_lo_ = 0.0;
  double s_hi_ = 0.0;
  double log_ratio_ = 0.0;
  std::vector<double> s_, phi_, dphi_, cum_;
  double cum_one_ = 0.0;
};

std::shared_ptr<const DiffusionForm> closed_form_for(DiffusionFamily family, double m,
                                                     const MobilitySpec& mobility) {
  const bool log = family == DiffusionFamily::log_entropy;
  switch (mobility.kind) {
    case MobilityKind::constant:
      if (log) return std::make_shared<LogConstant>();
      return std::make_shared<PowerConstant>(m);
    case MobilityKind::linear_cutoff:
      if (log) return std::make_shared<LogCutoff>(mobility.sbar);
      return std::make_shared<PowerCutoff>(m, mobility.sbar);
    case MobilityKind::rational:
      if (log) return std::make_shared<LogRational>();
      if (m == 2.0) return std::make_shared<QuadraticRational>();
      return nullptr;
    case MobilityKind::custom:
      return nullptr;
  }
  return nullptr;
}

}  // namespace

double DiffusionSpec::phi(double s) const {
  if (family_ == DiffusionFamily::log_entropy) return s;
  return m_ == 2.0 ? s * s : std::pow(s, m_);
}

double DiffusionSpec::phi_v_prime(double s) const {
  return weight(family_, m_, s) * mobility_.v(s);
}

DiffusionSpec make_diffusion(DiffusionFamily family, double m, const MobilitySpec& mobility,
                             double s_max, DiffusionBuild build) {
  if (family == DiffusionFamily::log_entropy) {
    m = 1.0;
  } else if (!(m > 1.0) || !std::isfinite(m)) {
    throw Error(ErrorCode::BadParameter, "power diffusion needs m > 1");
  }
  if (!(s_max > 0.0) || !std::isfinite(s_max)) {
    throw Error(ErrorCode::BadParameter, "diffusion table bound must be positive");
  }
  DiffusionSpec spec;
  spec.family_ = family;
  spec.m_ = m;
  spec.mobility_ = mobility;
  spec.s_max_ = s_max;
  if (build == DiffusionBuild::automatic) spec.form_ = closed_form_for(family, m, mobility);
  spec.closed_form_ = spec.form_ != nullptr;
  if (!spec.form_) spec.form_ = std::make_shared<Tabulated>(family, m, mobility, s_max);

  std::ostringstream os;
  if (family == DiffusionFamily::log_entropy) {
    os << "log";
  } else {
    os << "power(" << m << ")";
  }
  os << "/" << mobility.label << (spec.closed_form_ ? "" : "/tabulated");
  spec.label_ = os.str();
  return spec;
}

double phi_v_quadrature(DiffusionFamily family, double m, const MobilitySpec& mobility, double s,
                        double abs_tol) {
  if (family == DiffusionFamily::log_entropy) m = 1.0;
  return weighted_integral(family, m, mobility, 0.0, s, abs_tol, 16);
}

}  // namespace aggdiff

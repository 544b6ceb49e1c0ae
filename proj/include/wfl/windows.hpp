#pragma once

// Generator windows phi, represented through their Fourier transforms.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include "wfl/numerics.hpp"

namespace wfl {

// ---------------------------------------------------------------------------
// Lattice and transition parameters
// ---------------------------------------------------------------------------

/// Time-frequency lattice: translations by beta, modulations by alpha.
class LatticeParams {
 public:
  LatticeParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw std::invalid_argument("lattice alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("lattice beta must be positive");
    const double inv = 1.0 / beta;
    const double rounded = std::round(inv);
    inverse_beta_integral_ = rounded >= 1.0 && std::abs(inv - rounded) < 1e-9 * rounded;
  }

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] double inverse_beta() const { return 1.0 / beta_; }
  /// true when 1/beta is a natural number
  [[nodiscard]] bool inverse_beta_integral() const { return inverse_beta_integral_; }
  /// 1/beta as an integer; throws unless inverse_beta_integral().
  [[nodiscard]] int redundancy() const {
    if (!inverse_beta_integral_) throw std::invalid_argument("1/beta is not a natural number");
    return static_cast<int>(std::lround(1.0 / beta_));
  }

 private:
  double alpha_;
  double beta_;
  bool inverse_beta_integral_ = false;
};

/// Returns N = 1/beta, rejecting beta with 1/beta outside the naturals.
inline int redundancy_of(double beta) { return LatticeParams(1.0, beta).redundancy(); }

/// Width parameter of the smooth transition G; the ramp runs over [1 - gamma, gamma].
struct TransitionParams {
  double gamma;

  explicit TransitionParams(double g) : gamma(g) {
    if (!(g > 0.5 && g < 1.0)) throw std::invalid_argument("transition gamma must lie in (1/2, 1)");
  }
};

// ---------------------------------------------------------------------------
// Smooth building blocks
// ---------------------------------------------------------------------------

/// e^{-1/t} for t > 0, else 0.
inline double flat_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

/// C-infinity step: 0 for u <= 0, 1 for u >= 1, S(u) + S(1-u) = 1.
inline double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = flat_exp(u);
  const double b = flat_exp(1.0 - u);
  return a / (a + b);
}

/// Smooth bump with value 1 at u = 0 and support |u| < 1.
inline double plateau_bump(double u) {
  const double r = std::abs(u);
  return r >= 1.0 ? 0.0 : smoothstep(1.0 - r);
}

/// G(x): 0 for x <= 1 - gamma, 1 for x >= gamma, smooth and nondecreasing between.
inline double transition_function(const TransitionParams& t, double x) {
  return smoothstep((x - (1.0 - t.gamma)) / (2.0 * t.gamma - 1.0));
}

// ---------------------------------------------------------------------------
// Window
// ---------------------------------------------------------------------------

enum class WindowKind { Indicator, SmoothBump, Gaussian, ZakConstructed };

inline const char* to_string(WindowKind k) {
  switch (k) {
    case WindowKind::Indicator: return "indicator";
    case WindowKind::SmoothBump: return "smooth_bump";
    case WindowKind::Gaussian: return "gaussian";
    case WindowKind::ZakConstructed: return "zak_constructed";
  }
  return "unknown";
}

inline WindowKind window_kind_from_string(const std::string& s) {
  if (s == "indicator") return WindowKind::Indicator;
  if (s == "smooth_bump") return WindowKind::SmoothBump;
  if (s == "gaussian") return WindowKind::Gaussian;
  if (s == "zak_constructed") return WindowKind::ZakConstructed;
  throw std::invalid_argument("unknown window kind '" + s + "'");
}

struct IndicatorParams {
  double alpha;
};

struct SmoothBumpParams {
  double beta;
  double eps_prime;
  double gamma;  // = 1/2 + eps_prime / 2
};

struct GaussianParams {
  double scale;
};

struct ZakConstructedParams {
  double beta;
  double seed_scale;  // Gaussian seed the window was built from
  std::size_t nx;
  std::size_t ny;
};

/// Additive smooth bump amplitude * plateau_bump((xi - center) / radius) on phi-hat.
struct Perturbation {
  double amplitude;
  double center;
  double radius;
};

/// Threshold below which unbounded profiles are treated as zero.
inline constexpr double kEffectiveSupportCutoff = 1e-16;
/// Tail floor for Zak-constructed samples (quadrature roundoff sits near 1e-15).
inline constexpr double kSampleTrimFloor = 1e-14;

/// A generator phi, evaluated through phi-hat.  Immutable after construction.
class Window {
 public:
  using Params = std::variant<IndicatorParams, SmoothBumpParams, GaussianParams, ZakConstructedParams>;

  Window(Params params, double gain = 1.0, std::optional<Perturbation> perturbation = std::nullopt,
         std::optional<SampledFunction> sampled_hat = std::nullopt)
      : params_(std::move(params)),
        gain_(gain),
        perturbation_(perturbation),
        sampled_hat_(std::move(sampled_hat)) {
    if (!std::isfinite(gain_)) throw std::invalid_argument("window gain must be finite");
    if (kind() == WindowKind::ZakConstructed && !sampled_hat_)
      throw std::invalid_argument("zak_constructed window requires samples");
    if (perturbation_ && !(perturbation_->radius > 0.0))
      throw std::invalid_argument("perturbation radius must be positive");
  }

  [[nodiscard]] WindowKind kind() const { return static_cast<WindowKind>(params_.index()); }
  [[nodiscard]] const Params& params() const { return params_; }
  [[nodiscard]] double gain() const { return gain_; }
  [[nodiscard]] const std::optional<Perturbation>& perturbation() const { return perturbation_; }
  [[nodiscard]] const std::optional<SampledFunction>& sampled_hat() const { return sampled_hat_; }
  [[nodiscard]] bool is_real_hat() const { return true; }

  /// Copy with the gain multiplied by c.
  [[nodiscard]] Window scaled(double c) const {
    if (!std::isfinite(c)) throw std::invalid_argument("window gain must be finite");
    Window w = *this;
    w.gain_ *= c;
    if (w.perturbation_) w.perturbation_->amplitude *= c;
    return w;
  }

  /// Copy with an additive bump on phi-hat.
  [[nodiscard]] Window perturbed(Perturbation p) const {
    return Window(params_, gain_, p, sampled_hat_);
  }

  /// phi-hat(xi).
  [[nodiscard]] cplx hat(double xi) const {
    double base = 0.0;
    switch (kind()) {
      case WindowKind::Indicator: {
        const double a = std::get<IndicatorParams>(params_).alpha;
        base = (xi >= 0.0 && xi < a) ? 1.0 : 0.0;
        break;
      }
      case WindowKind::SmoothBump: {
        const TransitionParams t(std::get<SmoothBumpParams>(params_).gamma);
        if (std::abs(xi) >= t.gamma) break;  // cos(pi/2) is not exactly zero
        base = xi >= 0.0 ? std::cos(kPi / 2.0 * transition_function(t, xi))
                         : std::sin(kPi / 2.0 * transition_function(t, xi + 1.0));
        break;
      }
      case WindowKind::Gaussian: {
        const double s = std::get<GaussianParams>(params_).scale;
        base = s * std::exp(-kPi * s * s * xi * xi);
        break;
      }
      case WindowKind::ZakConstructed:
        return gain_ * std::real(interpolate(*sampled_hat_, xi)) + perturbation_value(xi);
    }
    return gain_ * base + perturbation_value(xi);
  }

  [[nodiscard]] bool has_closed_form_time() const {
    return !perturbation_ &&
           (kind() == WindowKind::Indicator || kind() == WindowKind::Gaussian);
  }

  /// phi(x) for kinds with a closed form (unperturbed indicator and Gaussian).
  [[nodiscard]] cplx time(double x) const {
    if (!has_closed_form_time())
      throw std::invalid_argument(std::string("no closed-form time profile for window kind ") +
                                  to_string(kind()));
    if (kind() == WindowKind::Indicator) {
      const double a = std::get<IndicatorParams>(params_).alpha;
      if (std::abs(x) < 1e-300) return gain_ * a;
      return gain_ * (std::polar(1.0, kTwoPi * x * a) - 1.0) / cplx(0.0, kTwoPi * x);
    }
    const double s = std::get<GaussianParams>(params_).scale;
    return gain_ * std::exp(-kPi * x * x / (s * s));
  }

  /// Exact support radius of phi-hat about the origin, or nullopt if unbounded.
  [[nodiscard]] std::optional<double> support_radius() const {
    std::optional<double> r;
    switch (kind()) {
      case WindowKind::Indicator: r = std::get<IndicatorParams>(params_).alpha; break;
      case WindowKind::SmoothBump: r = std::get<SmoothBumpParams>(params_).gamma; break;
      case WindowKind::Gaussian:
      case WindowKind::ZakConstructed: return std::nullopt;
    }
    if (perturbation_)
      r = std::max(*r, std::abs(perturbation_->center) + perturbation_->radius);
    return r;
  }

  /// Interval [lo, hi] outside of which |phi-hat| <= eps.
  [[nodiscard]] std::pair<double, double> support_interval(double eps = kEffectiveSupportCutoff) const {
    double lo = 0.0;
    double hi = 0.0;
    switch (kind()) {
      case WindowKind::Indicator:
        lo = 0.0;
        hi = std::get<IndicatorParams>(params_).alpha;
        break;
      case WindowKind::SmoothBump:
        hi = std::get<SmoothBumpParams>(params_).gamma;
        lo = -hi;
        break;
      case WindowKind::Gaussian: {
        const double s = std::get<GaussianParams>(params_).scale;
        const double peak = std::abs(gain_) * s;
        hi = peak > eps ? std::sqrt(std::log(peak / eps) / kPi) / s : 0.0;
        lo = -hi;
        break;
      }
      case WindowKind::ZakConstructed:
        lo = sampled_hat_->lo();
        hi = sampled_hat_->lo() + sampled_hat_->spacing() * static_cast<double>(sampled_hat_->size() - 1);
        break;
    }
    if (perturbation_) {
      lo = std::min(lo, perturbation_->center - perturbation_->radius);
      hi = std::max(hi, perturbation_->center + perturbation_->radius);
    }
    return {lo, hi};
  }

  /// Radius beyond which |phi-hat| <= eps.
  [[nodiscard]] double effective_radius(double eps = kEffectiveSupportCutoff) const {
    if (auto r = support_radius()) return *r;
    auto [lo, hi] = support_interval(eps);
    return std::max(std::abs(lo), std::abs(hi));
  }

  /// Radius beyond which |phi| <= eps, for kinds with certified time decay.
  [[nodiscard]] std::optional<double> time_effective_radius(double eps = kEffectiveSupportCutoff) const {
    if (kind() != WindowKind::Gaussian || perturbation_) return std::nullopt;
    const double s = std::get<GaussianParams>(params_).scale;
    const double peak = std::abs(gain_);
    return peak > eps ? s * std::sqrt(std::log(peak / eps) / kPi) : 0.0;
  }

 private:
  [[nodiscard]] double perturbation_value(double xi) const {
    if (!perturbation_) return 0.0;
    return perturbation_->amplitude * plateau_bump((xi - perturbation_->center) / perturbation_->radius);
  }

  Params params_;
  double gain_ = 1.0;
  std::optional<Perturbation> perturbation_;
  std::optional<SampledFunction> sampled_hat_;
};

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// phi-hat = indicator of [0, alpha).
inline Window indicator_window(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("indicator_window: alpha must be positive");
  return Window(IndicatorParams{alpha});
}

/// (1/(2 beta) - 1) / 10, capped at 1/2 so that gamma stays below 3/4 for small beta.
inline double default_eps_prime(double beta) {
  return std::min((1.0 / (2.0 * beta) - 1.0) / 10.0, 0.5);
}

/// Compactly supported smooth window for 0 < beta < 1/2 built from G:
/// cos(pi/2 G(xi)) for xi >= 0, sin(pi/2 G(xi + 1)) for xi <= 0, supported
/// in [-gamma, gamma] with gamma = 1/2 + eps_prime / 2.
inline Window example2_window(double beta, std::optional<double> eps_prime = std::nullopt) {
  if (!(beta > 0.0 && beta < 0.5))
    throw std::invalid_argument("example2_window: beta must lie in (0, 1/2)");
  const double limit = 1.0 / (2.0 * beta) - 1.0;
  const double ep = eps_prime.value_or(default_eps_prime(beta));
  if (!(ep > 0.0 && ep < limit) || ep >= 1.0)
    throw std::invalid_argument("example2_window: eps_prime must lie in (0, 1/(2 beta) - 1) and below 1");
  const double gamma = 0.5 + ep / 2.0;
  (void)TransitionParams(gamma);
  return Window(SmoothBumpParams{beta, ep, gamma});
}

/// Gaussian g(x) = e^{-pi (x/scale)^2}; phi-hat = scale e^{-pi scale^2 xi^2}.
inline Window gaussian_seed(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("gaussian_seed: scale must be positive");
  return Window(GaussianParams{scale});
}

/// Gaussian with unit L2 norm.
inline Window normalized_gaussian(double scale = 1.0) {
  return gaussian_seed(scale).scaled(std::pow(2.0, 0.25) / std::sqrt(scale));
}

/// Default frequency-grid density (samples per unit length).
inline constexpr std::size_t kDefaultPointsPerUnit = 1024;

/// Even sample count covering `length` at the requested density.
inline std::size_t even_count(double length, std::size_t per_unit) {
  auto n = static_cast<std::size_t>(std::ceil(length * static_cast<double>(per_unit) - 1e-9));
  n = std::max<std::size_t>(n, 2);
  return n + (n % 2);
}

/// Quadrature grid covering the window's (effective) support.
inline GridSpec support_grid(const Window& w, std::size_t per_unit = kDefaultPointsPerUnit) {
  if (w.kind() == WindowKind::ZakConstructed && !w.perturbation()) return w.sampled_hat()->grid();
  auto [lo, hi] = w.support_interval();
  if (!(hi > lo)) return GridSpec{-1.0, 1.0, 2};
  if (w.kind() == WindowKind::Indicator && !w.perturbation()) {
    // [0, alpha) sampled exactly; the jump sits on the closure node
    const double len = hi - lo;
    auto n = even_count(len, per_unit);
    return GridSpec{lo, hi, n};
  }
  const double pad = (hi - lo) * 1e-3;
  lo -= pad;
  hi += pad;
  return GridSpec{lo, hi, even_count(hi - lo, per_unit)};
}

/// ||phi-hat||_{L2} (= ||phi|| by Plancherel) by quadrature over the support.
inline double window_l2_norm(const Window& w, std::size_t per_unit = kDefaultPointsPerUnit) {
  if (w.gain() == 0.0 && !w.perturbation()) return 0.0;
  const GridSpec grid = support_grid(w, per_unit);
  if (w.kind() == WindowKind::ZakConstructed && !w.perturbation()) {
    const auto& s = *w.sampled_hat();
    std::vector<double> sq(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) sq[i] = std::norm(w.gain() * s[i]);
    return std::sqrt(integrate_samples(std::span<const double>(sq), s.spacing()));
  }
  std::vector<double> sq(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) sq[i] = std::norm(w.hat(grid.point(i)));
  return std::sqrt(integrate_samples(std::span<const double>(sq), grid.spacing()));
}

/// phi-hat sampled on the window's support grid.
inline SampledFunction sample_hat(const Window& w, std::size_t per_unit = kDefaultPointsPerUnit) {
  return SampledFunction::sample(support_grid(w, per_unit), [&](double xi) { return w.hat(xi); });
}

/// phi(x) on x_grid: closed form where available, otherwise by quadrature of phi-hat.
inline SampledFunction time_samples(const Window& w, const GridSpec& x_grid,
                                    std::size_t per_unit = kDefaultPointsPerUnit) {
  if (w.has_closed_form_time())
    return SampledFunction::sample(x_grid, [&](double x) { return w.time(x); });
  return inverse_fourier_samples(sample_hat(w, per_unit), x_grid);
}

}  // namespace wfl

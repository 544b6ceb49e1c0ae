#pragma once

// Lattice correlation sums Phi_k and Delta_k, and the tight-frame,
// Parseval-Wilson and orthonormal-basis verdicts built on them.
//
//   Phi_k(xi)   = sum_m phihat(xi - alpha m) conj phihat(xi + k/beta - alpha m)
//   Delta_k(xi) = sum_m (-1)^m phihat(xi + alpha m) conj phihat(xi + (k + 1/2)/beta - alpha m)
//
// The Gabor system G(phi, alpha, beta) is a tight frame with bound 1/beta iff
// Phi_k = delta_{k,0}; the Wilson system is a Parseval frame iff additionally
// Delta_k = 0 for every k.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "wfl/numerics.hpp"
#include "wfl/windows.hpp"

namespace wfl {

/// Per-term magnitude below which lattice sums are truncated.
inline constexpr double kTermCutoff = 1e-18;

inline constexpr double kDefaultClosedFormTol = 1e-8;
inline constexpr double kDefaultSampledTol = 1e-6;

inline double default_tolerance(const Window& w) {
  return w.kind() == WindowKind::ZakConstructed ? kDefaultSampledTol : kDefaultClosedFormTol;
}

/// Radius outside which phi-hat is zero (compact) or below kTermCutoff.
inline double truncation_radius(const Window& w) {
  const double r = w.support_radius() ? *w.support_radius() : w.effective_radius(kTermCutoff);
  if (!std::isfinite(r)) throw std::invalid_argument("window has no decay certificate");
  return r;
}

namespace detail {

/// m-range for which |xi + sign * alpha m| <= radius.
inline std::pair<long, long> m_window(double xi, double sign, double alpha, double radius) {
  // |xi + sign alpha m| <= R  <=>  m in [(-R - xi)/(sign alpha), (R - xi)/(sign alpha)]
  double a = (-radius - xi) / (sign * alpha);
  double b = (radius - xi) / (sign * alpha);
  if (a > b) std::swap(a, b);
  return {static_cast<long>(std::floor(a)) - 1, static_cast<long>(std::ceil(b)) + 1};
}

inline cplx phi_k_sum(const Window& w, double alpha, double shift, double xi, double radius) {
  auto [m0, m1] = m_window(xi, -1.0, alpha, radius);
  std::vector<cplx> terms;
  terms.reserve(static_cast<std::size_t>(m1 - m0 + 1));
  for (long m = m0; m <= m1; ++m) {
    const double am = alpha * static_cast<double>(m);
    const cplx a = w.hat(xi - am);
    if (a == 0.0) continue;
    terms.push_back(a * std::conj(w.hat(xi + shift - am)));
  }
  return pairwise_sum(terms);
}

inline cplx delta_k_sum(const Window& w, double alpha, double shift, double xi, double radius) {
  auto [m0, m1] = m_window(xi, 1.0, alpha, radius);
  std::vector<cplx> terms;
  terms.reserve(static_cast<std::size_t>(m1 - m0 + 1));
  for (long m = m0; m <= m1; ++m) {
    const double am = alpha * static_cast<double>(m);
    const cplx a = w.hat(xi + am);
    if (a == 0.0) continue;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    terms.push_back(sign * a * std::conj(w.hat(xi + shift - am)));
  }
  return pairwise_sum(terms);
}

}  // namespace detail

/// Phi_k(xi), truncated to the terms where phi-hat(xi - alpha m) is nonzero.
inline cplx phi_k(const Window& w, const LatticeParams& lat, int k, double xi) {
  return detail::phi_k_sum(w, lat.alpha(), k / lat.beta(), xi, truncation_radius(w));
}

/// Delta_k(xi).  First factor is phihat(xi + alpha m), as printed.
inline cplx delta_k(const Window& w, const LatticeParams& lat, int k, double xi) {
  return detail::delta_k_sum(w, lat.alpha(), (k + 0.5) / lat.beta(), xi, truncation_radius(w));
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct ConditionSample {
  int k;
  double xi;
  cplx value;
  double target;
};

struct Verdict {
  bool pass = false;
  double tol = 0.0;
};

/// One row of Parseval / decomposition results attached to a report.
struct DeficitRecord {
  std::uint64_t seed = 0;
  std::size_t signal_index = 0;
  double deficit_direct = 0.0;
  double deficit_periodization = 0.0;
  double decomposition_gap = 0.0;
  double reconstruction_error = 0.0;
};

struct FrameReport {
  LatticeParams lattice{1.0, 0.5};
  int k_range = 0;  // |k| <= k_range scanned
  std::size_t grid_n = 0;
  double max_phi0_dev = 0.0;
  double max_phik_dev = 0.0;
  double max_deltak_dev = 0.0;
  double norm_sq = 0.0;
  double xy_max = 0.0;
  Verdict tight_gabor;
  Verdict parseval_wilson;
  Verdict onb;
  std::vector<std::string> onb_reasons;
  std::vector<ConditionSample> phi_samples;
  std::vector<ConditionSample> delta_samples;
  std::vector<DeficitRecord> deficits;

  /// parseval_wilson == tight_gabor && (max |Delta_k| < tol)
  [[nodiscard]] bool consistent() const {
    const bool delta_ok = max_deltak_dev < parseval_wilson.tol;
    return parseval_wilson.pass == (tight_gabor.pass && delta_ok);
  }
};

struct ScanOptions {
  std::size_t grid_n = 1024;
  double tol = kDefaultClosedFormTol;
  std::optional<int> k_max;  // overrides the support-derived bound
  bool keep_samples = true;
};

/// <X_{j,m}, Y_{j,m}> = (-1)^{j+m} integral phihat(xi) conj phihat(xi + 2 alpha m) dxi.
inline cplx xy_inner_product(const Window& w, const LatticeParams& lat, int j, int m) {
  if (m <= 0) throw std::invalid_argument("xy_inner_product: m must be positive");
  const GridSpec grid = support_grid(w);
  const double shift = 2.0 * lat.alpha() * m;
  std::vector<cplx> vals(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double xi = grid.point(i);
    const cplx a = w.hat(xi);
    vals[i] = a == 0.0 ? cplx{} : a * std::conj(w.hat(xi + shift));
  }
  const double sign = ((j + m) % 2 == 0) ? 1.0 : -1.0;
  return sign * integrate_samples(std::span<const cplx>(vals), grid.spacing());
}

/// Largest |Re <X_{j,m}, Y_{j,m}>| over m where the shifted supports can overlap.
/// The value depends on j only through the sign, so j = 0 suffices.
inline double xy_max(const Window& w, const LatticeParams& lat) {
  const double r = truncation_radius(w);
  const int m_top = static_cast<int>(std::ceil(r / lat.alpha())) + 1;
  double worst = 0.0;
  for (int m = 1; m <= m_top; ++m)
    worst = std::max(worst, std::abs(std::real(xy_inner_product(w, lat, 0, m))));
  return worst;
}

struct OnbVerdict {
  bool onb = false;
  std::vector<std::string> reasons;
};

inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Orthonormal-basis test on top of a Parseval verdict: ||phi||^2 = 1/(2 beta)
/// and Re <X_{j,m}, Y_{j,m}> = 0.  Every failing clause is listed.
inline OnbVerdict onb_check(const Window& w, const LatticeParams& lat, const FrameReport& report,
                            double tol) {
  (void)w;
  OnbVerdict v;
  if (!report.parseval_wilson.pass) v.reasons.emplace_back("not Parseval");
  const double required = 1.0 / (2.0 * lat.beta());
  if (std::abs(report.norm_sq - required) >= tol)
    v.reasons.push_back("norm_sq = " + format_g(report.norm_sq) + " != 1/(2 beta) = " + format_g(required));
  if (report.xy_max >= tol)
    v.reasons.push_back("max |Re <X,Y>| = " + format_g(report.xy_max) + " != 0");
  v.onb = v.reasons.empty();
  return v;
}

/// Evaluates Phi_k on one period [0, alpha) and Delta_k over its support,
/// then fills the deviation fields and verdicts.
inline FrameReport scan_frame_conditions(const Window& w, const LatticeParams& lat,
                                         const ScanOptions& opt = {}) {
  if (opt.grid_n < 64) throw std::invalid_argument("scan_frame_conditions: grid_n must be >= 64");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("scan_frame_conditions: tol must be positive");
  const double radius = truncation_radius(w);
  const double alpha = lat.alpha();
  const double beta = lat.beta();
  const int k_max = opt.k_max ? *opt.k_max : static_cast<int>(std::ceil(2.0 * radius * beta)) + 1;

  FrameReport rep;
  rep.lattice = lat;
  rep.k_range = k_max;
  rep.grid_n = opt.grid_n;

  const std::size_t nk = static_cast<std::size_t>(2 * k_max + 1);
  const std::size_t cells = nk * opt.grid_n;
  std::vector<ConditionSample> phi(cells);
  std::vector<ConditionSample> delta(cells);

  parallel_for(nk, [&](std::size_t kk) {
    const int k = static_cast<int>(kk) - k_max;
    const double phi_shift = k / beta;
    const double delta_shift = (k + 0.5) / beta;
    // Delta_k vanishes unless |xi + delta_shift / 2| <= radius
    const double d_lo = -delta_shift / 2.0 - radius;
    const double d_step = 2.0 * radius / static_cast<double>(opt.grid_n);
    for (std::size_t i = 0; i < opt.grid_n; ++i) {
      const double xi = alpha * static_cast<double>(i) / static_cast<double>(opt.grid_n);
      phi[kk * opt.grid_n + i] = {k, xi, detail::phi_k_sum(w, alpha, phi_shift, xi, radius),
                                  k == 0 ? 1.0 : 0.0};
      const double xd = d_lo + d_step * static_cast<double>(i);
      delta[kk * opt.grid_n + i] = {k, xd, detail::delta_k_sum(w, alpha, delta_shift, xd, radius), 0.0};
    }
  });

  for (const auto& s : phi) {
    const double dev = std::abs(s.value - s.target);
    if (s.k == 0)
      rep.max_phi0_dev = std::max(rep.max_phi0_dev, dev);
    else
      rep.max_phik_dev = std::max(rep.max_phik_dev, dev);
  }
  for (const auto& s : delta) rep.max_deltak_dev = std::max(rep.max_deltak_dev, std::abs(s.value));

  const double nrm = window_l2_norm(w);
  rep.norm_sq = nrm * nrm;
  rep.xy_max = xy_max(w, lat);

  rep.tight_gabor = {rep.max_phi0_dev < opt.tol && rep.max_phik_dev < opt.tol, opt.tol};
  rep.parseval_wilson = {rep.tight_gabor.pass && rep.max_deltak_dev < opt.tol, opt.tol};
  auto onb = onb_check(w, lat, rep, opt.tol);
  rep.onb = {onb.onb, opt.tol};
  rep.onb_reasons = std::move(onb.reasons);

  if (opt.keep_samples) {
    rep.phi_samples = std::move(phi);
    rep.delta_samples = std::move(delta);
  }
  return rep;
}

}  // namespace wfl

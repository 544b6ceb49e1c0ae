#pragma once

// Gabor and bimodal Wilson atoms, analysis coefficients on band-limited
// test signals, Parseval deficits and reconstruction.
//
// Wilson atoms in frequency:
//   m = 0:  psihat_{j,0}(xi) = sqrt(2 beta) e^{-4 pi i beta j xi} phihat(xi)
//   m >= 1: psihat_{j,m}(xi) = sqrt(beta) e^{-2 pi i beta j xi}
//                              [phihat(xi - alpha m) + (-1)^{j+m} phihat(xi + alpha m)]

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wfl/frame_conditions.hpp"
#include "wfl/numerics.hpp"
#include "wfl/windows.hpp"

namespace wfl {

/// Test-signal grid density (samples per unit frequency).
inline constexpr std::size_t kSignalPointsPerUnit = 4096;

struct Bump {
  cplx amplitude;
  double center;
  double radius;
};

/// An element of the dense class D: fhat is bounded with compact support
/// inside {a <= |xi| <= b}.
class TestSignal {
 public:
  using HatFn = std::function<cplx(double)>;

  /// Sum of plateau bumps; every bump must sit inside the annulus a < |xi| < b.
  TestSignal(double a, double b, std::vector<Bump> bumps, std::size_t per_unit = kSignalPointsPerUnit)
      : a_(a), b_(b), bumps_(std::move(bumps)) {
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("TestSignal: need 0 < a < b");
    if (bumps_.empty()) throw std::invalid_argument("TestSignal: no bumps");
    for (const auto& bp : bumps_) {
      if (!(bp.radius > 0.0)) throw std::invalid_argument("TestSignal: bump radius must be positive");
      const double inner = std::abs(bp.center) - bp.radius;
      const double outer = std::abs(bp.center) + bp.radius;
      if (inner < a || outer > b) throw std::invalid_argument("TestSignal: bump leaves the annulus");
    }
    auto bumps_copy = bumps_;
    fn_ = [bumps_copy](double xi) {
      cplx acc{};
      for (const auto& bp : bumps_copy) {
        const double u = (xi - bp.center) / bp.radius;
        if (std::abs(u) < 1.0) acc += bp.amplitude * plateau_bump(u);
      }
      return acc;
    };
    init(aligned_grid(b, per_unit));
  }

  /// Arbitrary fhat sampled on `grid`; a and b are taken from the nonzero samples.
  TestSignal(HatFn fn, const GridSpec& grid) : fn_(std::move(fn)) {
    init(grid);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (samples_[i] == 0.0) continue;
      lo = std::min(lo, std::abs(samples_.point(i)));
      hi = std::max(hi, std::abs(samples_.point(i)));
    }
    a_ = std::isfinite(lo) ? lo : 0.0;
    b_ = hi;
  }

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] const std::vector<Bump>& bumps() const { return bumps_; }
  [[nodiscard]] const SampledFunction& hat_samples() const { return samples_; }
  [[nodiscard]] cplx hat(double xi) const { return fn_(xi); }
  [[nodiscard]] double norm_sq() const { return norm_sq_; }

  /// Grid [-B, B) with B a multiple of 1/64 just above b, so that integer
  /// and half-integer shifts land on nodes.
  static GridSpec aligned_grid(double b, std::size_t per_unit = kSignalPointsPerUnit) {
    const double B = std::ceil(b * 64.0 + 1.0) / 64.0;
    return GridSpec{-B, B, even_count(2.0 * B, per_unit)};
  }

 private:
  void init(const GridSpec& grid) {
    grid.validate();
    samples_ = SampledFunction::sample(grid, fn_);
    norm_sq_ = l2_norm_sq(samples_);
    if (!(norm_sq_ > 0.0)) throw std::invalid_argument("TestSignal: zero signal");
  }

  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<Bump> bumps_;
  HatFn fn_;
  SampledFunction samples_{GridSpec{0.0, 1.0, 2}, std::vector<cplx>(2)};
  double norm_sq_ = 0.0;
};

/// Default outer radius of the test-signal annulus.
inline constexpr double kSignalOuterRadius = 2.5;
inline constexpr double kSignalInnerRadius = 0.1;

/// One random signal: 2 to 4 bumps with complex amplitudes at random
/// centers and widths inside the annulus.
inline TestSignal random_test_signal(std::mt19937_64& rng, double a = kSignalInnerRadius,
                                     double b = kSignalOuterRadius, std::size_t per_unit = kSignalPointsPerUnit) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(2, 4);
  const int n = count(rng);
  std::vector<Bump> bumps;
  for (int i = 0; i < n; ++i) {
    const double max_r = std::min(0.45, (b - a) / 2.0);
    const double r = 0.15 + (max_r - 0.15) * unit(rng);
    const double c = a + r + (b - a - 2.0 * r) * unit(rng);
    const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double mag = 0.5 + unit(rng);
    const double ph = kTwoPi * unit(rng);
    bumps.push_back({std::polar(mag, ph), side * c, r});
  }
  return TestSignal(a, b, std::move(bumps), per_unit);
}

/// Reproducible corpus: the same seed yields the same signals.
inline std::vector<TestSignal> make_test_signals(std::uint64_t seed, std::size_t count,
                                                 double a = kSignalInnerRadius,
                                                 double b = kSignalOuterRadius,
                                                 std::size_t per_unit = kSignalPointsPerUnit) {
  std::mt19937_64 rng(seed);
  std::vector<TestSignal> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_test_signal(rng, a, b, per_unit));
  return out;
}

// ---------------------------------------------------------------------------
// Atoms
// ---------------------------------------------------------------------------

struct WilsonIndex {
  long j = 0;
  int m = 0;
};

inline double parity_sign(long n) { return (n % 2 == 0) ? 1.0 : -1.0; }

/// Fourier transform of phi_{j,m}(x) = phi(x - beta j) e^{2 pi i alpha m x}.
inline cplx gabor_atom_hat(const Window& w, const LatticeParams& lat, long j, long m, double xi) {
  const double shifted = xi - lat.alpha() * static_cast<double>(m);
  return std::polar(1.0, -kTwoPi * lat.beta() * static_cast<double>(j) * shifted) * w.hat(shifted);
}

inline cplx wilson_atom_hat(const Window& w, const LatticeParams& lat, WilsonIndex idx, double xi) {
  if (idx.m < 0) throw std::invalid_argument("wilson_atom_hat: m must be nonnegative");
  const double beta = lat.beta();
  const double j = static_cast<double>(idx.j);
  if (idx.m == 0) return std::sqrt(2.0 * beta) * std::polar(1.0, -2.0 * kTwoPi * beta * j * xi) * w.hat(xi);
  const double am = lat.alpha() * idx.m;
  const cplx sum = w.hat(xi - am) + parity_sign(idx.j + idx.m) * w.hat(xi + am);
  return std::sqrt(beta) * std::polar(1.0, -kTwoPi * beta * j * xi) * sum;
}

/// psi_{j,m}(x) from time samples of phi.
template <typename Phi>
cplx wilson_atom_time(const Phi& phi, const LatticeParams& lat, WilsonIndex idx, double x) {
  if (idx.m < 0) throw std::invalid_argument("wilson_atom_time: m must be nonnegative");
  const double beta = lat.beta();
  const double j = static_cast<double>(idx.j);
  if (idx.m == 0) return std::sqrt(2.0 * beta) * cplx(phi(x - 2.0 * beta * j));
  const double am = lat.alpha() * idx.m;
  const cplx base = phi(x - beta * j);
  const cplx plus = std::polar(1.0, -kTwoPi * beta * j * am) * base * std::polar(1.0, kTwoPi * am * x);
  const cplx minus = std::polar(1.0, kTwoPi * beta * j * am) * base * std::polar(1.0, -kTwoPi * am * x);
  return std::sqrt(beta) * (plus + parity_sign(idx.j + idx.m) * minus);
}

// ---------------------------------------------------------------------------
// Analysis
// ---------------------------------------------------------------------------

namespace detail {

/// w_i fhat_i conj phihat(xi_i - shift) on the nonzero index range.
struct WeightedBand {
  std::size_t first = 0;
  std::vector<cplx> values;
};

/// Sum_i values_i e^{2 pi i nu xi_{first+i}} by Horner in r = e^{2 pi i nu h}.
inline cplx band_transform(const WeightedBand& band, const GridSpec& grid, double nu) {
  if (band.values.empty()) return {};
  const cplx r = std::polar(1.0, kTwoPi * nu * grid.spacing());
  cplx acc = band.values.back();
  for (std::size_t i = band.values.size() - 1; i-- > 0;) acc = acc * r + band.values[i];
  return acc * std::polar(1.0, kTwoPi * nu * grid.point(band.first));
}

/// Per-m analysis data: coefficient c_{j,m} = scale [T(minus, nu j) + s_j T(plus, nu j)].
struct AnalysisPlan {
  const GridSpec grid;
  double beta;
  int m_max;
  std::vector<WeightedBand> minus;  // index m: shift +alpha m (m = 0 holds phihat itself)
  std::vector<WeightedBand> plus;   // index m: shift -alpha m (unused for m = 0)

  [[nodiscard]] cplx coefficient(long j, int m) const {
    const double jd = static_cast<double>(j);
    if (m == 0) return std::sqrt(2.0 * beta) * band_transform(minus[0], grid, 2.0 * beta * jd);
    const double nu = beta * jd;
    return std::sqrt(beta) * (band_transform(minus[m], grid, nu) +
                              parity_sign(j + m) * band_transform(plus[m], grid, nu));
  }
};

inline WeightedBand make_band(const SampledFunction& f, const std::vector<double>& weights,
                              const Window& w, double shift, double radius) {
  WeightedBand band;
  const GridSpec& g = f.grid();
  // restrict to |xi - shift| <= radius
  const double h = g.spacing();
  const double lo = std::max(g.lo, shift - radius);
  const double hi = std::min(g.lo + h * static_cast<double>(g.n - 1), shift + radius);
  if (hi < lo) return band;
  const auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor((lo - g.lo) / h)));
  const auto i1 = std::min(g.n - 1, static_cast<std::size_t>(std::ceil((hi - g.lo) / h)));
  std::size_t first = i1 + 1;
  std::size_t last = 0;
  std::vector<cplx> vals(i1 - i0 + 1);
  for (std::size_t i = i0; i <= i1; ++i) {
    const cplx fi = f[i];
    if (fi == 0.0) continue;
    const cplx v = weights[i] * fi * std::conj(w.hat(g.point(i) - shift));
    if (v == 0.0) continue;
    vals[i - i0] = v;
    first = std::min(first, i);
    last = std::max(last, i);
  }
  if (first > last) return band;
  band.first = first;
  band.values.assign(vals.begin() + static_cast<long>(first - i0), vals.begin() + static_cast<long>(last - i0 + 1));
  return band;
}

/// Largest m for which some atom overlaps the signal's support.
inline int overlap_m_max(const TestSignal& f, const Window& w, const LatticeParams& lat) {
  const double r = truncation_radius(w);
  const double reach = std::max(std::abs(f.hat_samples().lo()), std::abs(f.hat_samples().hi()));
  return static_cast<int>(std::ceil((reach + r) / lat.alpha())) + 1;
}

inline AnalysisPlan make_plan(const TestSignal& f, const Window& w, const LatticeParams& lat,
                              int m_max, int m_only = -1) {
  const SampledFunction& s = f.hat_samples();
  const auto weights = simpson_weights(s.size(), s.spacing());
  const double r = truncation_radius(w);
  AnalysisPlan plan{s.grid(), lat.beta(), m_max, {}, {}};
  plan.minus.resize(static_cast<std::size_t>(m_max) + 1);
  plan.plus.resize(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) {
    if (m_only >= 0 && m != m_only) continue;
    const double am = lat.alpha() * m;
    plan.minus[static_cast<std::size_t>(m)] = make_band(s, weights, w, am, r);
    if (m > 0) plan.plus[static_cast<std::size_t>(m)] = make_band(s, weights, w, -am, r);
  }
  return plan;
}

}  // namespace detail

/// <f, psi_{j,m}> = <fhat, psihat_{j,m}> by quadrature on the signal grid.
inline cplx analysis_coefficient(const TestSignal& f, const Window& w, const LatticeParams& lat,
                                 WilsonIndex idx) {
  if (idx.m < 0) throw std::invalid_argument("analysis_coefficient: m must be nonnegative");
  const auto plan = detail::make_plan(f, w, lat, idx.m, idx.m);
  return plan.coefficient(idx.j, idx.m);
}

/// Same coefficient by quadrature in time.  phi_time and f_time are sampled
/// on the same x-grid; the atom is rebuilt from phi by interpolation.
inline cplx analysis_coefficient_time(const SampledFunction& f_time, const SampledFunction& phi_time,
                                      const LatticeParams& lat, WilsonIndex idx) {
  if (!(f_time.grid() == phi_time.grid()))
    throw std::invalid_argument("analysis_coefficient_time: grid misalignment");
  auto phi = [&](double x) { return interpolate(phi_time, x); };
  std::vector<cplx> vals(f_time.size());
  for (std::size_t i = 0; i < f_time.size(); ++i)
    vals[i] = f_time[i] * std::conj(wilson_atom_time(phi, lat, idx, f_time.point(i)));
  return integrate_samples(std::span<const cplx>(vals), f_time.spacing());
}

struct DirectOptions {
  double tol = 1e-6;
  long j_start = 128;
  long j_limit = 1L << 14;
  std::optional<long> j_fixed;  // skip adaptation
  std::optional<int> m_max;
};

/// Coefficients c_{j,m} for |j| <= J, 0 <= m <= M, plus the truncation record.
struct CoefficientSet {
  long J = 0;
  int M = 0;
  std::vector<cplx> values;  // row-major in (j + J, m)
  double energy = 0.0;       // sum |c|^2
  double last_change = 0.0;  // relative change of the energy in the last doubling
  bool converged = false;
  std::vector<std::string> warnings;

  [[nodiscard]] cplx at(long j, int m) const {
    return values[static_cast<std::size_t>(j + J) * static_cast<std::size_t>(M + 1) + static_cast<std::size_t>(m)];
  }
};

namespace detail {

inline std::vector<cplx> coefficient_rows(const AnalysisPlan& plan, long j_lo, long j_hi) {
  const auto rows = static_cast<std::size_t>(j_hi - j_lo + 1);
  const auto cols = static_cast<std::size_t>(plan.m_max + 1);
  std::vector<cplx> out(rows * cols);
  parallel_for(rows, [&](std::size_t r) {
    const long j = j_lo + static_cast<long>(r);
    for (int m = 0; m <= plan.m_max; ++m) out[r * cols + static_cast<std::size_t>(m)] = plan.coefficient(j, m);
  });
  return out;
}

inline double energy_of(const std::vector<cplx>& values) {
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = std::norm(values[i]);
  return pairwise_sum(sq);
}

}  // namespace detail

/// All coefficients needed for the direct Parseval sum.  M covers every m
/// whose atoms can meet the signal; J doubles from j_start until the energy
/// changes by less than tol/10 relative to ||f||^2.
inline CoefficientSet wilson_coefficients(const TestSignal& f, const Window& w, const LatticeParams& lat,
                                          const DirectOptions& opt = {}) {
  CoefficientSet set;
  set.M = opt.m_max ? *opt.m_max : detail::overlap_m_max(f, w, lat);
  const auto plan = detail::make_plan(f, w, lat, set.M);
  if (w.kind() == WindowKind::Indicator)
    set.warnings.emplace_back("slow j-decay for a discontinuous window; the periodization route is preferred");

  const auto cols = static_cast<std::size_t>(set.M + 1);
  auto assemble = [&](long J, const std::vector<cplx>& core, const std::vector<cplx>& lower,
                      const std::vector<cplx>& upper) {
    std::vector<cplx> all;
    all.reserve(static_cast<std::size_t>(2 * J + 1) * cols);
    all.insert(all.end(), lower.begin(), lower.end());
    all.insert(all.end(), core.begin(), core.end());
    all.insert(all.end(), upper.begin(), upper.end());
    return all;
  };

  long J = opt.j_fixed ? *opt.j_fixed : opt.j_start;
  std::vector<cplx> vals = detail::coefficient_rows(plan, -J, J);
  double energy = detail::energy_of(vals);
  if (opt.j_fixed) {
    set.J = J;
    set.values = std::move(vals);
    set.energy = energy;
    set.converged = true;
    return set;
  }
  const double scale = f.norm_sq();
  while (true) {
    const long J2 = 2 * J;
    auto lower = detail::coefficient_rows(plan, -J2, -J - 1);
    auto upper = detail::coefficient_rows(plan, J + 1, J2);
    const double added = detail::energy_of(lower) + detail::energy_of(upper);
    vals = assemble(J2, vals, lower, upper);
    energy += added;
    J = J2;
    set.last_change = added / scale;
    if (set.last_change < opt.tol / 10.0) {
      set.converged = true;
      break;
    }
    if (J >= opt.j_limit) {
      set.warnings.push_back("j truncation reached the limit " + std::to_string(J) +
                             " before converging");
      break;
    }
  }
  set.J = J;
  set.values = std::move(vals);
  set.energy = detail::energy_of(set.values);
  return set;
}

// ---------------------------------------------------------------------------
// Periodization route
// ---------------------------------------------------------------------------

struct PeriodizationTerms {
  double i0 = 0.0;
  double i1 = 0.0;
};

/// I0 = int sum_k fhat(xi + k/beta) conj fhat(xi) Phi_k(xi) dxi and
/// I1 = int sum_k conj fhat(xi) fhat(xi + (k + 1/2)/beta) Delta_k(xi) dxi.
inline PeriodizationTerms periodization_terms(const TestSignal& f, const Window& w, const LatticeParams& lat) {
  const SampledFunction& s = f.hat_samples();
  const GridSpec& g = s.grid();
  const auto weights = simpson_weights(s.size(), s.spacing());
  const double alpha = lat.alpha();
  const double beta = lat.beta();
  const double radius = truncation_radius(w);
  const int k_max = static_cast<int>(std::ceil(g.length() * beta)) + 1;
  const auto nk = static_cast<std::size_t>(2 * k_max + 1);

  std::vector<cplx> i0_terms(nk);
  std::vector<cplx> i1_terms(nk);
  parallel_for(nk, [&](std::size_t kk) {
    const int k = static_cast<int>(kk) - k_max;
    const double sh0 = k / beta;
    const double sh1 = (k + 0.5) / beta;
    std::vector<cplx> t0(g.n);
    std::vector<cplx> t1(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
      const cplx fi = s[i];
      if (fi == 0.0) continue;
      const double xi = g.point(i);
      const cplx a = f.hat(xi + sh0);
      if (a != 0.0) t0[i] = weights[i] * a * std::conj(fi) * detail::phi_k_sum(w, alpha, sh0, xi, radius);
      const cplx b = f.hat(xi + sh1);
      if (b != 0.0) t1[i] = weights[i] * std::conj(fi) * b * detail::delta_k_sum(w, alpha, sh1, xi, radius);
    }
    i0_terms[kk] = pairwise_sum(t0);
    i1_terms[kk] = pairwise_sum(t1);
  });
  return {std::real(pairwise_sum(i0_terms)), std::real(pairwise_sum(i1_terms))};
}

enum class ParsevalRoute { Direct, Periodization };

/// |sum |<f, psi_{j,m}>|^2 - ||f||^2| / ||f||^2.
inline double parseval_deficit(const TestSignal& f, const Window& w, const LatticeParams& lat,
                               ParsevalRoute route, const DirectOptions& opt = {}) {
  const double nf = f.norm_sq();
  if (route == ParsevalRoute::Direct) return std::abs(wilson_coefficients(f, w, lat, opt).energy - nf) / nf;
  const auto t = periodization_terms(f, w, lat);
  return std::abs(t.i0 + t.i1 - nf) / nf;
}

struct Decomposition {
  double lhs = 0.0;
  double i0 = 0.0;
  double i1 = 0.0;
  double gap = 0.0;
};

inline Decomposition decomposition_check(const TestSignal& f, const Window& w, const LatticeParams& lat,
                                         const DirectOptions& opt = {}) {
  Decomposition d;
  d.lhs = wilson_coefficients(f, w, lat, opt).energy;
  const auto t = periodization_terms(f, w, lat);
  d.i0 = t.i0;
  d.i1 = t.i1;
  d.gap = std::abs(d.lhs - d.i0 - d.i1) / f.norm_sq();
  return d;
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

struct Reconstruction {
  SampledFunction signal_hat;
  double rel_error = 0.0;
};

/// sum_{j,m} c_{j,m} psihat_{j,m} on the grid of `coeffs`' signal.
inline SampledFunction synthesize(const CoefficientSet& coeffs, const GridSpec& grid, const Window& w,
                                  const LatticeParams& lat) {
  const double beta = lat.beta();
  const double radius = truncation_radius(w);
  const long J = coeffs.J;
  const auto len = static_cast<std::size_t>(2 * J + 1);

  // P(xi) = sum_j c_j e^{-2 pi i nu j xi}, Horner in q = e^{-2 pi i nu xi}
  auto trig = [&](const std::vector<cplx>& c, double nu, double xi) {
    const cplx q = std::polar(1.0, -kTwoPi * nu * xi);
    cplx acc = c.back();
    for (std::size_t l = len - 1; l-- > 0;) acc = acc * q + c[l];
    return acc * std::polar(1.0, kTwoPi * nu * static_cast<double>(J) * xi);
  };

  std::vector<cplx> out(grid.n);
  for (int m = 0; m <= coeffs.M; ++m) {
    std::vector<cplx> c(len);
    std::vector<cplx> c_alt(len);
    for (long j = -J; j <= J; ++j) {
      c[static_cast<std::size_t>(j + J)] = coeffs.at(j, m);
      c_alt[static_cast<std::size_t>(j + J)] = parity_sign(j) * coeffs.at(j, m);
    }
    const double am = lat.alpha() * m;
    parallel_for(grid.n, [&](std::size_t i) {
      const double xi = grid.point(i);
      if (m == 0) {
        if (std::abs(xi) > radius) return;
        const cplx p = w.hat(xi);
        if (p != 0.0) out[i] += std::sqrt(2.0 * beta) * p * trig(c, 2.0 * beta, xi);
        return;
      }
      cplx acc{};
      if (std::abs(xi - am) <= radius) {
        const cplx p = w.hat(xi - am);
        if (p != 0.0) acc += p * trig(c, beta, xi);
      }
      if (std::abs(xi + am) <= radius) {
        const cplx p = w.hat(xi + am);
        if (p != 0.0) acc += parity_sign(m) * p * trig(c_alt, beta, xi);
      }
      out[i] += std::sqrt(beta) * acc;
    });
  }
  return SampledFunction(grid, std::move(out));
}

/// Default options for synthesis: the amplitude error scales with the square
/// root of the neglected energy, so J is grown further than for deficits.
inline DirectOptions reconstruction_options() {
  DirectOptions opt;
  opt.tol = 1e-13;
  return opt;
}

inline Reconstruction reconstruct(const TestSignal& f, const Window& w, const LatticeParams& lat,
                                  const DirectOptions& opt = reconstruction_options()) {
  const auto coeffs = wilson_coefficients(f, w, lat, opt);
  auto synth = synthesize(coeffs, f.hat_samples().grid(), w, lat);
  std::vector<cplx> diff(synth.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f.hat_samples()[i] - synth[i];
  const SampledFunction d(synth.grid(), std::move(diff));
  return {std::move(synth), std::sqrt(l2_norm_sq(d) / f.norm_sq())};
}

}  // namespace wfl

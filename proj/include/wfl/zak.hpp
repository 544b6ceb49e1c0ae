#pragma once

// Zak transform Z_beta f(x, eta) = beta^{-1/2} sum_k f(N (eta - k)) e^{2 pi i k x}, N = 1/beta,
// and the normalized-window construction built on it.
//
// Quasi-periodicity: Z(x + 1, eta) = Z(x, eta),  Z(x, eta + 1) = e^{2 pi i x} Z(x, eta).
// Inverse:           f(N (eta + n)) = sqrt(beta) int_0^1 e^{2 pi i n x} Z(x, eta) dx.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wfl/frame_conditions.hpp"
#include "wfl/numerics.hpp"
#include "wfl/windows.hpp"

namespace wfl {

inline constexpr double kZakTermCutoff = 1e-18;
inline constexpr double kAdmissibilityThreshold = 1e-6;
inline constexpr double kQuasiPeriodicityTol = 1e-10;
inline constexpr std::size_t kDefaultZakN = 256;
/// Probe limit for functions without a decay certificate.
inline constexpr int kMaxZakTruncation = 512;

/// Zak transform samples on the closed grid x = ix/nx, eta = iy/ny,
/// 0 <= ix <= nx, 0 <= iy <= ny.  The last row and column are computed
/// from the defining sum at x = 1 and eta = 1, not copied.
class ZakGrid {
 public:
  ZakGrid(double beta, std::size_t nx, std::size_t ny, int truncation_k, std::vector<cplx> values)
      : beta_(beta), nx_(nx), ny_(ny), truncation_k_(truncation_k), values_(std::move(values)) {
    if (!(beta > 0.0)) throw std::invalid_argument("ZakGrid: beta must be positive");
    if (nx < 2 || ny < 2) throw std::invalid_argument("ZakGrid: grid too small");
    if (values_.size() != (nx + 1) * (ny + 1))
      throw std::invalid_argument("ZakGrid: expected (nx+1)*(ny+1) values");
  }

  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] std::size_t nx() const { return nx_; }
  [[nodiscard]] std::size_t ny() const { return ny_; }
  [[nodiscard]] int truncation_k() const { return truncation_k_; }
  [[nodiscard]] const std::vector<cplx>& values() const { return values_; }
  [[nodiscard]] double x(std::size_t ix) const { return static_cast<double>(ix) / static_cast<double>(nx_); }
  [[nodiscard]] double eta(std::size_t iy) const { return static_cast<double>(iy) / static_cast<double>(ny_); }
  [[nodiscard]] const cplx& at(std::size_t ix, std::size_t iy) const { return values_[ix * (ny_ + 1) + iy]; }
  cplx& at(std::size_t ix, std::size_t iy) { return values_[ix * (ny_ + 1) + iy]; }

  [[nodiscard]] ZakGrid scaled(cplx a) const {
    ZakGrid z = *this;
    for (auto& v : z.values_) v *= a;
    return z;
  }

  friend bool operator==(const ZakGrid&, const ZakGrid&) = default;

 private:
  double beta_;
  std::size_t nx_;
  std::size_t ny_;
  int truncation_k_;
  std::vector<cplx> values_;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void require_zak_sizes(std::size_t nx, std::size_t ny) {
  if (nx < 64 || ny < 64 || !is_power_of_two(nx) || !is_power_of_two(ny))
    throw std::invalid_argument("Zak grid sizes must be powers of two >= 64");
}

/// e^{2 pi i q / n} for q = 0..n-1.
inline std::vector<cplx> roots_of_unity(std::size_t n) {
  std::vector<cplx> r(n);
  for (std::size_t q = 0; q < n; ++q) r[q] = std::polar(1.0, kTwoPi * static_cast<double>(q) / static_cast<double>(n));
  return r;
}

/// Evaluates the truncated Zak sum |k| <= K of a function at arbitrary points.
class ZakEvaluator {
 public:
  using Fn = std::function<cplx(double)>;

  ZakEvaluator(Fn f, double beta, int K) : f_(std::move(f)), beta_(beta), n_(1.0 / beta), K_(K) {}

  [[nodiscard]] int truncation_k() const { return K_; }
  [[nodiscard]] double beta() const { return beta_; }

  [[nodiscard]] cplx at(double x, double eta) const {
    cplx acc{};
    for (int k = -K_; k <= K_; ++k) acc += f_(n_ * (eta - k)) * std::polar(1.0, kTwoPi * k * x);
    return acc / std::sqrt(beta_);
  }

  /// Values at x = ix/nx for ix = 0..count-1, fixed eta.  Phases use exact
  /// modular indices, so x = 1 reproduces x = 0 bit for bit.
  [[nodiscard]] std::vector<cplx> row(double eta, std::size_t nx, std::size_t count,
                                      const std::vector<cplx>& roots) const {
    const auto nk = static_cast<std::size_t>(2 * K_ + 1);
    std::vector<cplx> fk(nk);
    for (int k = -K_; k <= K_; ++k) fk[static_cast<std::size_t>(k + K_)] = f_(n_ * (eta - k));
    const double norm = 1.0 / std::sqrt(beta_);
    const auto m = static_cast<long>(nx);
    std::vector<cplx> out(count);
    for (std::size_t ix = 0; ix < count; ++ix) {
      cplx acc{};
      for (int k = -K_; k <= K_; ++k) {
        const cplx v = fk[static_cast<std::size_t>(k + K_)];
        if (v == 0.0) continue;
        const long q = ((static_cast<long>(k) * static_cast<long>(ix)) % m + m) % m;
        acc += v * roots[static_cast<std::size_t>(q)];
      }
      out[ix] = acc * norm;
    }
    return out;
  }

 private:
  Fn f_;
  double beta_;
  double n_;
  int K_;
};

/// K such that |N (eta - k)| > radius for |k| > K and eta in [-1, 1].
inline int truncation_for_radius(double radius, double beta) {
  return static_cast<int>(std::ceil(radius * beta)) + 2;
}

/// Truncation found by probing: the smallest K beyond which every probed
/// term is below kZakTermCutoff.  Throws with the first violating k past
/// kMaxZakTruncation.
inline int probe_truncation(const std::function<cplx(double)>& f, double beta) {
  const double n = 1.0 / beta;
  auto term = [&](int k) {
    double worst = 0.0;
    for (int q = 0; q <= 32; ++q) {
      const double eta = q / 32.0;
      worst = std::max({worst, std::abs(f(n * (eta - k))), std::abs(f(n * (eta + k)))});
    }
    return worst;
  };
  int last = 0;
  for (int k = 1; k <= kMaxZakTruncation; ++k)
    if (term(k) >= kZakTermCutoff) last = k;
  const int beyond = kMaxZakTruncation + 1;
  if (const double t = term(beyond); t >= kZakTermCutoff)
    throw std::domain_error("insufficient decay for the Zak sum: |f| = " + format_g(t) + " at k = " +
                            std::to_string(beyond));
  return last + 1;
}

enum class ZakDomain { Time, Frequency };

/// Function and truncation for Z_beta applied to phi (Time) or phihat (Frequency).
inline ZakEvaluator zak_evaluator(const Window& w, double beta, ZakDomain domain) {
  (void)redundancy_of(beta);
  if (domain == ZakDomain::Time) {
    if (w.has_closed_form_time()) {
      if (auto r = w.time_effective_radius(kZakTermCutoff))
        return ZakEvaluator([w](double t) { return w.time(t); }, beta, truncation_for_radius(*r, beta));
      std::function<cplx(double)> fn = [w](double t) { return w.time(t); };
      return ZakEvaluator(fn, beta, probe_truncation(fn, beta));
    }
    throw std::domain_error(std::string("no time-domain profile with certified decay for window kind ") +
                            to_string(w.kind()));
  }
  const double r = truncation_radius(w);
  return ZakEvaluator([w](double xi) { return w.hat(xi); }, beta, truncation_for_radius(r, beta));
}

/// Samples Z_beta of an evaluator on the closed grid.
inline ZakGrid zak_transform(const ZakEvaluator& z, std::size_t nx, std::size_t ny) {
  require_zak_sizes(nx, ny);
  const auto roots = roots_of_unity(nx);
  std::vector<cplx> values((nx + 1) * (ny + 1));
  parallel_for(ny + 1, [&](std::size_t iy) {
    const auto r = z.row(static_cast<double>(iy) / static_cast<double>(ny), nx, nx + 1, roots);
    for (std::size_t ix = 0; ix <= nx; ++ix) values[ix * (ny + 1) + iy] = r[ix];
  });
  return ZakGrid(z.beta(), nx, ny, z.truncation_k(), std::move(values));
}

inline ZakGrid zak_transform(const Window& w, double beta, std::size_t nx = kDefaultZakN,
                             std::size_t ny = kDefaultZakN, ZakDomain domain = ZakDomain::Time) {
  return zak_transform(zak_evaluator(w, beta, domain), nx, ny);
}

/// Zak transform of sampled data, zero outside the sample range.  The data
/// must have decayed to kSampleTrimFloor at both ends.
inline ZakGrid zak_transform(const SampledFunction& f, double beta, std::size_t nx = kDefaultZakN,
                             std::size_t ny = kDefaultZakN) {
  const double n = 1.0 / beta;
  const double last = f.lo() + f.spacing() * static_cast<double>(f.size() - 1);
  for (const auto& [edge, value] : {std::pair{f.lo(), f[0]}, std::pair{last, f[f.size() - 1]}}) {
    if (std::abs(value) > kSampleTrimFloor)
      throw std::domain_error("insufficient decay for the Zak sum: |f| = " + format_g(std::abs(value)) +
                              " at k = " + std::to_string(static_cast<long>(std::ceil(std::abs(edge) / n))));
  }
  const double radius = std::max(std::abs(f.lo()), std::abs(last));
  ZakEvaluator z([f](double t) { return interpolate(f, t); }, beta, truncation_for_radius(radius, beta));
  return zak_transform(z, nx, ny);
}

/// Maximum of |Z(1, eta) - Z(0, eta)| and |Z(x, 1) - e^{2 pi i x} Z(x, 0)|.
inline double quasi_periodicity_check(const ZakGrid& z) {
  double worst = 0.0;
  for (std::size_t iy = 0; iy <= z.ny(); ++iy) worst = std::max(worst, std::abs(z.at(z.nx(), iy) - z.at(0, iy)));
  for (std::size_t ix = 0; ix <= z.nx(); ++ix) {
    const cplx phase = std::polar(1.0, kTwoPi * z.x(ix));
    worst = std::max(worst, std::abs(z.at(ix, z.ny()) - phase * z.at(ix, 0)));
  }
  return worst;
}

/// max |Z(-x mod 1, eta) - conj Z(x, eta)|.
inline double conjugate_symmetry_residual(const ZakGrid& z) {
  double worst = 0.0;
  for (std::size_t ix = 0; ix <= z.nx(); ++ix)
    for (std::size_t iy = 0; iy <= z.ny(); ++iy)
      worst = std::max(worst, std::abs(z.at(z.nx() - ix, iy) - std::conj(z.at(ix, iy))));
  return worst;
}

/// Product Simpson weights on the open nx by ny grid (periodic in both variables).
inline double integrate_unit_square(const std::vector<double>& vals, std::size_t nx, std::size_t ny) {
  const auto wx = simpson_weights(nx, 1.0 / static_cast<double>(nx));
  const auto wy = simpson_weights(ny, 1.0 / static_cast<double>(ny));
  std::vector<double> terms(nx * ny);
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t iy = 0; iy < ny; ++iy) terms[ix * ny + iy] = wx[ix] * wy[iy] * vals[ix * ny + iy];
  return pairwise_sum(terms);
}

/// int_0^1 int_0^1 |Z|^2.
inline double zak_norm_sq(const ZakGrid& z) {
  std::vector<double> sq(z.nx() * z.ny());
  for (std::size_t ix = 0; ix < z.nx(); ++ix)
    for (std::size_t iy = 0; iy < z.ny(); ++iy) sq[ix * z.ny() + iy] = std::norm(z.at(ix, iy));
  return integrate_unit_square(sq, z.nx(), z.ny());
}

/// f(N (eta + n)) for |n| < nx/4 and eta on the grid, by x-quadrature.
/// The output grid starts at -N nx/4 with spacing N/ny.
inline SampledFunction zak_inverse(const ZakGrid& z, double qp_tol = kQuasiPeriodicityTol) {
  if (const double r = quasi_periodicity_check(z); !(r <= qp_tol))
    throw std::invalid_argument("zak_inverse: quasi-periodicity residual " + format_g(r) + " exceeds " +
                                format_g(qp_tol));
  const std::size_t nx = z.nx();
  const std::size_t ny = z.ny();
  const long quarter = static_cast<long>(nx / 4);
  const double n_factor = 1.0 / z.beta();
  const auto w = simpson_weights(nx, 1.0 / static_cast<double>(nx));
  const auto roots = roots_of_unity(nx);
  const auto count_n = static_cast<std::size_t>(2 * quarter);
  const double lo = -n_factor * static_cast<double>(quarter);
  const GridSpec grid{lo, lo + n_factor * static_cast<double>(count_n), count_n * ny};
  std::vector<cplx> out(grid.n);
  const double scale = std::sqrt(z.beta());
  const auto m = static_cast<long>(nx);
  parallel_for(count_n, [&](std::size_t in) {
    const long n = static_cast<long>(in) - quarter;
    std::vector<cplx> terms(nx);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const long q = ((n * static_cast<long>(ix)) % m + m) % m;
        terms[ix] = w[ix] * roots[static_cast<std::size_t>(q)] * z.at(ix, iy);
      }
      out[in * ny + iy] = scale * pairwise_sum(terms);
    }
  });
  return SampledFunction(grid, std::move(out));
}

// ---------------------------------------------------------------------------
// Lemma-level identities
// ---------------------------------------------------------------------------

/// Maximum error over a test grid of the two identities relating Z_beta phi
/// and Z_beta phihat (N = 1/beta, sums over j = 0..N^2 - 1):
///   Z phi(x, xi)    = beta e^{2 pi i xi x} sum_j e^{2 pi i xi j} Z phihat(-N^2 xi, (x + j)/N^2)
///   Z phihat(x, xi) = beta e^{2 pi i xi x} sum_j e^{2 pi i xi j} Z phi(N^2 xi, -(x + j)/N^2)
inline double zak_fourier_relation_check(const ZakEvaluator& z_phi, const ZakEvaluator& z_hat, double beta,
                                         std::size_t points = 12) {
  const int n = redundancy_of(beta);
  const int n2 = n * n;
  double worst = 0.0;
  for (std::size_t a = 0; a < points; ++a) {
    for (std::size_t b = 0; b < points; ++b) {
      const double x = (static_cast<double>(a) + 0.371) / static_cast<double>(points);
      const double xi = (static_cast<double>(b) + 0.613) / static_cast<double>(points);
      cplx s1{};
      cplx s2{};
      for (int j = 0; j < n2; ++j) {
        const cplx ph = std::polar(1.0, kTwoPi * xi * j);
        s1 += ph * z_hat.at(-n2 * xi, (x + j) / n2);
        s2 += ph * z_phi.at(n2 * xi, -(x + j) / n2);
      }
      const cplx pre = beta * std::polar(1.0, kTwoPi * xi * x);
      worst = std::max(worst, std::abs(z_phi.at(x, xi) - pre * s1));
      worst = std::max(worst, std::abs(z_hat.at(x, xi) - pre * s2));
    }
  }
  return worst;
}

inline double zak_fourier_relation_check(const Window& w, double beta, std::size_t points = 12) {
  (void)redundancy_of(beta);
  return zak_fourier_relation_check(zak_evaluator(w, beta, ZakDomain::Time),
                                    zak_evaluator(w, beta, ZakDomain::Frequency), beta, points);
}

// ---------------------------------------------------------------------------
// Admissibility and construction
// ---------------------------------------------------------------------------

namespace detail {

/// |Z(x, eta - shift)|^2 on the grid, rows ix = 0..cx-1, columns iy = 0..cy-1.
inline std::vector<double> shifted_energy(const ZakEvaluator& z, double shift, std::size_t nx, std::size_t ny,
                                          std::size_t cx, std::size_t cy, const std::vector<cplx>& roots) {
  std::vector<double> out(cx * cy);
  parallel_for(cy, [&](std::size_t iy) {
    const auto r = z.row(static_cast<double>(iy) / static_cast<double>(ny) - shift, nx, cx, roots);
    for (std::size_t ix = 0; ix < cx; ++ix) out[ix * cy + iy] = std::norm(r[ix]);
  });
  return out;
}

/// sum_{r=0}^{N-1} |Z(x, eta - r/N)|^2 on a cx by cy grid.
inline std::vector<double> shift_energy_sum(const ZakEvaluator& z, int n, std::size_t nx, std::size_t ny,
                                            std::size_t cx, std::size_t cy) {
  const auto roots = roots_of_unity(nx);
  std::vector<double> sum(cx * cy, 0.0);
  for (int r = 0; r < n; ++r) {
    const auto e = shifted_energy(z, static_cast<double>(r) / n, nx, ny, cx, cy, roots);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += e[i];
  }
  return sum;
}

inline void require_real_seed(const Window& g) {
  if (!g.has_closed_form_time() || g.kind() != WindowKind::Gaussian)
    throw std::invalid_argument(std::string("seed must be a real-valued time profile with certified decay; got ") +
                                to_string(g.kind()));
}

}  // namespace detail

struct Admissibility {
  double min_value = 0.0;
  double x = 0.0;
  double eta = 0.0;
  bool admissible = false;
};

/// Grid minimum of sum_{r=0}^{N-1} |Z_beta g(x, eta - r/N)|^2.
inline Admissibility seed_admissibility(const Window& g, double beta, std::size_t nx = kDefaultZakN,
                                        std::size_t ny = kDefaultZakN,
                                        double threshold = kAdmissibilityThreshold) {
  detail::require_real_seed(g);
  require_zak_sizes(nx, ny);
  const int n = redundancy_of(beta);
  const auto z = zak_evaluator(g, beta, ZakDomain::Time);
  const auto d = detail::shift_energy_sum(z, n, nx, ny, nx, ny);
  Admissibility a;
  a.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t iy = 0; iy < ny; ++iy)
      if (d[ix * ny + iy] < a.min_value) {
        a.min_value = d[ix * ny + iy];
        a.x = static_cast<double>(ix) / static_cast<double>(nx);
        a.eta = static_cast<double>(iy) / static_cast<double>(ny);
      }
  a.admissible = a.min_value > threshold;
  return a;
}

/// Full output of the construction, for inspection.
struct Construction {
  Window window;
  ZakGrid psi;
  Admissibility admissibility;
  double psi_qp_residual = 0.0;
  double psi_symmetry_residual = 0.0;
  double max_imag = 0.0;
};

/// Drops leading and trailing samples below `floor`, keeping a margin for
/// the interpolation stencil.
inline SampledFunction trim_tails(const SampledFunction& f, double floor, std::size_t margin = 8) {
  std::size_t first = f.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) < floor) continue;
    first = std::min(first, i);
    last = std::max(last, i);
  }
  if (first > last) return f;
  first = first > margin ? first - margin : 0;
  last = std::min(f.size() - 1, last + margin);
  const std::size_t n = last - first + 1;
  const double h = f.spacing();
  const double lo = f.point(first);
  std::vector<cplx> v(f.values().begin() + static_cast<long>(first), f.values().begin() + static_cast<long>(last + 1));
  return SampledFunction(GridSpec{lo, lo + h * static_cast<double>(n), n}, std::move(v));
}

/// G = Z_beta g, Psi = beta^{-1/2} G / sqrt(sum_r |G(x, eta - r/N)|^2), phihat = Z^{-1} Psi.
inline Construction construct(const Window& g, double beta, std::size_t nx = kDefaultZakN,
                              std::size_t ny = kDefaultZakN) {
  detail::require_real_seed(g);
  require_zak_sizes(nx, ny);
  const int n = redundancy_of(beta);
  const auto zg = zak_evaluator(g, beta, ZakDomain::Time);
  const ZakGrid G = zak_transform(zg, nx, ny);
  const auto d = detail::shift_energy_sum(zg, n, nx, ny, nx + 1, ny + 1);

  Admissibility adm;
  adm.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t iy = 0; iy < ny; ++iy)
      if (d[ix * (ny + 1) + iy] < adm.min_value) {
        adm.min_value = d[ix * (ny + 1) + iy];
        adm.x = static_cast<double>(ix) / static_cast<double>(nx);
        adm.eta = static_cast<double>(iy) / static_cast<double>(ny);
      }
  adm.admissible = adm.min_value > kAdmissibilityThreshold;
  if (!adm.admissible)
    throw std::domain_error("seed is not admissible: min energy " + format_g(adm.min_value) + " at (" +
                            format_g(adm.x) + ", " + format_g(adm.eta) + ")");

  std::vector<cplx> psi_vals(G.values().size());
  const double inv_sqrt_beta = 1.0 / std::sqrt(beta);
  for (std::size_t i = 0; i < psi_vals.size(); ++i) psi_vals[i] = inv_sqrt_beta * G.values()[i] / std::sqrt(d[i]);
  ZakGrid psi(beta, nx, ny, G.truncation_k(), std::move(psi_vals));

  const double qp = quasi_periodicity_check(psi);
  if (!(qp <= kQuasiPeriodicityTol))
    throw std::domain_error("normalized Zak function lost quasi-periodicity: residual " + format_g(qp));
  const double sym = conjugate_symmetry_residual(psi);

  const auto raw = zak_inverse(psi);
  double max_imag = 0.0;
  std::vector<cplx> real_vals(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    max_imag = std::max(max_imag, std::abs(raw[i].imag()));
    real_vals[i] = raw[i].real();
  }
  const auto trimmed = trim_tails(SampledFunction(raw.grid(), std::move(real_vals)), kSampleTrimFloor);
  const double seed_scale = std::get<GaussianParams>(g.params()).scale;
  Window w(ZakConstructedParams{beta, seed_scale, nx, ny}, 1.0, std::nullopt, trimmed);
  return Construction{std::move(w), std::move(psi), adm, qp, sym, max_imag};
}

inline Window construct_from_seed(const Window& g, double beta, std::size_t nx = kDefaultZakN,
                                  std::size_t ny = kDefaultZakN) {
  return construct(g, beta, nx, ny).window;
}

/// max |sum_{r=0}^{N-1} |Z_beta phihat(x, eta - r/N)|^2 - 1/beta| over the grid.
inline double dfc_check(const Window& w, double beta, std::size_t nx = kDefaultZakN,
                        std::size_t ny = kDefaultZakN) {
  require_zak_sizes(nx, ny);
  const int n = redundancy_of(beta);
  const auto z = zak_evaluator(w, beta, ZakDomain::Frequency);
  const auto d = detail::shift_energy_sum(z, n, nx, ny, nx, ny);
  double worst = 0.0;
  for (double v : d) worst = std::max(worst, std::abs(v - 1.0 / beta));
  return worst;
}

/// For each starting shift r0, integrates
///   sum_{l=r0}^{r0+N-1} |G(x, eta - l/N)|^2 / sum_{r=0}^{N-1} |G(x, eta - r/N)|^2
/// over the unit square and returns the largest deviation from 1.
inline double translation_average_identity(const Window& g, double beta, std::size_t nx = kDefaultZakN,
                                           std::size_t ny = kDefaultZakN) {
  detail::require_real_seed(g);
  require_zak_sizes(nx, ny);
  const int n = redundancy_of(beta);
  const auto z = zak_evaluator(g, beta, ZakDomain::Time);
  const auto roots = roots_of_unity(nx);
  std::vector<std::vector<double>> e;
  for (int l = 0; l <= 2 * n - 2; ++l)
    e.push_back(detail::shifted_energy(z, static_cast<double>(l) / n, nx, ny, nx, ny, roots));
  std::vector<double> den(nx * ny, 0.0);
  for (int r = 0; r < n; ++r)
    for (std::size_t i = 0; i < den.size(); ++i) den[i] += e[static_cast<std::size_t>(r)][i];
  double worst = 0.0;
  for (int r0 = 0; r0 < n; ++r0) {
    std::vector<double> ratio(nx * ny, 0.0);
    for (int l = r0; l < r0 + n; ++l)
      for (std::size_t i = 0; i < ratio.size(); ++i) ratio[i] += e[static_cast<std::size_t>(l)][i];
    for (std::size_t i = 0; i < ratio.size(); ++i) ratio[i] /= den[i];
    worst = std::max(worst, std::abs(integrate_unit_square(ratio, nx, ny) - 1.0));
  }
  return worst;
}

struct ObstructionRow {
  std::size_t seed_index = 0;
  double beta = 0.0;
  double norm_sq = 0.0;
  double required = 0.0;
  bool onb_possible = false;
};

/// Norm of each constructed window against the ONB requirement 1/(2 beta).
inline std::vector<ObstructionRow> onb_obstruction_report(const std::vector<Window>& seeds,
                                                          const std::vector<double>& betas,
                                                          std::size_t nx = kDefaultZakN,
                                                          std::size_t ny = kDefaultZakN, double tol = 1e-6) {
  std::vector<ObstructionRow> rows;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (double beta : betas) {
      const Window w = construct_from_seed(seeds[s], beta, nx, ny);
      const double nrm = window_l2_norm(w);
      ObstructionRow row{s, beta, nrm * nrm, 1.0 / (2.0 * beta), false};
      row.onb_possible = std::abs(row.norm_sq - row.required) < tol;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace wfl

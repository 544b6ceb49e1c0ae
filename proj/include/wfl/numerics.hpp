#pragma once

// Shared quadrature, sampling and Fourier-evaluation utilities.
//
// All sampled functions live on half-open uniform grids [lo, hi) with
// spacing (hi - lo) / n.  Quadrature closes the grid periodically: the
// (absent) sample at hi is taken equal to the sample at lo.  That is exact
// for the two kinds of integrand this library produces, periodic ones
// (Zak-domain integrals over the unit square) and ones that vanish at both
// ends of their grid (compactly supported or decayed frequency profiles).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace wfl {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform half-open grid lo + i * spacing, i = 0 .. n-1.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  [[nodiscard]] double spacing() const { return (hi - lo) / static_cast<double>(n); }
  [[nodiscard]] double point(std::size_t i) const {
    return lo + static_cast<double>(i) * spacing();
  }
  [[nodiscard]] double length() const { return hi - lo; }

  void validate() const {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 samples");
    if (!(hi > lo)) throw std::invalid_argument("grid requires hi > lo");
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("grid bounds must be finite");
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Complex samples of a function on a GridSpec.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(GridSpec grid, std::vector<cplx> values)
      : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.n)
      throw std::invalid_argument("sample count does not match grid size");
  }

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] double lo() const { return grid_.lo; }
  [[nodiscard]] double hi() const { return grid_.hi; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double spacing() const { return grid_.spacing(); }
  [[nodiscard]] double point(std::size_t i) const { return grid_.point(i); }
  [[nodiscard]] std::span<const cplx> values() const { return values_; }
  [[nodiscard]] const cplx& operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  template <typename F>
  static SampledFunction sample(const GridSpec& grid, F&& fn) {
    grid.validate();
    std::vector<cplx> v(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = cplx(fn(grid.point(i)));
    return SampledFunction(grid, std::move(v));
  }

  friend bool operator==(const SampledFunction&, const SampledFunction&) = default;

 private:
  GridSpec grid_{};
  std::vector<cplx> values_{2};
};

// ---------------------------------------------------------------------------
// Deterministic reductions and worker partitioning
// ---------------------------------------------------------------------------

/// Pairwise (cascade) summation; the result depends only on the input order.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
  constexpr std::size_t kBlock = 16;
  if (xs.size() <= kBlock) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs));
}

/// Worker count, capped by the WFL_THREADS environment variable.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WFL_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

/// Runs fn(i) for i in [0, count), partitioned into contiguous blocks.
/// Callers write per-index results and reduce afterwards, so the outcome is
/// independent of the partition.
template <typename F>
void parallel_for(std::size_t count, F&& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Composite Simpson weights for a periodically closed grid of n samples
/// with spacing h.  Even n uses the 2/4 alternating pattern.  Odd n splices
/// in one Simpson 3/8 panel; the weights are averaged with the mirrored
/// placement so that w[i] == w[n - i].
inline std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n < 2) throw std::invalid_argument("simpson_weights: n < 2");
  std::vector<double> w(n, 0.0);
  if (n % 2 == 0) {
    for (std::size_t i = 0; i < n; ++i) w[i] = (i % 2 == 0 ? 2.0 : 4.0) * h / 3.0;
    return w;
  }
  if (n == 3) {
    // a single 3/8 panel, closing node shares weight with node 0
    w = {2.0 * 3.0 * h / 8.0, 9.0 * h / 8.0, 9.0 * h / 8.0};
    return w;
  }
  // closed-node weights, index n aliases index 0
  auto place = [n, h](bool panel_first) {
    std::vector<double> c(n + 1, 0.0);
    const std::size_t s0 = panel_first ? 3 : 0;          // Simpson start
    const std::size_t s1 = panel_first ? n : n - 3;      // Simpson end
    for (std::size_t i = s0; i <= s1; ++i) {
      double wi = (i == s0 || i == s1) ? 1.0 : ((i - s0) % 2 == 1 ? 4.0 : 2.0);
      c[i] += wi * h / 3.0;
    }
    const std::size_t p0 = panel_first ? 0 : n - 3;
    const double k38[4] = {3.0, 9.0, 9.0, 3.0};
    for (std::size_t q = 0; q < 4; ++q) c[p0 + q] += k38[q] * h / 8.0;
    c[0] += c[n];
    c.pop_back();
    return c;
  };
  auto a = place(false);
  auto b = place(true);
  for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 * (a[i] + b[i]);
  return w;
}

/// Composite Simpson approximation of the integral over [lo, hi).
inline cplx integrate_uniform(const SampledFunction& f) {
  const auto w = simpson_weights(f.size(), f.spacing());
  std::vector<cplx> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = w[i] * f[i];
  return pairwise_sum(terms);
}

/// Quadrature of raw samples on an implicit grid of spacing h.
inline cplx integrate_samples(std::span<const cplx> values, double h) {
  const auto w = simpson_weights(values.size(), h);
  std::vector<cplx> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = w[i] * values[i];
  return pairwise_sum(terms);
}

inline double integrate_samples(std::span<const double> values, double h) {
  const auto w = simpson_weights(values.size(), h);
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = w[i] * values[i];
  return pairwise_sum(terms);
}

/// <f, g> = integral of f * conj(g).
inline cplx inner_product_grid(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.grid() == g.grid()))
    throw std::invalid_argument("inner_product_grid: mismatched grids");
  const auto w = simpson_weights(f.size(), f.spacing());
  std::vector<cplx> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = w[i] * f[i] * std::conj(g[i]);
  return pairwise_sum(terms);
}

inline double l2_norm_sq(const SampledFunction& f) {
  return std::real(inner_product_grid(f, f));
}

// ---------------------------------------------------------------------------
// Inverse Fourier transform by quadrature
// ---------------------------------------------------------------------------

/// Largest admissible spacing * |x| before the quadrature kernel aliases.
inline constexpr double kDefaultAliasingBound = 0.25;

/// Samples of x -> integral hat(w) e^{2 pi i x w} dw on x_grid.
inline SampledFunction inverse_fourier_samples(const SampledFunction& hat, const GridSpec& x_grid,
                                               double aliasing_bound = kDefaultAliasingBound) {
  x_grid.validate();
  const double xmax = std::max(std::abs(x_grid.lo), std::abs(x_grid.hi));
  if (hat.spacing() * xmax > aliasing_bound)
    throw std::invalid_argument("inverse_fourier_samples: frequency grid too coarse for x-range (" +
                                std::to_string(hat.spacing() * xmax) + " > " +
                                std::to_string(aliasing_bound) + ")");
  const auto w = simpson_weights(hat.size(), hat.spacing());
  std::vector<cplx> weighted(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) weighted[i] = w[i] * hat[i];

  std::vector<cplx> out(x_grid.n);
  parallel_for(x_grid.n, [&](std::size_t q) {
    const double x = x_grid.point(q);
    std::vector<cplx> terms(hat.size());
    for (std::size_t i = 0; i < hat.size(); ++i)
      terms[i] = weighted[i] * std::polar(1.0, kTwoPi * x * hat.point(i));
    out[q] = pairwise_sum(terms);
  });
  return SampledFunction(x_grid, std::move(out));
}

/// Single-point variant of inverse_fourier_samples.
inline cplx inverse_fourier_at(const SampledFunction& hat, double x,
                               double aliasing_bound = kDefaultAliasingBound) {
  const double xmax = std::abs(x);
  if (hat.spacing() * xmax > aliasing_bound)
    throw std::invalid_argument("inverse_fourier_at: frequency grid too coarse for x");
  const auto w = simpson_weights(hat.size(), hat.spacing());
  std::vector<cplx> terms(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i)
    terms[i] = w[i] * hat[i] * std::polar(1.0, kTwoPi * x * hat.point(i));
  return pairwise_sum(terms);
}

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

/// Local Lagrange interpolation of the given order on the uniform grid.
/// Zero outside [lo, lo + (n-1) h]; the stencil is clipped near the ends.
inline cplx interpolate(const SampledFunction& f, double x, int order = 6) {
  const double h = f.spacing();
  const double last = f.lo() + h * static_cast<double>(f.size() - 1);
  if (x < f.lo() || x > last) return {0.0, 0.0};
  const double p = (x - f.lo()) / h;
  const auto n = static_cast<long>(f.size());
  long nearest = std::lround(p);
  if (std::abs(p - static_cast<double>(nearest)) < 1e-13) return f[static_cast<std::size_t>(nearest)];

  long first = static_cast<long>(std::floor(p)) - (order - 1) / 2;
  first = std::clamp(first, 0L, std::max(0L, n - 1 - order));
  const long count = std::min<long>(order + 1, n - first);

  cplx acc{0.0, 0.0};
  for (long a = 0; a < count; ++a) {
    double basis = 1.0;
    const double ta = static_cast<double>(first + a);
    for (long b = 0; b < count; ++b) {
      if (b == a) continue;
      const double tb = static_cast<double>(first + b);
      basis *= (p - tb) / (ta - tb);
    }
    acc += basis * f[static_cast<std::size_t>(first + a)];
  }
  return acc;
}

}  // namespace wfl

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "wfl/frame_conditions.hpp"

using namespace wfl;
using Catch::Approx;

namespace {

// Brute-force sums over a wide m range, independent of the truncation logic.
cplx phi_oracle(const Window& w, double alpha, double beta, int k, double xi) {
  cplx s{};
  for (int m = -80; m <= 80; ++m) s += w.hat(xi - alpha * m) * std::conj(w.hat(xi + k / beta - alpha * m));
  return s;
}

cplx delta_oracle(const Window& w, double alpha, double beta, int k, double xi) {
  cplx s{};
  for (int m = -80; m <= 80; ++m)
    s += ((m % 2 == 0) ? 1.0 : -1.0) * w.hat(xi + alpha * m) * std::conj(w.hat(xi + (k + 0.5) / beta - alpha * m));
  return s;
}

ScanOptions opts(std::size_t n = 256, double tol = 1e-8) {
  ScanOptions o;
  o.grid_n = n;
  o.tol = tol;
  return o;
}

}  // namespace

TEST_CASE("phi_k and delta_k match brute-force sums", "[frame]") {
  const Window g = normalized_gaussian(1.0);
  const Window e = example2_window(0.2);
  for (double beta : {0.5, 1.0 / 3.0, 0.2}) {
    const LatticeParams lat(1.0, beta);
    for (int k = -2; k <= 2; ++k)
      for (double xi : {-0.7, -0.11, 0.0, 0.37, 0.92}) {
        CHECK(std::abs(phi_k(g, lat, k, xi) - phi_oracle(g, 1.0, beta, k, xi)) < 1e-15);
        CHECK(std::abs(delta_k(g, lat, k, xi) - delta_oracle(g, 1.0, beta, k, xi)) < 1e-15);
        CHECK(std::abs(phi_k(e, lat, k, xi) - phi_oracle(e, 1.0, beta, k, xi)) < 1e-15);
        CHECK(std::abs(delta_k(e, lat, k, xi) - delta_oracle(e, 1.0, beta, k, xi)) < 1e-15);
      }
  }
}

TEST_CASE("indicator window at alpha = 1, beta = 1/2 is exact", "[frame]") {
  const Window w = indicator_window(1.0);
  const LatticeParams lat(1.0, 0.5);
  const auto rep = scan_frame_conditions(w, lat, opts(1024));
  CHECK(rep.max_phi0_dev == 0.0);
  CHECK(rep.max_phik_dev == 0.0);
  CHECK(rep.max_deltak_dev == 0.0);
  CHECK(rep.norm_sq == Approx(1.0).epsilon(1e-14));
  CHECK(rep.tight_gabor.pass);
  CHECK(rep.parseval_wilson.pass);
  CHECK(rep.onb.pass);
  CHECK(rep.onb_reasons.empty());
  CHECK(rep.consistent());
  CHECK(rep.phi_samples.size() == static_cast<std::size_t>(2 * rep.k_range + 1) * 1024);
}

TEST_CASE("smooth bump is Parseval when 1/(2 beta) is odd", "[frame]") {
  for (double beta : {1.0 / 6.0, 0.1, 1.0 / 14.0}) {
    const auto rep = scan_frame_conditions(example2_window(beta), LatticeParams(1.0, beta), opts());
    CHECK(rep.max_phi0_dev < 1e-15);
    CHECK(rep.max_phik_dev == 0.0);
    CHECK(rep.max_deltak_dev < 1e-15);
    CHECK(rep.parseval_wilson.pass);
    CHECK_FALSE(rep.onb.pass);
    REQUIRE(rep.onb_reasons.size() == 1);
    CHECK(rep.onb_reasons[0].rfind("norm_sq = 1 != 1/(2 beta)", 0) == 0);
  }
}

TEST_CASE("smooth bump at beta = 1/4 is tight but delta_0 does not vanish", "[frame]") {
  const Window w = example2_window(0.25);
  const LatticeParams lat(1.0, 0.25);
  // only m = 1 survives at xi = -1: -phihat(0)^2
  CHECK(std::abs(delta_k(w, lat, 0, -1.0) - cplx(-1.0)) < 1e-15);
  CHECK(std::abs(delta_oracle(w, 1.0, 0.25, 0, -1.0) - cplx(-1.0)) < 1e-15);
  const auto rep = scan_frame_conditions(w, lat, opts());
  CHECK(rep.tight_gabor.pass);
  CHECK(rep.max_deltak_dev == Approx(1.0));
  CHECK_FALSE(rep.parseval_wilson.pass);
  CHECK(rep.consistent());
  REQUIRE(rep.onb_reasons.size() == 2);
  CHECK(rep.onb_reasons[0] == "not Parseval");
}

TEST_CASE("gaussian cancellation depends on the parity of 1/(2 beta)", "[frame]") {
  const Window g = normalized_gaussian(1.0);
  ScanOptions o = opts(512, 1e-12);
  o.k_max = 2;
  CHECK(scan_frame_conditions(g, LatticeParams(1.0, 1.0 / 6.0), o).max_deltak_dev < 1e-15);
  CHECK(scan_frame_conditions(g, LatticeParams(1.0, 0.1), o).max_deltak_dev < 1e-15);
  CHECK(scan_frame_conditions(g, LatticeParams(1.0, 1.0 / 3.0), o).max_deltak_dev > 1e-4);
  CHECK(scan_frame_conditions(g, LatticeParams(1.0, 0.25), o).max_deltak_dev > 1e-4);
}

TEST_CASE("gaussian is not a tight frame", "[frame]") {
  const Window g = normalized_gaussian(1.0);
  const LatticeParams lat(1.0, 0.5);
  // Phi_0(0) = sqrt(2) sum_m e^{-2 pi m^2}
  double expect = 0.0;
  for (int m = -10; m <= 10; ++m) expect += std::sqrt(2.0) * std::exp(-2.0 * kPi * m * m);
  CHECK(std::real(phi_k(g, lat, 0, 0.0)) == Approx(expect).epsilon(1e-15));
  const auto rep = scan_frame_conditions(g, lat, opts());
  CHECK_FALSE(rep.tight_gabor.pass);
  CHECK_FALSE(rep.parseval_wilson.pass);
  CHECK(rep.max_phi0_dev == Approx(expect - 1.0).epsilon(1e-14));
  CHECK(rep.max_phi0_dev == Approx(0.4194954881).epsilon(1e-9));
  CHECK(rep.consistent());
}

TEST_CASE("xy inner products of a gaussian", "[frame]") {
  // integral sqrt2 e^{-pi xi^2} e^{-pi (xi + 2 a m)^2} = e^{-2 pi a^2 m^2}
  const Window g = normalized_gaussian(1.0);
  CHECK(std::real(xy_inner_product(g, LatticeParams(1.0, 0.5), 0, 1)) == Approx(-std::exp(-2.0 * kPi)).epsilon(1e-12));
  CHECK(std::real(xy_inner_product(g, LatticeParams(1.0, 0.5), 1, 1)) == Approx(std::exp(-2.0 * kPi)).epsilon(1e-12));
  CHECK(std::real(xy_inner_product(g, LatticeParams(0.5, 0.5), 0, 1)) == Approx(-std::exp(-kPi / 2.0)).epsilon(1e-12));
  CHECK(xy_max(g, LatticeParams(0.5, 0.5)) == Approx(std::exp(-kPi / 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(xy_inner_product(g, LatticeParams(1.0, 0.5), 0, 0), std::invalid_argument);
}

TEST_CASE("xy inner products vanish for the indicator", "[frame]") {
  CHECK(xy_max(indicator_window(1.0), LatticeParams(1.0, 0.5)) == 0.0);
}

TEST_CASE("onb check lists every failing clause", "[frame]") {
  FrameReport rep;
  rep.parseval_wilson = {true, 1e-8};
  rep.norm_sq = 1.0;
  rep.xy_max = 0.0;
  CHECK(onb_check(indicator_window(1.0), LatticeParams(1.0, 0.5), rep, 1e-8).onb);
  rep.parseval_wilson.pass = false;
  rep.xy_max = 0.5;
  const auto v = onb_check(indicator_window(1.0), LatticeParams(1.0, 0.25), rep, 1e-8);
  CHECK_FALSE(v.onb);
  REQUIRE(v.reasons.size() == 3);
  CHECK(v.reasons[1] == "norm_sq = 1 != 1/(2 beta) = 2");
  CHECK(v.reasons[2] == "max |Re <X,Y>| = 0.5 != 0");
}

TEST_CASE("perturbation breaks tightness", "[frame]") {
  const Window w = example2_window(0.25).perturbed(Perturbation{0.01, 0.3, 0.1});
  const auto rep = scan_frame_conditions(w, LatticeParams(1.0, 0.25), opts(1024));
  CHECK_FALSE(rep.tight_gabor.pass);
  // |phihat|^2 gains 2 * 0.01 * phihat(0.3) + 0.01^2 at xi = 0.3, where phihat = 1
  CHECK(rep.max_phi0_dev == Approx(0.0201).epsilon(1e-9));
}

TEST_CASE("scan options are validated", "[frame]") {
  CHECK_THROWS_AS(scan_frame_conditions(indicator_window(1.0), LatticeParams(1.0, 0.5), opts(32)), std::invalid_argument);
  CHECK_THROWS_AS(scan_frame_conditions(indicator_window(1.0), LatticeParams(1.0, 0.5), opts(64, 0.0)),
                  std::invalid_argument);
  ScanOptions o = opts();
  o.keep_samples = false;
  const auto rep = scan_frame_conditions(indicator_window(1.0), LatticeParams(1.0, 0.5), o);
  CHECK(rep.phi_samples.empty());
  CHECK(rep.delta_samples.empty());
}

TEST_CASE("default tolerance depends on the window kind", "[frame]") {
  CHECK(default_tolerance(example2_window(0.25)) == kDefaultClosedFormTol);
  CHECK(truncation_radius(example2_window(0.25)) == Approx(0.55));
  CHECK(truncation_radius(normalized_gaussian()) == Approx(std::sqrt(std::log(std::pow(2.0, 0.25) * 1e18) / kPi)));
}

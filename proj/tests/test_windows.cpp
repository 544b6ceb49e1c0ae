#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "wfl/windows.hpp"

using namespace wfl;
using Catch::Approx;

TEST_CASE("lattice parameters", "[windows]") {
  const LatticeParams lat(1.0, 0.25);
  CHECK(lat.inverse_beta() == 4.0);
  CHECK(lat.inverse_beta_integral());
  CHECK(lat.redundancy() == 4);
  CHECK(redundancy_of(1.0 / 3.0) == 3);
  CHECK_FALSE(LatticeParams(1.0, 0.3).inverse_beta_integral());
  CHECK_THROWS_AS(LatticeParams(1.0, 0.3).redundancy(), std::invalid_argument);
  CHECK_THROWS_AS(LatticeParams(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(LatticeParams(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("smooth step is complementary and flat at the ends", "[windows]") {
  for (double u : {0.01, 0.2, 0.5, 0.77, 0.99}) CHECK(smoothstep(u) + smoothstep(1.0 - u) == Approx(1.0).epsilon(1e-15));
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(0.5) == 0.5);
  CHECK(plateau_bump(0.0) == 1.0);
  CHECK(plateau_bump(1.0) == 0.0);
  CHECK(plateau_bump(-0.4) == plateau_bump(0.4));
}

TEST_CASE("transition function ramps on [1 - gamma, gamma]", "[windows]") {
  const TransitionParams t(0.6);
  CHECK(transition_function(t, 0.4) == 0.0);
  CHECK(transition_function(t, 0.6) == 1.0);
  CHECK(transition_function(t, 0.5) == 0.5);
  CHECK_THROWS_AS(TransitionParams(0.5), std::invalid_argument);
  CHECK_THROWS_AS(TransitionParams(1.0), std::invalid_argument);
}

TEST_CASE("window kind names round trip", "[windows]") {
  for (auto k : {WindowKind::Indicator, WindowKind::SmoothBump, WindowKind::Gaussian, WindowKind::ZakConstructed})
    CHECK(window_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(window_kind_from_string("hann"), std::invalid_argument);
}

TEST_CASE("indicator window", "[windows]") {
  const Window w = indicator_window(1.0);
  CHECK(w.hat(0.0) == 1.0);
  CHECK(w.hat(0.999) == 1.0);
  CHECK(w.hat(1.0) == 0.0);
  CHECK(w.hat(-0.001) == 0.0);
  CHECK(*w.support_radius() == 1.0);
  CHECK(window_l2_norm(w) == Approx(1.0).epsilon(1e-14));
  // phi(x) = (e^{2 pi i x} - 1) / (2 pi i x)
  CHECK(std::abs(w.time(0.0) - 1.0) < 1e-15);
  CHECK(std::abs(w.time(0.5) - cplx(0.0, 2.0 / kPi)) < 1e-15);
  CHECK(std::abs(w.time(1.0)) < 1e-15);
  CHECK_THROWS_AS(indicator_window(0.0), std::invalid_argument);
}

TEST_CASE("smooth bump window satisfies the squared partition of unity", "[windows]") {
  const Window w = example2_window(0.25);
  const auto& p = std::get<SmoothBumpParams>(w.params());
  CHECK(p.eps_prime == Approx(0.1));
  CHECK(p.gamma == Approx(0.55));
  for (double xi = 0.0; xi <= 1.0; xi += 1.0 / 64.0)
    CHECK(std::norm(w.hat(xi)) + std::norm(w.hat(xi - 1.0)) == Approx(1.0).epsilon(1e-15));
  CHECK(w.hat(0.55) == 0.0);
  CHECK(w.hat(-0.56) == 0.0);
  CHECK(std::real(w.hat(0.0)) == Approx(1.0));
  CHECK(std::real(w.hat(0.3)) == Approx(std::real(w.hat(-0.3))).epsilon(1e-15));
  CHECK(window_l2_norm(w) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smooth bump parameter limits", "[windows]") {
  CHECK(default_eps_prime(0.25) == Approx(0.1));
  CHECK(default_eps_prime(1.0 / 3.0) == Approx(0.05));
  CHECK(default_eps_prime(0.05) == 0.5);
  CHECK_THROWS_AS(example2_window(0.5), std::invalid_argument);
  CHECK_THROWS_AS(example2_window(0.25, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(example2_window(0.25, 0.0), std::invalid_argument);
  CHECK_NOTHROW(example2_window(0.25, 0.9));
}

TEST_CASE("gaussian windows", "[windows]") {
  const Window g = gaussian_seed(1.0);
  CHECK(g.hat(0.0) == 1.0);
  CHECK(g.time(0.0) == 1.0);
  CHECK(window_l2_norm(g) * window_l2_norm(g) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  for (double s : {0.5, 1.0, 2.0}) CHECK(window_l2_norm(normalized_gaussian(s)) == Approx(1.0).epsilon(1e-13));
  CHECK_FALSE(g.support_radius());
  CHECK(g.effective_radius(1e-16) == Approx(std::sqrt(std::log(1e16) / kPi)));
  CHECK(*g.time_effective_radius(1e-16) == Approx(std::sqrt(std::log(1e16) / kPi)));
}

TEST_CASE("time samples agree with the closed form", "[windows]") {
  const Window g = normalized_gaussian(1.3);
  const GridSpec xs{-2.0, 2.0, 16};
  const auto closed = time_samples(g, xs);
  const auto quad = inverse_fourier_samples(sample_hat(g, 2048), xs);
  for (std::size_t i = 0; i < xs.n; ++i) CHECK(std::abs(closed[i] - quad[i]) < 1e-12);
}

TEST_CASE("perturbation widens the support and breaks closed forms", "[windows]") {
  const Window w = example2_window(0.25).perturbed(Perturbation{0.01, 0.3, 0.1});
  CHECK(std::real(w.hat(0.3)) == Approx(std::real(example2_window(0.25).hat(0.3)) + 0.01));
  CHECK(*w.support_radius() == Approx(0.55));
  CHECK(*indicator_window(1.0).perturbed(Perturbation{0.5, 1.5, 0.25}).support_radius() == Approx(1.75));
  CHECK_FALSE(normalized_gaussian().perturbed(Perturbation{0.1, 0.0, 0.1}).has_closed_form_time());
  CHECK_THROWS_AS(w.time(0.0), std::invalid_argument);
}

TEST_CASE("scaling multiplies the norm", "[windows]") {
  const Window w = example2_window(0.25).scaled(2.0);
  CHECK(w.gain() == 2.0);
  CHECK(window_l2_norm(w) == Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(example2_window(0.25).scaled(INFINITY), std::invalid_argument);
}

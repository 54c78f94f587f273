#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "expfun/errors.hpp"
#include "expfun/levy.hpp"
#include "expfun/montecarlo.hpp"
#include "expfun/symmetric.hpp"

using namespace expfun;

TEST_CASE("half negative moment") {
  CHECK(half_neg_moment(4.0) == 0.5);
  CHECK(half_neg_moment(1.0) == 1.0);
  CHECK(half_neg_moment(0.25) == 2.0);
  for (double t : {0.3, 1.7, 9.0}) {
    for (double c : {0.5, 3.0}) CHECK(half_neg_moment(c * t) == doctest::Approx(half_neg_moment(t) / std::sqrt(c)));
  }
}

TEST_CASE("compound Poisson half negative moment") {
  // Quadrature at 30 digits.
  CHECK(cp_half_neg_moment(1.0, 1.0, CpVariant::paper) == doctest::Approx(3.81488437648351).epsilon(1e-11));
  CHECK(cp_half_neg_moment(1.0, 1.0, CpVariant::laplace_derived) ==
        doctest::Approx(2.15231802765107).epsilon(1e-11));
  CHECK(cp_half_neg_moment(1.0, 1.0, CpVariant::paper) ==
        doctest::Approx(std::sqrt(std::numbers::pi) * cp_half_neg_moment(1.0, 1.0, CpVariant::laplace_derived)));
  CHECK(cp_half_neg_moment(1e-9, 1.0, CpVariant::laplace_derived) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(cp_half_neg_moment(1e-9, 4.0, CpVariant::laplace_derived) == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(cp_half_neg_moment(2.0, 3.0, CpVariant::laplace_derived) > 0.0);
  CHECK_THROWS_AS(cp_half_neg_moment(-1.0, 1.0, CpVariant::paper), DomainError);
}

TEST_CASE("half positive moment") {
  CHECK(half_pos_moment(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(half_pos_moment(0.0, 2.5) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-13));
  // (e^{psi t}/2) int_0^t e^{-psi s} s^{-1/2} ds at 30 digits.
  CHECK(half_pos_moment(0.125, 1.0) == doctest::Approx(1.08765303890430).epsilon(1e-12));
  CHECK(half_pos_moment(-0.7, 2.0) == doctest::Approx(0.610585259439).epsilon(1e-11));
  CHECK_THROWS_AS(half_pos_moment(1.0, 1000.0), OverflowGuard);
  CHECK(std::isfinite(half_pos_moment(1.0, 600.0)));
}

TEST_CASE("Laplace transform of the half positive moment") {
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double psi : {0.125, -0.3, 0.6}) {
    const double q = 2.0 * psi + 1.0;
    const double lhs = integrator.integrate([&](double t) { return std::exp(-q * t) * half_pos_moment(psi, t); }, 0.0,
                                           200.0, 1e-12);
    const double rhs = 0.5 / (q - psi) * std::sqrt(std::numbers::pi) / std::sqrt(q);
    CAPTURE(psi);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("Levy exponents") {
  const auto bm = SymmetricLevySpec::brownian(1.0);
  CHECK(bm.psi(0.5) == 0.125);
  CHECK(bm.psi(-0.5) == bm.psi(0.5));
  const auto cp = SymmetricLevySpec::compound_poisson(2.0, JumpLaw::normal(1.0));
  CHECK(cp.psi(1.5) == doctest::Approx(2.0 * (std::exp(1.125) - 1.0)));
  CHECK(cp.psi(-1.5) == cp.psi(1.5));
  const auto lap = SymmetricLevySpec::compound_poisson(1.0, JumpLaw::laplace(1.0));
  CHECK(lap.psi(0.5) == doctest::Approx(1.0 / 0.75 - 1.0));
  CHECK(std::isinf(lap.psi(1.0)));
  const auto uni = SymmetricLevySpec::compound_poisson(1.0, JumpLaw::uniform(2.0));
  CHECK(uni.psi(0.5) == doctest::Approx(std::sinh(1.0) / 1.0 - 1.0));
  CHECK_THROWS_AS(SymmetricLevySpec::compound_poisson(1.0, JumpLaw::exponential(1.0)), DomainError);
  CHECK(parse_jump_law("gamma:2,3").p2 == 3.0);
  CHECK(parse_jump_law("normal:0.5").p1 == 0.5);
  CHECK_THROWS_AS(parse_jump_law("cauchy:1"), DomainError);
  CHECK_THROWS_AS(parse_jump_law("normal:-1"), DomainError);
}

TEST_CASE("n - 1/2 moments") {
  CHECK(n_minus_half_moment({0.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double psi = 2.0 * u(rng) - 1.0;
    const double t = 0.2 + 3.0 * u(rng);
    CAPTURE(psi);
    CAPTURE(t);
    CHECK(n_minus_half_moment({psi}, t) == doctest::Approx(half_pos_moment(psi, t)).epsilon(1e-9));
  }
  // Brownian, Psi(k - 1/2) = (k - 1/2)^2 / 2; partial fractions of the
  // Laplace transform give the oracles below at 30 digits.
  const std::vector<double> psi = {0.125, 1.125, 3.125};
  CHECK(n_minus_half_moment({psi[0], psi[1]}, 1.0) == doctest::Approx(1.71318412617195544).epsilon(2e-8));
  CHECK(n_minus_half_moment(psi, 1.0) == doctest::Approx(4.22149498627110340).epsilon(1e-7));
  CHECK(1.5 * (half_pos_moment(1.125, 1.0) - half_pos_moment(0.125, 1.0)) ==
        doctest::Approx(1.71318412617195544).epsilon(1e-12));
}

TEST_CASE("convolution grid converges at second order") {
  const double exact = 1.71318412617195544;
  const double e1 = std::abs(n_minus_half_moment({0.125, 1.125}, 1.0, {0.0, 512}) - exact);
  const double e2 = std::abs(n_minus_half_moment({0.125, 1.125}, 1.0, {0.0, 1024}) - exact);
  const double e3 = std::abs(n_minus_half_moment({0.125, 1.125}, 1.0, {0.0, 2048}) - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.25));
  const auto curve = n_minus_half_curve({0.125, 1.125}, 2.0, 2048);
  CHECK(curve.size() == 2049);
  CHECK(curve[1024] == doctest::Approx(n_minus_half_moment({0.125, 1.125}, 1.0, {2.0, 2048})));
  CHECK_THROWS_AS(n_minus_half_moment({0.125}, 3.0, {2.0, 512}), GridError);
  CHECK_THROWS_AS(n_minus_half_curve({0.125}, 1.0, 2), GridError);
}

TEST_CASE("three-halves moment against Brownian Monte Carlo") {
  McControl ctrl;
  const auto est = mc_moment(LevySpec::brownian(1.0), 1.5, 1.0, 20000, ctrl);
  const double value = n_minus_half_moment({0.125, 1.125}, 1.0);
  CAPTURE(est.mean.real());
  CAPTURE(est.std_error);
  CHECK(std::abs(est.mean.real() - value) <= 3.0 * est.std_error + std::sqrt(std::ldexp(1.0, -12)));
}

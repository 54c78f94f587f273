#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "expfun/bernstein.hpp"
#include "expfun/errors.hpp"

using namespace expfun;

namespace {

std::vector<std::pair<const char*, BernsteinSpec>> catalog() {
  return {{"log1p", BernsteinSpec::log1p()},
          {"power", BernsteinSpec::power(0.5)},
          {"power_0.3", BernsteinSpec::power(0.3)},
          {"shifted_power", BernsteinSpec::shifted_power(0.5)},
          {"loglog", BernsteinSpec::loglog()},
          {"truncated_gamma", BernsteinSpec::truncated_gamma()},
          {"linear", BernsteinSpec::linear(1.0)},
          {"log1p_killed", BernsteinSpec::log1p(0.3)}};
}

BernsteinSpec gamma_density_custom() {
  CustomMeasure m;
  m.density = [](double y) { return std::exp(-y) / y; };
  m.analytic_bound = -1.0;
  return BernsteinSpec::custom(std::move(m));
}

}  // namespace

TEST_CASE("closed-form values") {
  CHECK(eval(BernsteinSpec::log1p(), 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(eval(BernsteinSpec::power(0.5), 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(deriv(BernsteinSpec::log1p(), 1.0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(deriv(BernsteinSpec::loglog(), 0.0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(deriv(BernsteinSpec::linear(1.0), 7.0, 2) == 0.0);
  CHECK(eval(BernsteinSpec::log1p(0.25), 0.0) == 0.25);
}

TEST_CASE("truncated gamma is log(1+x) minus the A correction") {
  const auto spec = BernsteinSpec::truncated_gamma();
  // A(x) = E1(1) - E1(x+1), E1(u) = -Ei(-u).
  for (double x : {0.1, 1.0, 3.0, 10.0}) {
    const double a = std::expint(-(x + 1.0)) - std::expint(-1.0);
    CHECK(eval(spec, x) == doctest::Approx(std::log1p(x) - a).epsilon(1e-11));
  }
}

TEST_CASE("custom measure reproduces log1p") {
  const auto spec = gamma_density_custom();
  for (double x : {0.05, 0.7, 3.0, 40.0}) {
    CHECK(eval(spec, x) == doctest::Approx(std::log1p(x)).epsilon(1e-10));
    CHECK(deriv(spec, x, 1) == doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-9));
    CHECK(deriv(spec, x, 2) == doctest::Approx(-1.0 / ((1.0 + x) * (1.0 + x))).epsilon(1e-8));
  }
  const cdouble z(0.5, 2.0);
  const cdouble v = eval(spec, z);
  CHECK(std::abs(v - std::log(1.0 + z)) < 1e-10);
  CHECK_THROWS_AS(eval(spec, cdouble(-1.5, 0.0)), DomainError);
}

TEST_CASE("shift") {
  CHECK(eval(shift(BernsteinSpec::log1p(), 1), 1.0) == doctest::Approx(std::log(1.5)).epsilon(1e-15));
  CHECK(eval(shift(BernsteinSpec::linear(1.0), 5), 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eval(shift(BernsteinSpec::power(0.5), 4), 0.0) == 0.0);
  for (const auto& [name, spec] : catalog()) {
    CAPTURE(name);
    const auto s3 = shift(spec, 3);
    CHECK(eval(s3, 0.0) == 0.0);
    CHECK(deriv(s3, 0.0, 1) == doctest::Approx(deriv(spec, 3.0, 1)).epsilon(1e-12));
  }
}

TEST_CASE("inverse") {
  CHECK(inverse(BernsteinSpec::log1p(), std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inverse(BernsteinSpec::power(0.5), 3.0) == doctest::Approx(9.0).epsilon(1e-12));
  const auto ll = BernsteinSpec::loglog();
  CHECK(inverse(ll, eval(ll, 10.0)) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(inverse(BernsteinSpec::log1p(), -0.1), RangeError);
  CHECK_THROWS_AS(inverse(BernsteinSpec::log1p(0.5), 0.5), RangeError);
}

TEST_CASE("analytic bounds") {
  CHECK(a_phi(BernsteinSpec::log1p()) == -1.0);
  CHECK(a_phi(BernsteinSpec::power(0.5)) == 0.0);
  CHECK(a_phi(BernsteinSpec::loglog()) == doctest::Approx(1.0 - std::numbers::e));
  CHECK(std::isinf(a_phi(BernsteinSpec::truncated_gamma())));
  CHECK(std::isinf(a_phi(BernsteinSpec::linear(2.0))));
  CHECK_THROWS_AS(eval(BernsteinSpec::log1p(), cdouble(-1.0, 0.5)), DomainError);
}

TEST_CASE("hypothesis checks") {
  const auto r = check_hypotheses(BernsteinSpec::log1p(), 1e6, 64);
  CHECK(r.all_pass());
  CHECK(r.last_ratio == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(r.max_ratio <= 2.0);
  const auto lin = check_hypotheses(BernsteinSpec::linear(1.0), 1e6, 64);
  CHECK(lin.all_pass());
  CHECK(lin.max_ratio == doctest::Approx(1.0));
  CHECK(check_hypotheses(BernsteinSpec::loglog(), 1e6, 64).all_pass());
  CHECK_FALSE(check_hypotheses(BernsteinSpec::linear(0.0, 1.0), 1e6, 64).all_pass());
}

TEST_CASE("Bernstein inequalities on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& [name, spec] : catalog()) {
    CAPTURE(name);
    const double phi0 = eval(spec, 0.0);
    CHECK(phi0 == spec.killing());
    for (int i = 0; i < 50; ++i) {
      const double x = 1e3 * unit(rng) + 1e-9;
      const double p = eval(spec, x);
      const double d1 = deriv(spec, x, 1);
      const double d2 = deriv(spec, x, 2);
      CAPTURE(x);
      CHECK(p > phi0);
      CHECK(d1 > 0.0);
      CHECK(d2 <= 1e-15 * d1);
      CHECK(x * d1 <= p * (1.0 + 1e-12));
      CHECK(2.0 * eval(spec, x / 2.0) >= p * (1.0 - 1e-12));
      CHECK(-d2 <= 2.0 * p / (x * x) * (1.0 + 1e-12));

      const double y = x * unit(rng);
      const double diff = p - eval(spec, y);
      CHECK((x - y) * d1 <= diff * (1.0 + 1e-9) + 1e-14);
      CHECK(diff <= (x - y) * deriv(spec, y, 1) * (1.0 + 1e-9) + 1e-14);

      const int k = 1 + static_cast<int>(20 * unit(rng));
      const double sx = 5.0 * unit(rng);
      CHECK(std::abs(eval(shift(spec, k), sx) - (eval(spec, sx + k) - eval(spec, double(k)))) <= 1e-12 * std::max(1.0, p));

      if (spec.family() != Family::linear || spec.drift() > 0.0) {
        CHECK(std::abs(inverse(spec, p) - x) <= 1e-9 * std::max(1.0, x));
      }

      const double a = 10.0 * unit(rng) + 1e-3;
      const double b = 20.0 * (unit(rng) - 0.5);
      CHECK(std::abs(deriv(spec, cdouble(a, b), 1)) <= deriv(spec, a, 1) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("real and complex evaluation agree") {
  for (const auto& [name, spec] : catalog()) {
    CAPTURE(name);
    for (double x : {0.3, 2.0, 17.0}) {
      CHECK(std::abs(eval(spec, cdouble(x, 0.0)) - eval(spec, x)) <= 1e-14 * std::max(1.0, eval(spec, x)));
      const cdouble z(x, 1.5);
      CHECK(std::abs(eval(spec, std::conj(z)) - std::conj(eval(spec, z))) <= 1e-14 * std::abs(eval(spec, z)));
    }
  }
}

TEST_CASE("extended precision matches double") {
  for (const auto& [name, spec] : catalog()) {
    CAPTURE(name);
    const cdouble z(1.25, -0.75);
    const auto ld = eval_extended<long double>(spec, std::complex<long double>(z.real(), z.imag()));
    CHECK(std::abs(cdouble(double(ld.real()), double(ld.imag())) - eval(spec, z)) <= 1e-14 * std::abs(eval(spec, z)));
  }
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(BernsteinSpec::power(1.5), DomainError);
  CHECK_THROWS_AS(BernsteinSpec::linear(-1.0), DomainError);
  CHECK_THROWS_AS(BernsteinSpec::log1p(-0.1), DomainError);
}

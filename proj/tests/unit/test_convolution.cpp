#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "expfun/convolution.hpp"
#include "expfun/errors.hpp"

using namespace expfun;

namespace {

const double kPi = std::numbers::pi;

TabulatedFunction inverse_sqrt(double span, int n = 4096) {
  return TabulatedFunction::sample([](double s) { return cdouble(1.0 / std::sqrt(s)); }, span, n, -0.5);
}

}  // namespace

TEST_CASE("convolution of simple curves") {
  const auto f = inverse_sqrt(4.0);
  for (double t : {0.5, 1.0, 3.0}) CHECK(convolve_singular(f, f, t).real() == doctest::Approx(kPi).epsilon(1e-12));
  const auto one = TabulatedFunction::sample([](double) { return cdouble(1.0); }, 2.0, 16);
  CHECK(convolve_singular(one, one, 2.0).real() == doctest::Approx(2.0).epsilon(1e-14));
  const auto decay = TabulatedFunction::sample([](double s) { return cdouble(std::exp(-s)); }, 1.0, 100);
  CHECK(convolve_singular(decay, decay, 1.0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  const auto dense = TabulatedFunction::sample([](double s) { return cdouble(std::exp(-s)); }, 1.0, 4000);
  CHECK(convolve_singular(dense, dense, 1.0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("convolution is symmetric") {
  const auto f = TabulatedFunction::sample([](double s) { return cdouble(std::exp(-s) / std::sqrt(s)); }, 2.0, 2048, -0.5);
  const auto g = TabulatedFunction::sample([](double s) { return cdouble(std::cos(s), std::sin(s)); }, 2.0, 2048);
  for (double t : {0.3, 1.0, 2.0}) {
    CHECK(std::abs(convolve_singular(f, g, t) - convolve_singular(g, f, t)) <= 1e-9);
  }
  // int_0^t e^{-(t-s)} (t-s)^{-1/2} ds = sqrt(pi) erf(sqrt t).
  const auto one = TabulatedFunction::sample([](double) { return cdouble(1.0); }, 2.0, 8);
  CHECK(convolve_singular(f, one, 1.5).real() == doctest::Approx(std::sqrt(kPi) * std::erf(std::sqrt(1.5))).epsilon(1e-8));
}

TEST_CASE("identity right-hand side") {
  CHECK(identity_rhs(0.3, 1.0).real() == doctest::Approx(kPi / std::sin(0.3 * kPi)).epsilon(1e-14));
  for (double t : {0.5, 1.0, 2.0, 4.0}) CHECK(identity_rhs(0.5, t) == identity_rhs(0.5, 1.0));
  const double cp = identity_rhs(0.5, 2.0, 1.0).real();
  CHECK(cp == doctest::Approx(kPi * 4.0 * (1.0 - 3.0 * std::exp(-2.0))).epsilon(1e-14));
  CHECK(cp == doctest::Approx(7.46435063530754).epsilon(1e-12));
  const double lambda = 0.7;
  const double limit = kPi * (lambda + 1.0) * (lambda + 1.0) / (lambda * lambda);
  CHECK(identity_rhs(0.5, 200.0, lambda).real() == doctest::Approx(limit).epsilon(1e-12));
  for (double t : {1e-3, 1e-5}) {
    // 1 - e^{-x} - x e^{-x} ~ x^2 / 2.
    const double small = identity_rhs(0.5, t, lambda).real();
    CHECK(small / (t * t) == doctest::Approx(limit * lambda * lambda / 2.0).epsilon(2.0 * lambda * t));
  }
}

TEST_CASE("identity with exact half moments") {
  const auto f = inverse_sqrt(2.0);
  const auto r = verify_identity(f, f, 0.5, 1.0);
  CHECK(r.rhs.real() == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(r.abs_residual <= 1e-4);
  CHECK(r.rel_residual == doctest::Approx(r.abs_residual / kPi));
  CHECK_THROWS_AS(verify_identity(f, f, 1.2, 1.0), DomainError);
  CHECK_THROWS_AS(verify_identity(f, f, 0.5, 3.0), GridError);
}

TEST_CASE("tabulated function validation") {
  CHECK_THROWS_AS(TabulatedFunction({0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}), GridError);
  CHECK_THROWS_AS(TabulatedFunction({0.5, 1.0}, {1.0, 1.0}, -1.0), SingularityError);
  CHECK_THROWS_AS(TabulatedFunction({0.5, 1.0}, {1.0, NAN}), DomainError);
  const TabulatedFunction f({0.25, 0.5, 1.0}, {2.0, 1.0 / std::sqrt(0.5), 1.0}, -0.5);
  CHECK(f.regular_part(0.5).real() == doctest::Approx(1.0));
  CHECK(f(0.25).real() == doctest::Approx(2.0));
  CHECK(f.span() == 1.0);
}

TEST_CASE("curve CSV round trip") {
  const std::string path = "convolution_curve_roundtrip.csv";
  const auto f = inverse_sqrt(1.0, 64);
  write_curve_csv(path, f);
  const auto g = read_curve_csv(path);
  CHECK(g.singularity_exponent() == -0.5);
  REQUIRE(g.t_grid().size() == f.t_grid().size());
  for (std::size_t i = 0; i < g.t_grid().size(); ++i) {
    CHECK(g.t_grid()[i] == f.t_grid()[i]);
    CHECK(g.values()[i] == f.values()[i]);
  }
  CHECK(read_curve_csv(path, 0.0).singularity_exponent() == 0.0);
  {
    std::ofstream mc("convolution_curve_mc.csv");
    mc << "z_re,z_im,t,mean_re,mean_im,stderr\n-0.5,0,0.5,1.4,0,0.01\n-0.5,0,1,1.0,0,0.01\n";
  }
  const auto h = read_curve_csv("convolution_curve_mc.csv", -0.5);
  CHECK(h.values()[1].real() == 1.0);
  CHECK_THROWS_AS(read_curve_csv("does_not_exist.csv"), IoError);
  std::remove(path.c_str());
  std::remove("convolution_curve_mc.csv");
}

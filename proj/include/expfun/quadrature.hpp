#pragma once

// Thin adaptive-quadrature layer over Boost.Math. Works for real- and
// complex-valued integrands.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "expfun/errors.hpp"

namespace expfun::quad {

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class F>
using result_t = std::invoke_result_t<F, double>;

inline void check(double err, double mag, double tol, const char* what) {
  if (!(err <= tol * std::max(mag, 1e-300) * 10.0 + 1e-300) && !(err <= 1e-14)) {
    throw QuadratureError(std::string(what) + ": estimated error " + std::to_string(err) +
                          " above tolerance");
  }
}

/// Smooth integrand on a finite interval (adaptive Gauss-Kronrod 15).
template <class F>
result_t<F> smooth(F&& f, double a, double b, double tol = 1e-12) {
  double err = 0.0;
  auto r = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, tol, &err);
  check(err, magnitude(r), tol, "gauss_kronrod");
  return r;
}

/// Integrable endpoint singularities on a finite interval (tanh-sinh).
template <class F>
result_t<F> endpoint_singular(F&& f, double a, double b, double tol = 1e-12) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  double err = 0.0;
  double l1 = 0.0;
  auto r = integrator.integrate(f, a, b, tol, &err, &l1);
  check(err, std::max(magnitude(r), l1 * 1e-3), tol, "tanh_sinh");
  return r;
}

/// Integral over [a, inf) of a decaying integrand (exp-sinh).
template <class F>
result_t<F> half_line(F&& f, double a, double tol = 1e-12) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator(12);
  double err = 0.0;
  double l1 = 0.0;
  auto r = integrator.integrate([&](double u) { return f(a + u); }, tol, &err, &l1);
  check(err, std::max(magnitude(r), l1 * 1e-3), tol, "exp_sinh");
  return r;
}

}  // namespace expfun::quad

#pragma once

// Complex special functions used throughout: Gamma, exponential integrals and
// cancellation-free log1p/expm1.

#include <complex>

namespace expfun {

using cdouble = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Gamma function on the complex plane (Lanczos kernel plus reflection).
/// Throws PoleError at non-positive integers.
cdouble complex_gamma(cdouble z);

/// A logarithm of Gamma(z). Any branch; exp() of it is Gamma(z).
cdouble log_gamma(cdouble z);

/// 1/Gamma(z); entire, returns exact zero at the poles of Gamma.
cdouble reciprocal_gamma(cdouble z);

// log(1+w) and exp(w)-1 accurate for small |w|.
template <class Real>
std::complex<Real> log1p(std::complex<Real> w) {
  const std::complex<Real> u = Real(1) + w;
  if (u == std::complex<Real>(1)) return w;
  return std::log(u) * w / (u - Real(1));
}

template <class Real>
std::complex<Real> expm1(std::complex<Real> w) {
  const Real x = w.real();
  const Real y = w.imag();
  const Real s = std::sin(y / 2);
  const Real re = std::expm1(x) * std::cos(y) - 2 * s * s;
  return {re, std::exp(x) * std::sin(y)};
}

/// Entire exponential integral Ein(u) = int_0^u (1 - e^{-s})/s ds.
cdouble ein(cdouble u);

/// E1(u) for Re u > 0 (continued fraction; accurate for |u| >= 1).
cdouble expint_e1(cdouble u);

/// Ein(a + w) - Ein(a) without cancellation when |w| is small.
cdouble ein_difference(cdouble a, cdouble w);

}  // namespace expfun

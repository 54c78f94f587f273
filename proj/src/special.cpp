#include "expfun/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "expfun/errors.hpp"

namespace expfun {
namespace {

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(cdouble z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cdouble log_gamma_right(cdouble z) {
  z -= 1.0;
  cdouble x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + double(i));
  const cdouble t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cdouble log_gamma(cdouble z) {
  if (is_nonpositive_integer(z)) throw PoleError("Gamma has a pole at " + std::to_string(z.real()));
  if (z.real() >= 0.5) return log_gamma_right(z);
  const double pi = std::numbers::pi;
  return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma_right(1.0 - z);
}

cdouble complex_gamma(cdouble z) {
  if (is_nonpositive_integer(z)) throw PoleError("Gamma has a pole at " + std::to_string(z.real()));
  // Small positive integers and half-integers are common; the product form is exact there.
  if (z.imag() == 0.0 && z.real() >= 1.0 && z.real() <= 30.0 && z.real() == std::floor(z.real())) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(z.real()); ++k) f *= k;
    return f;
  }
  if (z.real() >= 0.5) return std::exp(log_gamma_right(z));
  const double pi = std::numbers::pi;
  return pi / (std::sin(pi * z) * std::exp(log_gamma_right(1.0 - z)));
}

cdouble reciprocal_gamma(cdouble z) {
  if (is_nonpositive_integer(z)) return 0.0;
  if (z.real() >= 0.5) return std::exp(-log_gamma_right(z));
  const double pi = std::numbers::pi;
  return std::sin(pi * z) * std::exp(log_gamma_right(1.0 - z)) / pi;
}

cdouble ein(cdouble u) {
  if (std::abs(u) <= 8.0 || u.real() <= 0.0) {
    // sum_{n>=1} (-1)^{n+1} u^n / (n n!)
    cdouble term = u;  // (-1)^{n+1} u^n / n!
    cdouble sum = u;
    for (int n = 2; n < 500; ++n) {
      term *= -u / double(n);
      const cdouble add = term / double(n);
      sum += add;
      if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return expint_e1(u) + kEulerGamma + std::log(u);
}

cdouble expint_e1(cdouble u) {
  if (u.real() <= 0.0) throw DomainError("expint_e1 requires Re(u) > 0");
  if (std::abs(u) < 1.0) return ein(u) - kEulerGamma - std::log(u);
  if (u.real() > 745.0 || !std::isfinite(std::abs(u))) return 0.0;
  // Modified Lentz on the even continued fraction.
  constexpr double tiny = 1e-300;
  cdouble b = u + 1.0;
  cdouble c = 1.0 / tiny;
  cdouble d = 1.0 / b;
  cdouble h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cdouble del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-u);
  }
  throw ConvergenceError("expint_e1 continued fraction did not converge");
}

cdouble ein_difference(cdouble a, cdouble w) {
  if (std::abs(w) <= 1.0) {
    // Gauss-Legendre on the segment a -> a + w of (1 - e^{-s})/s, which is entire.
    static constexpr std::array<double, 10> x = {
        -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
        -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
        0.8650633666889845,  0.9739065285171717};
    static constexpr std::array<double, 10> wt = {
        0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
        0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
        0.1494513491505806, 0.0666713443086881};
    cdouble sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const cdouble s = a + 0.5 * (x[i] + 1.0) * w;
      const cdouble g = std::abs(s) < 1e-8 ? 1.0 - s / 2.0 : -expm1(-s) / s;
      sum += wt[i] * g;
    }
    return 0.5 * w * sum;
  }
  if (a.real() >= 8.0 && (a + w).real() > 1.0) {
    return log1p(w / a) + expint_e1(a + w) - expint_e1(a);
  }
  return ein(a + w) - ein(a);
}

}  // namespace expfun

#include "expfun/symmetric.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <cmath>

#include "expfun/errors.hpp"
#include "expfun/quadrature.hpp"

namespace expfun {
namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(name) + " must be positive and finite");
}

// int_0^h e^{psi y} dy and int_0^h y e^{psi y} dy.
void exp_moments(double psi, double h, double& a0, double& a1) {
  const double x = psi * h;
  if (std::abs(x) < 1e-3) {
    a0 = h * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
    a1 = h * h * (0.5 + x / 3.0 + x * x / 8.0 + x * x * x / 30.0);
    return;
  }
  a0 = std::expm1(x) / psi;
  a1 = (std::exp(x) * (x - 1.0) + 1.0) / (psi * psi);
}

}  // namespace

double half_neg_moment(double t) {
  require_positive(t, "t");
  return 1.0 / std::sqrt(t);
}

double cp_half_neg_moment(double lambda, double t, CpVariant variant) {
  require_positive(lambda, "lambda");
  require_positive(t, "t");
  // s = u^2: e^{-lambda t} int_0^t e^{lambda s} s^{-1/2} ds = 2 int_0^{sqrt t} e^{lambda (u^2 - t)} du.
  const double integral =
      2.0 * quad::smooth([&](double u) { return std::exp(lambda * (u * u - t)); }, 0.0, std::sqrt(t), 1e-12);
  const double c = variant == CpVariant::paper ? boost::math::constants::root_pi<double>() : 1.0;
  return (lambda + 1.0) * c * integral;
}

double half_pos_moment(double psi_half, double t) {
  require_positive(t, "t");
  if (!std::isfinite(psi_half)) throw DomainError("Psi(1/2) must be finite");
  const double root = std::sqrt(t);
  if (psi_half <= 0.0) {
    // sqrt(t) int_0^1 e^{psi t (1 - v^2)} dv = sqrt(t) 1F1(1; 3/2; psi t).
    return root * boost::math::hypergeometric_1F1(1.0, 1.5, psi_half * t);
  }
  // e^{psi t} int_0^{sqrt t} e^{-psi u^2} du with the integral in closed form.
  const double r = std::sqrt(psi_half);
  const double integral = 0.5 * boost::math::constants::root_pi<double>() / r * boost::math::erf(r * root);
  const double log_value = psi_half * t + std::log(integral);
  if (log_value > 709.0) throw OverflowGuard(log_value, t);
  return std::exp(psi_half * t) * integral;
}

std::vector<double> n_minus_half_curve(const std::vector<double>& psi_values, double span, int cells) {
  if (psi_values.empty()) throw DomainError("n_minus_half needs n >= 1");
  require_positive(span, "grid span");
  if (cells < 4) throw GridError("convolution grid needs at least 4 cells");
  const double h = span / cells;
  const auto n = static_cast<std::size_t>(cells) + 1;
  std::vector<double> f(n, 0.0);
  for (std::size_t m = 1; m < n; ++m) f[m] = half_pos_moment(psi_values[0], double(m) * h);
  std::vector<double> g(n);
  for (std::size_t k = 2; k <= psi_values.size(); ++k) {
    const double psi = psi_values[k - 1];
    if (!std::isfinite(psi)) throw DomainError("Psi(k - 1/2) must be finite");
    double a0 = 0.0;
    double a1 = 0.0;
    exp_moments(psi, h, a0, a1);
    const double decay = std::exp(psi * h);
    const double w_left = a1 / h;
    const double w_right = a0 - a1 / h;
    const double weight = double(k) - 0.5;
    // F ~ sqrt(s) R(s) near 0: on s < span/8 R is interpolated linearly and
    // the cell integrals are taken in u = sqrt(s).
    const std::size_t head = n / 8;
    auto r_at = [&](std::size_t m) {
      if (m == 0) return 2.0 * f[1] / std::sqrt(h) - f[2] / std::sqrt(2.0 * h);
      return f[m] / std::sqrt(double(m) * h);
    };
    g[0] = 0.0;
    for (std::size_t m = 0; m + 1 < n; ++m) {
      double cell = 0.0;
      if (m < head) {
        const double s0 = double(m) * h;
        const double r0 = r_at(m);
        const double r1 = r_at(m + 1);
        cell = quad::smooth(
            [&](double u) {
              const double s = u * u;
              return 2.0 * s * (r0 + (r1 - r0) * (s - s0) / h) * std::exp(psi * (s0 + h - s));
            },
            std::sqrt(s0), std::sqrt(s0 + h), 1e-11);
      } else {
        cell = w_left * f[m] + w_right * f[m + 1];
      }
      g[m + 1] = decay * g[m] + weight * cell;
    }
    f.swap(g);
  }
  return f;
}

double n_minus_half_moment(const std::vector<double>& psi_values, double t, const ConvolutionGrid& grid) {
  require_positive(t, "t");
  const double span = grid.span > 0.0 ? grid.span : t;
  if (t > span * (1.0 + 1e-12)) throw GridError("t exceeds the convolution grid span");
  const auto curve = n_minus_half_curve(psi_values, span, grid.cells);
  const double x = std::min(t, span) / span * grid.cells;
  const auto i = std::min(static_cast<std::size_t>(x), curve.size() - 2);
  const double w = x - double(i);
  return (1.0 - w) * curve[i] + w * curve[i + 1];
}

}  // namespace expfun

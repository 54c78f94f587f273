#include "expfun/bgamma.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "expfun/errors.hpp"

namespace expfun {
namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;

// int_a^{a+w} F(u) du along the straight segment.
template <class F>
cdouble segment_integral(F&& f, double a, cdouble w) {
  const auto& x = Gauss::abscissa();
  const auto& wt = Gauss::weights();
  cdouble sum = 0.0;
  const cdouble mid = a + 0.5 * w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cdouble off = 0.5 * w * x[i];
    sum += wt[i] * (f(mid + off) + f(mid - off));
  }
  return 0.5 * w * sum;
}

void require_nonconstant(const BernsteinSpec& s) {
  if (s.is_constant()) throw DomainError("W_phi is undefined for constant " + s.describe());
}

}  // namespace

WeierstrassCache::WeierstrassCache(BernsteinSpec spec, int k0) : spec_(std::move(spec)), k0_(k0) {
  require_nonconstant(spec_);
  if (k0_ < 64) throw DomainError("WeierstrassCache needs k0 >= 64");
  phi_.resize(static_cast<std::size_t>(k0_));
  dphi_.resize(phi_.size());
  logphi_.resize(phi_.size());
  for (int k = 1; k <= k0_; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    phi_[i] = eval(spec_, double(k));
    dphi_[i] = deriv(spec_, double(k), 1);
    if (!(phi_[i] > 0.0)) throw DomainError("phi(k) must be positive for k >= 1");
    logphi_[i] = std::log(phi_[i]);
  }

  // G(N) = sum_{k<N} f'(k) - f(N) + f'(N)/2 - f''(N)/12 with f = log phi; error O(N^-4).
  auto em_tail = [&](int n) {
    const double p = eval(spec_, double(n));
    const double d1 = deriv(spec_, double(n), 1);
    const double d2 = deriv(spec_, double(n), 2);
    const double fp = d1 / p;
    const double fpp = d2 / p - fp * fp;
    return -std::log(p) + fp / 2.0 - fpp / 12.0;
  };
  double partial = 0.0;
  int next = 1;
  auto partial_to = [&](int n) {
    for (; next < n; ++next) {
      if (next <= k0_) {
        const auto i = static_cast<std::size_t>(next - 1);
        partial += dphi_[i] / phi_[i];
      } else {
        partial += deriv(spec_, double(next), 1) / eval(spec_, double(next));
      }
    }
    return partial;
  };
  int n = k0_;
  double g_prev = partial_to(n) + em_tail(n);
  double r_prev = 0.0;
  double step_prev = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 8; ++level) {
    n *= 2;
    const double g = partial_to(n) + em_tail(n);
    const double r = (16.0 * g - g_prev) / 15.0;
    if (level > 0) {
      const double step = std::abs(r - r_prev);
      const double scale = std::max(1.0, std::abs(r));
      // Round-off floor reached, or the increments stopped contracting.
      if (step <= 1e-13 * scale || (step >= step_prev && step <= 1e-11 * scale)) {
        gamma_phi_ = r;
        return;
      }
      if (step >= step_prev) {
        throw ConvergenceError("gamma_phi: extrapolated increments do not contract for " +
                               spec_.describe());
      }
      step_prev = step;
    }
    g_prev = g;
    r_prev = r;
  }
  if (step_prev <= 1e-11 * std::max(1.0, std::abs(r_prev))) {
    gamma_phi_ = r_prev;
    return;
  }
  throw ConvergenceError("gamma_phi did not reach 1e-11 for " + spec_.describe());
}

double WeierstrassCache::phi_at(int k) const {
  return k <= k0_ ? phi_[static_cast<std::size_t>(k - 1)] : eval(spec_, double(k));
}

double WeierstrassCache::dphi_at(int k) const {
  return k <= k0_ ? dphi_[static_cast<std::size_t>(k - 1)] : deriv(spec_, double(k), 1);
}

cdouble WeierstrassCache::log_W_strip(cdouble z) const {
  const int n = std::max(k0_, static_cast<int>(std::ceil(64.0 * std::abs(z))));
  cdouble sum = 0.0;
  for (int k = 1; k < n; ++k) {
    const double lp = k <= k0_ ? logphi_[static_cast<std::size_t>(k - 1)] : std::log(phi_at(k));
    sum += lp - std::log(eval(spec_, double(k) + z)) + z * (dphi_at(k) / phi_at(k));
  }
  // sum_{k>=n} g(k) by Euler-Maclaurin, g(u) = f(u) - f(u+z) + z f'(u).
  const double N = double(n);
  auto logphi = [&](cdouble u) { return std::log(eval(spec_, u)); };
  auto fprime = [&](cdouble u) { return deriv(spec_, u, 1) / eval(spec_, u); };
  const double pN = eval(spec_, N);
  const double fN = std::log(pN);
  const double fpN = deriv(spec_, N, 1) / pN;
  const double fppN = deriv(spec_, N, 2) / pN - fpN * fpN;
  const cdouble integral = segment_integral(logphi, N, z) - z * fN;
  const cdouble g = fN - logphi(N + z) + z * fpN;
  const cdouble dg = fpN - fprime(N + z) + z * fppN;
  const cdouble tail = integral + g / 2.0 - dg / 12.0;
  return -gamma_phi_ * z - std::log(eval(spec_, z)) + sum + tail;
}

cdouble WeierstrassCache::log_W(cdouble z) const {
  // Reduce into Re z in (0, 1] with W(z+1) = phi(z) W(z).
  cdouble acc = 0.0;
  while (z.real() > 1.0) {
    z -= 1.0;
    acc += std::log(eval(spec_, z));
  }
  while (z.real() <= 0.0) {
    const cdouble p = eval(spec_, z);
    if (p == 0.0) {
      std::ostringstream os;
      os << "W_phi has a pole at z = " << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
      throw PoleError(os.str());
    }
    acc -= std::log(p);
    z += 1.0;
  }
  if (z == 1.0) return acc;
  return acc + log_W_strip(z);
}

cdouble WeierstrassCache::W(cdouble z) const {
  const cdouble lw = log_W(z);
  if (lw.real() > 709.0) throw OverflowGuard(lw.real(), lw.imag());
  return std::exp(lw);
}

double gamma_phi(const BernsteinSpec& spec) { return WeierstrassCache(spec).gamma_phi(); }

cdouble eval_W(const BernsteinSpec& spec, cdouble z) { return WeierstrassCache(spec).W(z); }

cdouble log_W(const BernsteinSpec& spec, cdouble z) { return WeierstrassCache(spec).log_W(z); }

cdouble mellin_infinity(const WeierstrassCache& cache, cdouble z) {
  const BernsteinSpec& s = cache.spec();
  const bool zero_at_origin = eval(s, 0.0) == 0.0;
  const double bound = zero_at_origin ? a_phi(s) : 0.0;
  cdouble w = z + 1.0;
  if (!(w.real() > bound)) {
    std::ostringstream os;
    os << "Re(z) = " << z.real() << " outside the strip Re(z) > " << bound - 1.0;
    throw DomainError(os.str());
  }
  // Gamma(w)/W(w) = Gamma(w+1)/W(w+1) * phi(w)/w.
  cdouble factor = 1.0;
  while (w.real() < 0.5) {
    cdouble q;
    if (zero_at_origin && std::abs(w) < 1e-6) {
      q = deriv(s, 0.0, 1) + deriv(s, 0.0, 2) * w / 2.0;
    } else if (w == 0.0) {
      throw PoleError("Gamma(z+1)/W(z+1) has a pole at z = -1");
    } else {
      q = eval(s, w) / w;
    }
    factor *= q;
    w += 1.0;
  }
  if (w.imag() == 0.0 && w.real() <= 30.0 && w.real() == std::floor(w.real())) {
    return factor * complex_gamma(w) * std::exp(-cache.log_W(w));
  }
  return factor * std::exp(log_gamma(w) - cache.log_W(w));
}

cdouble mellin_infinity(const BernsteinSpec& spec, cdouble z) {
  return mellin_infinity(WeierstrassCache(spec), z);
}

}  // namespace expfun

#pragma once

// Bernstein-Gamma functions: W(z+1) = phi(z) W(z), W(1) = 1, evaluated from the
// Weierstrass product
//   W(z) = e^{-gamma_phi z} / phi(z) * prod_k phi(k)/phi(k+z) e^{z phi'(k)/phi(k)}.

#include <vector>

#include "expfun/bernstein.hpp"

namespace expfun {

/// Per-spec data shared by all W evaluations. Built once, then read-only.
class WeierstrassCache {
 public:
  explicit WeierstrassCache(BernsteinSpec spec, int k0 = 256);

  const BernsteinSpec& spec() const noexcept { return spec_; }
  double gamma_phi() const noexcept { return gamma_phi_; }
  int k0() const noexcept { return k0_; }
  /// phi(k) and phi'(k) for k = 1..k0 (index k-1).
  const std::vector<double>& phi_k() const noexcept { return phi_; }
  const std::vector<double>& dphi_k() const noexcept { return dphi_; }

  /// log W(z); any branch (exp() of it is W(z)).
  cdouble log_W(cdouble z) const;
  cdouble W(cdouble z) const;

 private:
  double phi_at(int k) const;
  double dphi_at(int k) const;
  cdouble log_W_strip(cdouble z) const;

  BernsteinSpec spec_;
  int k0_;
  std::vector<double> phi_;
  std::vector<double> dphi_;
  std::vector<double> logphi_;
  double gamma_phi_ = 0.0;
};

/// gamma_phi = lim_n (sum_{k<=n} phi'(k)/phi(k) - log phi(n)).
double gamma_phi(const BernsteinSpec& spec);

cdouble eval_W(const BernsteinSpec& spec, cdouble z);
cdouble log_W(const BernsteinSpec& spec, cdouble z);

/// E[I(inf)^z] = Gamma(z+1)/W(z+1). When phi(0) = 0 the removable singularity
/// at z = -1 and below is resolved through the recurrence.
cdouble mellin_infinity(const BernsteinSpec& spec, cdouble z);
cdouble mellin_infinity(const WeierstrassCache& cache, cdouble z);

}  // namespace expfun

#pragma once

// E[I(t)^z] for the exponential functional of a subordinator through the series
//   E[I(t)^z] = Gamma(z+1)/W(z+1) + sum_{k>=1} H(z,k) e^{-phi(k) t},
// where H(z,k) = prod_{j=1}^k (phi(k)-phi(z+j)) / prod_{j=1}^{k-1} (phi(k)-phi(j))
//              * Gamma(z+1) / (phi(k) W_{phi_(k)}(z+1)).

#include <string>
#include <vector>

#include "expfun/bernstein.hpp"

namespace expfun {

struct SeriesResult {
  cdouble value = 0.0;
  /// Terms summed, counting the leading Gamma(z+1)/W(z+1) term.
  long terms_used = 0;
  /// Heuristic bound on the modulus of the truncation error.
  double tail_certificate = 0.0;
  bool converged = false;
  std::vector<std::string> warnings;
};

struct TermContext {
  int k = 0;
  double phi_k = 0.0;
  double dphi_k = 0.0;
  cdouble h_value = 0.0;
  double exp_weight = 0.0;
};

/// Constants of the tail certificate K(z) sum_k ... (see tail_bound). The
/// defaults come from tools/calibrate_tail.
struct TailConstants {
  double k_scale = 2.0;
  double k_floor = 0.05;
  double c = 0.25;
};

struct MomentOptions {
  int k_max = 20000;
  /// Skip the hypothesis check (a warning is recorded instead of an error).
  bool allow_unverified = false;
  /// Fit and integrate an asymptotic model of H(z,k) for the remainder.
  bool accelerate = true;
  /// Return converged = false instead of throwing at k_max.
  bool throw_on_failure = true;
  double log_cap = 700.0;
  int threads = 0;
  TailConstants tail{};
};

/// log H(z,k) (any branch); `zero` is set when H vanishes identically.
struct LogTerm {
  bool zero = false;
  cdouble log_value = 0.0;
};

LogTerm h_term_log(const BernsteinSpec& spec, cdouble z, int k);

/// H(z,k). Throws OverflowGuard when log|H| exceeds log_cap.
cdouble h_term(const BernsteinSpec& spec, cdouble z, int k, double log_cap = 700.0);

SeriesResult moment(const BernsteinSpec& spec, cdouble z, double t, double tol = 1e-10,
                    const MomentOptions& opts = {});

/// Heuristic bound on |sum_{k>l} H(z,k) e^{-phi(k) t}|.
double tail_bound(const BernsteinSpec& spec, cdouble z, int l, double t,
                  const TailConstants& constants = {});

/// E[I(t)^l] for negative integers l in (-1 + a_phi, 0) when phi(0) = 0:
///   sum_{k>=0} prod_{j=1}^{-l-1} (phi(k) - phi(j+l)) / (-l-1)! * phi'(k) e^{-phi(k) t}.
SeriesResult neg_int_moment(const BernsteinSpec& spec, int l, double t, double tol = 1e-12);

/// E[I(t)^-2] = -d/dt E[I(t)^-1] - phi(-1) E[I(t)^-1] with a central difference.
double minus_two_moment_via_ode(const BernsteinSpec& spec, double t, double dt = 1e-3);

/// Riemann zeta on s > 1, as E[I(s-1)^-1] for phi(u) = log(1+u).
double zeta(double s);

}  // namespace expfun

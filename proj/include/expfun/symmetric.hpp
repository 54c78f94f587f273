#pragma once

// Moments of order -1/2, 1/2 and n - 1/2 of the exponential functional of a
// symmetric Levy process.

#include <vector>

#include "expfun/levy.hpp"

namespace expfun {

/// E[I(t)^{-1/2}] = t^{-1/2} for symmetric processes that are not compound Poisson.
double half_neg_moment(double t);

enum class CpVariant { paper, laplace_derived };

/// (lambda+1) c e^{-lambda t} int_0^t e^{lambda s} s^{-1/2} ds with c = sqrt(pi)
/// (paper) or c = 1 (laplace_derived).
double cp_half_neg_moment(double lambda, double t, CpVariant variant);

/// E[I(t)^{1/2}] = e^{Psi(1/2) t}/2 int_0^t e^{-Psi(1/2) s} s^{-1/2} ds.
/// Throws OverflowGuard when the value does not fit in a double.
double half_pos_moment(double psi_half, double t);

/// Uniform grid 0 = s_0 < ... < s_cells = span. span <= 0 means "use t".
struct ConvolutionGrid {
  double span = 0.0;
  int cells = 4096;
};

/// E[I(t)^{n-1/2}] as the convolution of s^{-1/2} ds with
/// nu_k(ds) = (k - 1/2) e^{Psi(k-1/2) s} ds, k = 1..n, where
/// psi_values[k-1] = Psi(k - 1/2). Throws GridError when t > span.
double n_minus_half_moment(const std::vector<double>& psi_values, double t,
                           const ConvolutionGrid& grid = {});

/// The same convolution tabulated on the grid nodes.
std::vector<double> n_minus_half_curve(const std::vector<double>& psi_values, double span,
                                       int cells = 4096);

}  // namespace expfun

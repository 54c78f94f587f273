#pragma once

// Product-integration convolution of tabulated moment curves and the
// convolutional identity int_0^t E[I^{-z}(t-s)] E[Ihat^{z-1}(s)] ds = pi / sin(pi z).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "expfun/special.hpp"

namespace expfun {

/// Samples of s -> F(s) with F(s) ~ c s^e near 0, where e = singularity_exponent.
/// The regular part F(s)/s^e is interpolated by monotone piecewise cubics
/// (PCHIP, or linearly below four nodes) and continued linearly below the first node.
class TabulatedFunction {
 public:
  TabulatedFunction(std::vector<double> t_grid, std::vector<cdouble> values, double singularity_exponent = 0.0);

  /// Samples fn on s_j = j span / n, j = 1..n (plus s = 0 when the exponent is 0).
  static TabulatedFunction sample(const std::function<cdouble(double)>& fn, double span, int n,
                                  double singularity_exponent = 0.0);

  const std::vector<double>& t_grid() const noexcept { return t_; }
  const std::vector<cdouble>& values() const noexcept { return v_; }
  double singularity_exponent() const noexcept { return e_; }
  double span() const noexcept { return t_.back(); }

  /// F(s) / s^e.
  cdouble regular_part(double s) const;
  cdouble operator()(double s) const;

 private:
  std::vector<double> t_;
  std::vector<cdouble> v_;
  double e_;
  std::function<double(double)> re_;
  std::function<double(double)> im_;
};

/// int_0^t f(t-s) g(s) ds on a uniform grid of `cells` cells. The weight
/// (t-s)^{e_f} s^{e_g} is integrated exactly (incomplete beta functions) against
/// the piecewise-linear interpolant of the regular parts.
cdouble convolve_singular(const TabulatedFunction& f, const TabulatedFunction& g, double t, int cells = 4096);

struct IdentityReport {
  cdouble lhs = 0.0;
  cdouble rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
};

/// pi / sin(pi z), times (lambda+1)^2/lambda^2 (1 - e^{-lambda t} - lambda t e^{-lambda t})
/// in the compound Poisson case.
cdouble identity_rhs(cdouble z, double t, std::optional<double> cp_lambda = std::nullopt);

/// Requires 0 < Re z < 1.
IdentityReport verify_identity(const TabulatedFunction& f, const TabulatedFunction& g, cdouble z, double t,
                               std::optional<double> cp_lambda = std::nullopt, int cells = 4096);

/// Curve CSV: header with a "t" column and "re"/"im" (or "mean_re"/"mean_im")
/// columns, optionally preceded by "# singularity_exponent=<e>".
TabulatedFunction read_curve_csv(const std::string& path, std::optional<double> exponent_override = std::nullopt);
void write_curve_csv(const std::string& path, const TabulatedFunction& f);

}  // namespace expfun

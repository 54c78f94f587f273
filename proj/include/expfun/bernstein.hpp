#pragma once

// Bernstein functions phi(z) = phi(0) + d z + int_0^inf (1 - e^{-zy}) mu(dy):
// the Laplace exponents of (killed) subordinators.

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expfun/special.hpp"

namespace expfun {

enum class Family { log1p, power, shifted_power, loglog, truncated_gamma, linear, custom };

std::string to_string(Family f);

/// Levy measure data for a user-supplied Bernstein function.
struct CustomMeasure {
  double drift = 0.0;
  /// Levy density on (0, inf). Must be non-negative with int min(y,1) mu(dy) < inf.
  std::function<double(double)> density;
  /// a_phi for this measure; no finite procedure recovers it from a density.
  double analytic_bound = 0.0;
  /// (y, density) nodes when built from a table; empty for functional densities.
  std::vector<std::pair<double, double>> table;
};

/// Immutable description of a Bernstein function. Shifted functions
/// phi_(k)(z) = phi(k+z) - phi(k) are represented by a non-zero offset and
/// evaluated in closed form without subtracting two large values.
class BernsteinSpec {
 public:
  static BernsteinSpec log1p(double q = 0.0);
  static BernsteinSpec power(double alpha, double q = 0.0);
  static BernsteinSpec shifted_power(double alpha, double q = 0.0);
  static BernsteinSpec loglog(double q = 0.0);
  static BernsteinSpec truncated_gamma(double q = 0.0);
  static BernsteinSpec linear(double d, double q = 0.0);
  static BernsteinSpec custom(CustomMeasure measure, double q = 0.0);
  /// Levy density interpolated linearly in (log y, log density); power-law
  /// extrapolation below the first node, zero above the last.
  static BernsteinSpec tabulated(std::vector<std::pair<double, double>> nodes, double drift = 0.0,
                                 double q = 0.0, double analytic_bound = 0.0);

  Family family() const noexcept { return family_; }
  double alpha() const noexcept { return alpha_; }
  /// Drift d (linear coefficient).
  double drift() const noexcept;
  double killing() const noexcept { return q_; }
  /// Shift k such that this spec is phi(k + .) - phi(k); zero for unshifted specs.
  double offset() const noexcept { return offset_; }
  const CustomMeasure* custom_measure() const noexcept { return custom_.get(); }
  bool is_constant() const noexcept;

  /// phi(k + .) - phi(k) for real k >= 0 (killing is dropped).
  BernsteinSpec shifted_by(double k) const;

  std::string describe() const;

 private:
  BernsteinSpec() = default;
  Family family_ = Family::linear;
  double alpha_ = 0.0;
  double d_ = 0.0;
  double q_ = 0.0;
  double offset_ = 0.0;
  std::shared_ptr<const CustomMeasure> custom_;
};

/// Holomorphy abscissa a_phi plus the optional catalog metadata u_phi and
/// abar_phi. a_phi is -inf for entire functions.
struct AnalyticBound {
  double a_phi = 0.0;
  std::optional<double> u_phi;
  std::optional<double> abar_phi;
};

AnalyticBound analytic_bound(const BernsteinSpec& spec);
double a_phi(const BernsteinSpec& spec);

/// Quadrature tolerance for custom measures.
inline constexpr double kCustomQuadTol = 1e-11;

/// phi(z). Throws DomainError when Re(z) <= a_phi, QuadratureError when a
/// custom integral misses its tolerance.
cdouble eval(const BernsteinSpec& spec, cdouble z);
double eval(const BernsteinSpec& spec, double x);

/// phi'(z) (order 1) or phi''(z) (order 2).
cdouble deriv(const BernsteinSpec& spec, cdouble z, int order);
double deriv(const BernsteinSpec& spec, double x, int order);

/// Extended-precision evaluation for the closed-form families (custom and
/// truncated-gamma specs are evaluated in double and widened).
template <class Real>
std::complex<Real> eval_extended(const BernsteinSpec& spec, std::complex<Real> z);

extern template std::complex<double> eval_extended<double>(const BernsteinSpec&, std::complex<double>);
extern template std::complex<long double> eval_extended<long double>(const BernsteinSpec&,
                                                                     std::complex<long double>);

/// phi_(k)(z) = phi(k + z) - phi(k), k >= 1.
BernsteinSpec shift(const BernsteinSpec& spec, int k);

/// phi(inf); +inf when unbounded.
double value_at_infinity(const BernsteinSpec& spec);

/// x with phi(x) = y, for y in (phi(0), phi(inf)). Throws RangeError otherwise.
double inverse(const BernsteinSpec& spec, double y);

/// Levy density of the spec (including the e^{-offset y} tilt), when known.
std::optional<std::function<double(double)>> levy_density(const BernsteinSpec& spec);

struct HypothesisOptions {
  double ratio_cap = 1e3;     // sup phi'(x)/phi'(2x) accepted as "bounded"
  double growth_floor = 2.0;  // phi(x_max) must exceed growth_floor * max(phi(1), tiny)
};

/// Finite-grid evidence for: limsup phi'(x)/phi'(2x) < inf, x^2 phi'(x) -> inf,
/// phi(inf) = inf. Evidence only; asymptotic statements cannot be decided from
/// finitely many probes.
struct HypothesisReport {
  bool ratio_bounded = false;
  double max_ratio = 0.0;
  double last_ratio = 0.0;
  bool x2_dphi_increasing = false;
  bool phi_unbounded = false;
  double phi_at_xmax = 0.0;
  std::string note = "heuristic: finite-x evidence only";
  bool all_pass() const noexcept { return ratio_bounded && x2_dphi_increasing && phi_unbounded; }
};

HypothesisReport check_hypotheses(const BernsteinSpec& spec, double x_max = 1e6, int n_probes = 64,
                                  const HypothesisOptions& opts = {});

}  // namespace expfun

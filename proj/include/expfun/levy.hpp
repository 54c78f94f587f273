#pragma once

// Jump laws and Levy-Khintchine exponents shared by the symmetric and
// montecarlo modules.

#include <string>

namespace expfun {

/// Jump distribution of a compound Poisson component.
struct JumpLaw {
  enum class Kind { normal, uniform, laplace, exponential, gamma };
  Kind kind = Kind::normal;
  /// normal: standard deviation; uniform: half-width a of U(-a, a);
  /// laplace: scale b; exponential: rate; gamma: shape.
  double p1 = 1.0;
  /// gamma: rate. Unused otherwise.
  double p2 = 1.0;

  static JumpLaw normal(double sigma) { return {Kind::normal, sigma, 1.0}; }
  static JumpLaw uniform(double half_width) { return {Kind::uniform, half_width, 1.0}; }
  static JumpLaw laplace(double scale) { return {Kind::laplace, scale, 1.0}; }
  static JumpLaw exponential(double rate) { return {Kind::exponential, rate, 1.0}; }
  static JumpLaw gamma(double shape, double rate) { return {Kind::gamma, shape, rate}; }

  bool symmetric() const noexcept {
    return kind == Kind::normal || kind == Kind::uniform || kind == Kind::laplace;
  }
  bool positive() const noexcept { return !symmetric(); }

  /// E[e^{uJ}]; +inf where it diverges.
  double mgf(double u) const;
  void validate() const;
  std::string describe() const;
};

/// Parses "normal:1", "uniform:0.5", "laplace:1", "exponential:2", "gamma:2,1".
JumpLaw parse_jump_law(const std::string& text);

/// Symmetric Levy process without drift: Brownian motion sigma W, or a compound
/// Poisson process with a symmetric jump law.
struct SymmetricLevySpec {
  enum class Kind { brownian, compound_poisson };
  Kind kind = Kind::brownian;
  double sigma2 = 1.0;
  double lambda = 1.0;
  JumpLaw jump{};

  static SymmetricLevySpec brownian(double sigma2);
  static SymmetricLevySpec compound_poisson(double lambda, JumpLaw jump);

  /// Psi(u) = log E[e^{u xi_1}] for real u; +inf where the jump mgf diverges.
  double psi(double u) const;
  std::string describe() const;
};

}  // namespace expfun

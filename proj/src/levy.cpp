#include "expfun/levy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "expfun/errors.hpp"

namespace expfun {

double JumpLaw::mgf(double u) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case Kind::normal:
      return std::exp(0.5 * p1 * p1 * u * u);
    case Kind::uniform: {
      const double x = p1 * u;
      return x == 0.0 ? 1.0 : std::sinh(x) / x;
    }
    case Kind::laplace:
      return std::abs(p1 * u) < 1.0 ? 1.0 / (1.0 - p1 * p1 * u * u) : inf;
    case Kind::exponential:
      return u < p1 ? p1 / (p1 - u) : inf;
    case Kind::gamma:
      return u < p2 ? std::pow(p2 / (p2 - u), p1) : inf;
  }
  return inf;
}

void JumpLaw::validate() const {
  if (!(p1 > 0.0) || !std::isfinite(p1)) throw DomainError("jump law parameter must be positive: " + describe());
  if (kind == Kind::gamma && (!(p2 > 0.0) || !std::isfinite(p2))) {
    throw DomainError("gamma jump rate must be positive");
  }
}

std::string JumpLaw::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::normal: os << "normal:" << p1; break;
    case Kind::uniform: os << "uniform:" << p1; break;
    case Kind::laplace: os << "laplace:" << p1; break;
    case Kind::exponential: os << "exponential:" << p1; break;
    case Kind::gamma: os << "gamma:" << p1 << "," << p2; break;
  }
  return os.str();
}

JumpLaw parse_jump_law(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  double a = 1.0;
  double b = 1.0;
  if (colon != std::string::npos) {
    std::istringstream is(text.substr(colon + 1));
    char sep = 0;
    if (!(is >> a)) throw DomainError("bad jump law parameters: " + text);
    if (is >> sep && !(sep == ',' && is >> b)) throw DomainError("bad jump law parameters: " + text);
  }
  JumpLaw law;
  if (name == "normal") law = JumpLaw::normal(a);
  else if (name == "uniform") law = JumpLaw::uniform(a);
  else if (name == "laplace") law = JumpLaw::laplace(a);
  else if (name == "exponential") law = JumpLaw::exponential(a);
  else if (name == "gamma") law = JumpLaw::gamma(a, b);
  else throw DomainError("unknown jump law: " + text);
  law.validate();
  return law;
}

SymmetricLevySpec SymmetricLevySpec::brownian(double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("Brownian variance must be positive");
  SymmetricLevySpec s;
  s.kind = Kind::brownian;
  s.sigma2 = sigma2;
  return s;
}

SymmetricLevySpec SymmetricLevySpec::compound_poisson(double lambda, JumpLaw jump) {
  if (!(lambda > 0.0)) throw DomainError("jump intensity must be positive");
  jump.validate();
  if (!jump.symmetric()) throw DomainError("jump law is not symmetric: " + jump.describe());
  SymmetricLevySpec s;
  s.kind = Kind::compound_poisson;
  s.lambda = lambda;
  s.jump = jump;
  return s;
}

double SymmetricLevySpec::psi(double u) const {
  if (kind == Kind::brownian) return 0.5 * sigma2 * u * u;
  return lambda * (jump.mgf(u) - 1.0);
}

std::string SymmetricLevySpec::describe() const {
  std::ostringstream os;
  if (kind == Kind::brownian) {
    os << "brownian(sigma2=" << sigma2 << ")";
  } else {
    os << "symmetric_cp(lambda=" << lambda << ", jump=" << jump.describe() << ")";
  }
  return os.str();
}

}  // namespace expfun

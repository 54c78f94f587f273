#include "expfun/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "expfun/errors.hpp"
#include "expfun/quadrature.hpp"

namespace expfun {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = std::numbers::e;

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

// Interpolation of a tabulated density: log-log linear inside, power law below.
std::function<double(double)> table_density(const std::vector<std::pair<double, double>>& nodes) {
  require(nodes.size() >= 2, "tabulated Levy density needs at least two nodes");
  std::vector<double> ly, ld;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require(nodes[i].first > 0.0 && nodes[i].second > 0.0,
            "tabulated Levy density nodes must be positive");
    if (i > 0) require(nodes[i].first > nodes[i - 1].first, "tabulated y must increase");
    ly.push_back(std::log(nodes[i].first));
    ld.push_back(std::log(nodes[i].second));
  }
  const double slope0 = (ld[1] - ld[0]) / (ly[1] - ly[0]);
  require(slope0 > -2.0, "density extrapolated below the table is not integrable against min(y,1)");
  return [ly = std::move(ly), ld = std::move(ld), slope0](double y) -> double {
    if (y <= 0.0) return 0.0;
    const double l = std::log(y);
    if (l > ly.back()) return 0.0;
    if (l <= ly.front()) return std::exp(ld.front() + slope0 * (l - ly.front()));
    const auto it = std::upper_bound(ly.begin(), ly.end(), l);
    const std::size_t i = static_cast<std::size_t>(it - ly.begin()) - 1;
    const double w = (l - ly[i]) / (ly[i + 1] - ly[i]);
    return std::exp(ld[i] + w * (ld[i + 1] - ld[i]));
  };
}

// int_0^inf g(y) mu(dy) for the custom measure tilted by e^{-offset y}.
template <class G>
cdouble integrate_measure(const CustomMeasure& m, double offset, G&& g) {
  auto integrand = [&](double y) -> cdouble {
    const double dens = m.density(y);
    if (dens == 0.0) return 0.0;
    return g(y) * (dens * std::exp(-offset * y));
  };
  if (!m.table.empty()) {
    // Smooth between nodes; singular (power law) below the first node.
    const double y0 = m.table.front().first;
    cdouble total = quad::endpoint_singular(integrand, 0.0, y0, kCustomQuadTol);
    for (std::size_t i = 0; i + 1 < m.table.size(); ++i) {
      total += quad::smooth(integrand, m.table[i].first, m.table[i + 1].first, kCustomQuadTol);
    }
    return total;
  }
  const cdouble lower = quad::endpoint_singular(integrand, 0.0, 1.0, kCustomQuadTol);
  // (1, inf) through y = 1 + u/(1-u).
  auto mapped = [&](double u) -> cdouble {
    if (u >= 1.0) return 0.0;
    const double one_minus = 1.0 - u;
    const double y = 1.0 + u / one_minus;
    return integrand(y) / (one_minus * one_minus);
  };
  const cdouble upper = quad::endpoint_singular(mapped, 0.0, 1.0, kCustomQuadTol);
  return lower + upper;
}

template <class Real>
using cplx = std::complex<Real>;

template <class Real>
cplx<Real> closed_form(const BernsteinSpec& s, cplx<Real> z) {
  const Real o = static_cast<Real>(s.offset());
  const Real a = static_cast<Real>(s.alpha());
  switch (s.family()) {
    case Family::log1p:
      return log1p(z / (Real(1) + o));
    case Family::power: {
      if (o == Real(0)) {
        if (z == cplx<Real>(0)) return 0;
        return std::pow(z, a);
      }
      return std::pow(o, a) * expm1(a * log1p(z / o));
    }
    case Family::shifted_power: {
      const Real c = Real(1) + o;
      return std::pow(c, a) * expm1(a * log1p(z / c));
    }
    case Family::loglog: {
      const Real c = o + static_cast<Real>(kE);
      return log1p(log1p(z / c) / std::log(c));
    }
    case Family::linear:
      return static_cast<Real>(s.drift()) * z;
    default:
      break;
  }
  // Families evaluated in double.
  const cdouble zd(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  cdouble v;
  if (s.family() == Family::truncated_gamma) {
    v = ein_difference(cdouble(1.0 + s.offset()), zd);
  } else {
    const CustomMeasure& m = *s.custom_measure();
    v = m.drift * zd +
        integrate_measure(m, s.offset(), [&](double y) { return -expm1(-zd * y); });
  }
  return {static_cast<Real>(v.real()), static_cast<Real>(v.imag())};
}

void check_domain(const BernsteinSpec& s, cdouble z, bool closed_at_zero) {
  const double a = a_phi(s);
  // phi(0) = q is part of the definition even when 0 is the boundary of holomorphy.
  if (closed_at_zero && z == 0.0 && a == 0.0) return;
  if (!(z.real() > a)) {
    std::ostringstream os;
    os << "Re(z) = " << z.real() << " is not above a_phi = " << a << " for " << s.describe();
    throw DomainError(os.str());
  }
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::log1p: return "log1p";
    case Family::power: return "power";
    case Family::shifted_power: return "shifted_power";
    case Family::loglog: return "loglog";
    case Family::truncated_gamma: return "truncated_gamma";
    case Family::linear: return "linear";
    case Family::custom: return "custom";
  }
  return "unknown";
}

BernsteinSpec BernsteinSpec::log1p(double q) {
  require(q >= 0.0, "killing rate must be non-negative");
  BernsteinSpec s;
  s.family_ = Family::log1p;
  s.q_ = q;
  return s;
}

BernsteinSpec BernsteinSpec::power(double alpha, double q) {
  require(alpha > 0.0 && alpha < 1.0, "power family needs alpha in (0,1)");
  require(q >= 0.0, "killing rate must be non-negative");
  BernsteinSpec s;
  s.family_ = Family::power;
  s.alpha_ = alpha;
  s.q_ = q;
  return s;
}

BernsteinSpec BernsteinSpec::shifted_power(double alpha, double q) {
  BernsteinSpec s = power(alpha, q);
  s.family_ = Family::shifted_power;
  return s;
}

BernsteinSpec BernsteinSpec::loglog(double q) {
  require(q >= 0.0, "killing rate must be non-negative");
  BernsteinSpec s;
  s.family_ = Family::loglog;
  s.q_ = q;
  return s;
}

BernsteinSpec BernsteinSpec::truncated_gamma(double q) {
  require(q >= 0.0, "killing rate must be non-negative");
  BernsteinSpec s;
  s.family_ = Family::truncated_gamma;
  s.q_ = q;
  return s;
}

BernsteinSpec BernsteinSpec::linear(double d, double q) {
  require(d >= 0.0 && q >= 0.0, "linear family needs d >= 0 and q >= 0");
  BernsteinSpec s;
  s.family_ = Family::linear;
  s.d_ = d;
  s.q_ = q;
  return s;
}

BernsteinSpec BernsteinSpec::custom(CustomMeasure measure, double q) {
  require(q >= 0.0, "killing rate must be non-negative");
  require(measure.drift >= 0.0, "drift must be non-negative");
  require(static_cast<bool>(measure.density), "custom measure needs a density");
  require(measure.analytic_bound <= 0.0, "a_phi must be <= 0");
  BernsteinSpec s;
  s.family_ = Family::custom;
  s.d_ = measure.drift;
  s.q_ = q;
  s.custom_ = std::make_shared<const CustomMeasure>(std::move(measure));
  return s;
}

BernsteinSpec BernsteinSpec::tabulated(std::vector<std::pair<double, double>> nodes, double drift,
                                       double q, double analytic_bound) {
  CustomMeasure m;
  m.drift = drift;
  m.analytic_bound = analytic_bound;
  m.density = table_density(nodes);
  m.table = std::move(nodes);
  return custom(std::move(m), q);
}

double BernsteinSpec::drift() const noexcept {
  switch (family_) {
    case Family::linear:
    case Family::custom:
      return d_;
    default:
      return 0.0;
  }
}

bool BernsteinSpec::is_constant() const noexcept {
  if (family_ == Family::linear) return d_ == 0.0;
  if (family_ == Family::custom) {
    return d_ == 0.0 && custom_->table.empty() == false &&
           std::all_of(custom_->table.begin(), custom_->table.end(),
                       [](const auto& p) { return p.second == 0.0; });
  }
  return false;
}

BernsteinSpec BernsteinSpec::shifted_by(double k) const {
  require(k >= 0.0, "shift must be non-negative");
  BernsteinSpec s = *this;
  s.offset_ = offset_ + k;
  s.q_ = 0.0;
  return s;
}

std::string BernsteinSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (family_ == Family::power || family_ == Family::shifted_power) os << "(alpha=" << alpha_ << ")";
  if (family_ == Family::linear) os << "(d=" << d_ << ")";
  if (q_ > 0.0) os << "+q=" << q_;
  if (offset_ > 0.0) os << " shifted by " << offset_;
  return os.str();
}

double a_phi(const BernsteinSpec& s) {
  const double o = s.offset();
  switch (s.family()) {
    case Family::log1p: return -1.0 - o;
    case Family::power: return -o;
    case Family::shifted_power: return -1.0 - o;
    case Family::loglog: return 1.0 - kE - o;
    case Family::truncated_gamma:
    case Family::linear: return -kInf;
    case Family::custom: return s.custom_measure()->analytic_bound - o;
  }
  return 0.0;
}

AnalyticBound analytic_bound(const BernsteinSpec& s) {
  AnalyticBound b;
  b.a_phi = a_phi(s);
  if (s.family() == Family::custom) return b;
  // u_phi = inf{u in [a_phi, 0] : phi(u) = 0}, with inf of the empty set = 0.
  const double lo = std::max(b.a_phi, -50.0);
  auto phi = [&](double x) { return eval(s, cdouble(x)).real(); };
  const double left = lo + 1e-12 * std::max(1.0, std::abs(lo));
  double u = 0.0;
  if (!s.is_constant() && phi(left) < 0.0 && phi(0.0) > 0.0) {
    double a = left, c = 0.0;
    for (int i = 0; i < 200 && c - a > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
      const double m = 0.5 * (a + c);
      (phi(m) < 0.0 ? a : c) = m;
    }
    u = c;
  }
  b.u_phi = u;
  b.abar_phi = std::max(b.a_phi, u);
  return b;
}

template <class Real>
std::complex<Real> eval_extended(const BernsteinSpec& spec, std::complex<Real> z) {
  check_domain(spec, cdouble(static_cast<double>(z.real()), static_cast<double>(z.imag())), true);
  return closed_form<Real>(spec, z) + static_cast<Real>(spec.killing());
}

template std::complex<double> eval_extended<double>(const BernsteinSpec&, std::complex<double>);
template std::complex<long double> eval_extended<long double>(const BernsteinSpec&,
                                                              std::complex<long double>);

cdouble eval(const BernsteinSpec& spec, cdouble z) { return eval_extended<double>(spec, z); }

double eval(const BernsteinSpec& spec, double x) { return eval(spec, cdouble(x)).real(); }

cdouble deriv(const BernsteinSpec& s, cdouble z, int order) {
  if (order != 1 && order != 2) throw DomainError("derivative order must be 1 or 2");
  check_domain(s, z, false);
  const double o = s.offset();
  const double a = s.alpha();
  switch (s.family()) {
    case Family::log1p: {
      const cdouble w = 1.0 + o + z;
      return order == 1 ? 1.0 / w : -1.0 / (w * w);
    }
    case Family::power:
    case Family::shifted_power: {
      const cdouble w = z + o + (s.family() == Family::shifted_power ? 1.0 : 0.0);
      return order == 1 ? a * std::pow(w, a - 1.0) : a * (a - 1.0) * std::pow(w, a - 2.0);
    }
    case Family::loglog: {
      const cdouble w = z + o + kE;
      const cdouble l = std::log(w);
      return order == 1 ? 1.0 / (w * l) : -(l + 1.0) / (w * w * l * l);
    }
    case Family::truncated_gamma: {
      const cdouble u = 1.0 + o + z;
      if (order == 1) return std::abs(u) < 1e-8 ? 1.0 - u / 2.0 : -expm1(-u) / u;
      if (std::abs(u) < 1e-3) return -0.5 + u / 3.0 - u * u / 8.0 + u * u * u / 30.0;
      return (std::exp(-u) * (u + 1.0) - 1.0) / (u * u);
    }
    case Family::linear:
      return order == 1 ? cdouble(s.drift()) : cdouble(0.0);
    case Family::custom: {
      const CustomMeasure& m = *s.custom_measure();
      if (order == 1) {
        return m.drift + integrate_measure(m, o, [&](double y) { return y * std::exp(-z * y); });
      }
      return -integrate_measure(m, o, [&](double y) { return y * y * std::exp(-z * y); });
    }
  }
  return 0.0;
}

double deriv(const BernsteinSpec& spec, double x, int order) {
  return deriv(spec, cdouble(x), order).real();
}

BernsteinSpec shift(const BernsteinSpec& spec, int k) {
  if (k < 1) throw DomainError("shift index must be >= 1");
  return spec.shifted_by(static_cast<double>(k));
}

double value_at_infinity(const BernsteinSpec& s) {
  switch (s.family()) {
    case Family::linear:
      return s.drift() > 0.0 ? kInf : s.killing();
    case Family::custom: {
      if (s.drift() > 0.0) return kInf;
      const CustomMeasure& m = *s.custom_measure();
      if (!m.table.empty() && m.table.size() >= 2) {
        const double slope0 = std::log(m.table[1].second / m.table[0].second) /
                              std::log(m.table[1].first / m.table[0].first);
        if (slope0 <= -1.0) return kInf;
      }
      // Total mass of the (tilted) measure, or a large-x proxy for functional densities.
      return eval(s, 1e15);
    }
    default:
      return kInf;
  }
}

double inverse(const BernsteinSpec& spec, double y) {
  const double lo_val = eval(spec, 0.0);
  const double hi_val = value_at_infinity(spec);
  if (!(y > lo_val && y < hi_val)) {
    std::ostringstream os;
    os << "inverse: y = " << y << " outside (" << lo_val << ", " << hi_val << ")";
    throw RangeError(os.str());
  }
  double lo = 0.0, hi = 1.0;
  while (eval(spec, hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw RangeError("inverse: could not bracket y");
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(y));
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double f = eval(spec, x) - y;
    if (std::abs(f) <= tol * 1e-2) return x;
    (f < 0.0 ? lo : hi) = x;
    const double dp = deriv(spec, x, 1);
    double next = dp > 0.0 ? x - f / dp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4e-16 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

std::optional<std::function<double(double)>> levy_density(const BernsteinSpec& s) {
  const double o = s.offset();
  const double a = s.alpha();
  switch (s.family()) {
    case Family::log1p:
      return [o](double y) { return y > 0.0 ? std::exp(-(1.0 + o) * y) / y : 0.0; };
    case Family::power:
    case Family::shifted_power: {
      const double c = a / std::tgamma(1.0 - a);
      const double tilt = o + (s.family() == Family::shifted_power ? 1.0 : 0.0);
      return [c, a, tilt](double y) { return y > 0.0 ? c * std::pow(y, -1.0 - a) * std::exp(-tilt * y) : 0.0; };
    }
    case Family::truncated_gamma:
      return [o](double y) { return (y > 0.0 && y < 1.0) ? std::exp(-(1.0 + o) * y) / y : 0.0; };
    case Family::linear:
      return [](double) { return 0.0; };
    case Family::custom: {
      auto dens = s.custom_measure()->density;
      return [dens, o](double y) { return y > 0.0 ? dens(y) * std::exp(-o * y) : 0.0; };
    }
    case Family::loglog:
      return std::nullopt;
  }
  return std::nullopt;
}

HypothesisReport check_hypotheses(const BernsteinSpec& spec, double x_max, int n_probes,
                                  const HypothesisOptions& opts) {
  if (!(x_max > 1.0) || n_probes < 8) throw DomainError("check_hypotheses needs x_max > 1, n_probes >= 8");
  HypothesisReport r;
  if (spec.is_constant()) return r;
  std::vector<double> xs(static_cast<std::size_t>(n_probes));
  for (int i = 0; i < n_probes; ++i) xs[static_cast<std::size_t>(i)] = std::pow(x_max, double(i) / (n_probes - 1));

  bool ratios_finite = true;
  std::vector<double> x2d;
  for (double x : xs) {
    const double d1 = deriv(spec, x, 1);
    const double d2x = deriv(spec, 2.0 * x, 1);
    if (!(d1 > 0.0) || !(d2x > 0.0)) {
      ratios_finite = false;
      break;
    }
    const double ratio = d1 / d2x;
    r.max_ratio = std::max(r.max_ratio, ratio);
    r.last_ratio = ratio;
    x2d.push_back(x * x * d1);
  }
  r.ratio_bounded = ratios_finite && r.max_ratio <= opts.ratio_cap;
  if (ratios_finite) {
    // x^2 phi'(x) increasing over the upper quarter of the probes and growing overall.
    const std::size_t start = x2d.size() - std::max<std::size_t>(2, x2d.size() / 4);
    bool inc = true;
    for (std::size_t i = start + 1; i < x2d.size(); ++i) inc = inc && x2d[i] > x2d[i - 1];
    r.x2_dphi_increasing = inc && x2d.back() > 10.0 * x2d[start];
  }
  const double p1 = eval(spec, 1.0);
  r.phi_at_xmax = eval(spec, x_max);
  const double p_half = eval(spec, x_max / 2.0);
  r.phi_unbounded = r.phi_at_xmax >= opts.growth_floor * std::max(p1, 1e-300) &&
                    (r.phi_at_xmax - p_half) > 1e-8 * r.phi_at_xmax;
  return r;
}

}  // namespace expfun

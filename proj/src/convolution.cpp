#include "expfun/convolution.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "expfun/errors.hpp"

namespace expfun {
namespace {

std::function<double(double)> interpolant(std::vector<double> x, std::vector<double> y) {
  if (x.size() == 1) {
    const double c = y[0];
    return [c](double) { return c; };
  }
  if (x.size() < 4) {
    return [x, y](double s) {
      const auto it = std::upper_bound(x.begin(), x.end(), s);
      const auto i = static_cast<std::size_t>(std::clamp<long>(it - x.begin() - 1, 0, long(x.size()) - 2));
      const double w = (s - x[i]) / (x[i + 1] - x[i]);
      return (1.0 - w) * y[i] + w * y[i + 1];
    };
  }
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x), std::move(y));
  return [spline](double s) { return (*spline)(s); };
}

void check_exponent(double e) {
  if (!(e > -1.0)) throw SingularityError("singularity exponent must exceed -1 for integrability");
  if (e > 0.0) throw DomainError("singularity exponent must lie in (-1, 0]");
}

// int_{x0}^{x1} u^{a-1} (1-u)^{b-1} du, using the complement near u = 1.
double beta_piece(double a, double b, double x0, double x1) {
  if (x1 <= 0.5) return boost::math::beta(a, b, x1) - boost::math::beta(a, b, x0);
  if (x0 >= 0.5) return boost::math::betac(a, b, x0) - boost::math::betac(a, b, x1);
  return (boost::math::beta(a, b, 0.5) - boost::math::beta(a, b, x0)) +
         (boost::math::betac(a, b, 0.5) - boost::math::betac(a, b, x1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    out.push_back(cell);
  }
  return out;
}

}  // namespace

TabulatedFunction::TabulatedFunction(std::vector<double> t_grid, std::vector<cdouble> values,
                                     double singularity_exponent)
    : t_(std::move(t_grid)), v_(std::move(values)), e_(singularity_exponent) {
  check_exponent(e_);
  if (t_.empty() || t_.size() != v_.size()) throw GridError("curve needs matching, non-empty t and value arrays");
  if (t_.front() < 0.0) throw GridError("curve grid must start at t >= 0");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1])) throw GridError("curve grid must be strictly increasing");
  }
  std::vector<double> x;
  std::vector<double> re;
  std::vector<double> im;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (t_[i] == 0.0 && e_ != 0.0) continue;
    if (!std::isfinite(v_[i].real()) || !std::isfinite(v_[i].imag())) {
      throw DomainError("curve values must be finite");
    }
    const double scale = e_ == 0.0 ? 1.0 : std::pow(t_[i], -e_);
    x.push_back(t_[i]);
    re.push_back(v_[i].real() * scale);
    im.push_back(v_[i].imag() * scale);
  }
  if (x.empty()) throw GridError("curve has no usable nodes");
  re_ = interpolant(x, std::move(re));
  im_ = interpolant(std::move(x), std::move(im));
}

TabulatedFunction TabulatedFunction::sample(const std::function<cdouble(double)>& fn, double span, int n,
                                            double singularity_exponent) {
  if (!(span > 0.0) || n < 1) throw GridError("sample needs span > 0 and n >= 1");
  std::vector<double> t;
  std::vector<cdouble> v;
  if (singularity_exponent == 0.0) {
    t.push_back(0.0);
    v.push_back(fn(0.0));
  }
  for (int j = 1; j <= n; ++j) {
    const double s = span * j / n;
    t.push_back(s);
    v.push_back(fn(s));
  }
  return TabulatedFunction(std::move(t), std::move(v), singularity_exponent);
}

cdouble TabulatedFunction::regular_part(double s) const {
  const std::size_t i0 = e_ != 0.0 && t_.front() == 0.0 ? 1 : 0;
  const double first = t_[i0];
  if (s >= first || t_.size() < i0 + 2) {
    const double x = std::max(s, first);
    return {re_(x), im_(x)};
  }
  // Linear continuation below the first node.
  const double second = t_[i0 + 1];
  const cdouble r0(re_(first), im_(first));
  const cdouble r1(re_(second), im_(second));
  return r0 + (r1 - r0) * ((s - first) / (second - first));
}

cdouble TabulatedFunction::operator()(double s) const {
  const cdouble r = regular_part(s);
  return e_ == 0.0 ? r : r * std::pow(s, e_);
}

cdouble convolve_singular(const TabulatedFunction& f, const TabulatedFunction& g, double t, int cells) {
  check_exponent(f.singularity_exponent());
  check_exponent(g.singularity_exponent());
  if (!(t > 0.0)) throw DomainError("convolution needs t > 0");
  if (cells < 1) throw GridError("convolution needs at least one cell");
  const double reach = t * (1.0 - 1e-12);
  if (reach > f.span() || reach > g.span()) throw GridError("t exceeds the span of a tabulated curve");

  // s = t x: t^{1+e_f+e_g} int_0^1 (1-x)^{e_f} x^{e_g} r_f(t(1-x)) r_g(t x) dx.
  const double a = g.singularity_exponent() + 1.0;
  const double b = f.singularity_exponent() + 1.0;
  const double dx = 1.0 / cells;
  std::vector<cdouble> p(static_cast<std::size_t>(cells) + 1);
  for (int j = 0; j <= cells; ++j) {
    const double x = double(j) * dx;
    p[static_cast<std::size_t>(j)] = f.regular_part(t * (1.0 - x)) * g.regular_part(t * x);
  }
  cdouble sum = 0.0;
  for (int j = 0; j < cells; ++j) {
    const double x0 = double(j) * dx;
    const double x1 = j + 1 == cells ? 1.0 : double(j + 1) * dx;
    const double m0 = beta_piece(a, b, x0, x1);
    const double m1 = beta_piece(a + 1.0, b, x0, x1);
    const double w0 = (x1 * m0 - m1) / (x1 - x0);
    const double w1 = (m1 - x0 * m0) / (x1 - x0);
    sum += w0 * p[static_cast<std::size_t>(j)] + w1 * p[static_cast<std::size_t>(j + 1)];
  }
  return std::pow(t, a + b - 1.0) * sum;
}

cdouble identity_rhs(cdouble z, double t, std::optional<double> cp_lambda) {
  const double pi = boost::math::constants::pi<double>();
  const cdouble base = pi / std::sin(pi * z);
  if (!cp_lambda) return base;
  const double lambda = *cp_lambda;
  if (!(lambda > 0.0)) throw DomainError("compound Poisson intensity must be positive");
  if (!(t > 0.0)) return 0.0;
  const double x = lambda * t;
  // 1 - e^{-x} - x e^{-x} = sum_{n>=2} (-1)^n (n-1) x^n / n!.
  const double tail = x < 1e-3 ? x * x * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0)
                               : -std::expm1(-x) - x * std::exp(-x);
  return base * ((lambda + 1.0) * (lambda + 1.0) / (lambda * lambda) * tail);
}

IdentityReport verify_identity(const TabulatedFunction& f, const TabulatedFunction& g, cdouble z, double t,
                               std::optional<double> cp_lambda, int cells) {
  if (!(z.real() > 0.0 && z.real() < 1.0)) throw DomainError("verify_identity needs 0 < Re(z) < 1");
  IdentityReport r;
  r.lhs = convolve_singular(f, g, t, cells);
  r.rhs = identity_rhs(z, t, cp_lambda);
  r.abs_residual = std::abs(r.lhs - r.rhs);
  r.rel_residual = r.abs_residual / std::max(std::abs(r.rhs), 1e-300);
  return r;
}

TabulatedFunction read_curve_csv(const std::string& path, std::optional<double> exponent_override) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open curve file " + path);
  double exponent = 0.0;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      const auto pos = line.find("singularity_exponent=");
      if (pos != std::string::npos) {
        try {
          exponent = std::stod(line.substr(pos + 21));
        } catch (const std::exception&) {
          throw IoError("bad singularity_exponent line in " + path);
        }
      }
      continue;
    }
    header = split_csv(line);
    break;
  }
  auto column = [&](std::initializer_list<const char*> names) -> long {
    for (const char* name : names) {
      const auto it = std::find(header.begin(), header.end(), name);
      if (it != header.end()) return it - header.begin();
    }
    return -1;
  };
  const long ct = column({"t"});
  const long cre = column({"re", "mean_re", "value"});
  const long cim = column({"im", "mean_im"});
  if (ct < 0 || cre < 0) throw IoError("curve file " + path + " needs columns t and re");
  std::vector<double> t;
  std::vector<cdouble> v;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    const auto cells = split_csv(line);
    const auto need = static_cast<std::size_t>(std::max({ct, cre, cim}));
    if (cells.size() <= need) throw IoError("short row in " + path + ": " + line);
    try {
      t.push_back(std::stod(cells[static_cast<std::size_t>(ct)]));
      const double re = std::stod(cells[static_cast<std::size_t>(cre)]);
      const double im = cim >= 0 ? std::stod(cells[static_cast<std::size_t>(cim)]) : 0.0;
      v.emplace_back(re, im);
    } catch (const std::exception&) {
      throw IoError("non-numeric row in " + path + ": " + line);
    }
  }
  return TabulatedFunction(std::move(t), std::move(v), exponent_override.value_or(exponent));
}

void write_curve_csv(const std::string& path, const TabulatedFunction& f) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write curve file " + path);
  out << "# singularity_exponent=" << std::setprecision(17) << f.singularity_exponent() << "\n";
  out << "t,re,im\n";
  for (std::size_t i = 0; i < f.t_grid().size(); ++i) {
    out << f.t_grid()[i] << "," << f.values()[i].real() << "," << f.values()[i].imag() << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace expfun

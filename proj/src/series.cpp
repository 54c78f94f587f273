#include "expfun/series.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

#include "expfun/bgamma.hpp"
#include "expfun/errors.hpp"
#include "expfun/parallel.hpp"
#include "expfun/quadrature.hpp"

namespace expfun {
namespace {

bool phi_vanishes_at_zero(const BernsteinSpec& s) { return eval(s, 0.0) == 0.0; }

void check_strip(const BernsteinSpec& s, cdouble z) {
  const double bound = -1.0 + (phi_vanishes_at_zero(s) ? a_phi(s) : 0.0);
  if (!(z.real() > bound)) {
    std::ostringstream os;
    os << "Re(z) = " << z.real() << " is outside the strip Re(z) > " << bound << " for "
       << s.describe();
    throw DomainError(os.str());
  }
}

// n when z is exactly a non-negative integer n, else -1.
int nonneg_integer(cdouble z) {
  if (z.imag() != 0.0 || z.real() < 0.0 || z.real() != std::floor(z.real()) || z.real() > 1e6) return -1;
  return static_cast<int>(z.real());
}

// int_V^inf v^{-1-s} e^{-v t} dv
cdouble power_exp_tail(double v, cdouble s, double t) {
  const double scale = std::exp(-v * t);
  if (scale == 0.0) return 0.0;
  auto f = [&](double u) -> cdouble {
    const double x = v + u;
    return std::exp(-(1.0 + s) * std::log(x) - u * t);
  };
  return scale * quad::half_line(f, 0.0, 1e-12);
}

// Asymptotic model H(z,u)/phi'(u) ~ sum_m c_m phi^{-1-z-m} + sum_m d_m r phi^{-1-z-m}, r = phi''/phi'.
// c_0 = 1/Gamma(-z) is fixed; the rest is fitted by least squares on terms
// spread geometrically over [K/4, K].
struct TailModel {
  int powers = 0;       // c_1..c_powers
  int corrections = 0;  // d_0..d_{corrections-1}
  std::vector<cdouble> coef;  // c_0, c_1.., d_0..

  cdouble value(double phi, double r, cdouble z) const {
    const double lp = std::log(phi);
    cdouble out = 0.0;
    for (int m = 0; m <= powers; ++m) out += coef[static_cast<std::size_t>(m)] * std::exp(-(1.0 + z + double(m)) * lp);
    for (int m = 0; m < corrections; ++m) {
      out += coef[static_cast<std::size_t>(powers + 1 + m)] * r * std::exp(-(1.0 + z + double(m)) * lp);
    }
    return out;
  }
};

TailModel fit_model(const std::vector<TermContext>& terms, const std::vector<double>& ratio, cdouble z, int K,
                    int powers, int corrections, int rows) {
  TailModel model;
  model.powers = powers;
  model.corrections = corrections;
  model.coef.push_back(reciprocal_gamma(-z));
  std::vector<int> ks;
  for (int r = 0; r < rows; ++r) {
    const int k = static_cast<int>(std::lround(K / 4.0 * std::pow(4.0, double(r) / (rows - 1))));
    if (ks.empty() || k > ks.back()) ks.push_back(std::min(k, K));
  }
  const int n = static_cast<int>(ks.size());
  const int cols = powers + corrections;
  Eigen::MatrixXcd A(n, cols);
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(ks[static_cast<std::size_t>(i)] - 1);
    const TermContext& tc = terms[idx];
    const double lp = std::log(tc.phi_k);
    b(i) = tc.h_value / tc.dphi_k - model.coef[0] * std::exp(-(1.0 + z) * lp);
    for (int m = 1; m <= powers; ++m) A(i, m - 1) = std::exp(-(1.0 + z + double(m)) * lp);
    for (int m = 0; m < corrections; ++m) A(i, powers + m) = ratio[idx] * std::exp(-(1.0 + z + double(m)) * lp);
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int m = 0; m < cols; ++m) {
    if (scale(m) == 0.0) scale(m) = 1.0;
    A.col(m) /= scale(m);
  }
  const Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(b);
  for (int m = 0; m < cols; ++m) model.coef.push_back(sol(m) / scale(m));
  return model;
}

// Integrals int_K^inf phi'(u) b(u) e^{-phi(u) t} du of the basis functions.
struct BasisIntegrals {
  std::vector<cdouble> powers;       // m = 0..
  std::vector<cdouble> corrections;  // m = 0..
};

BasisIntegrals basis_integrals(const BernsteinSpec& spec, int K, cdouble z, double t, int powers, int corrections) {
  BasisIntegrals out;
  const double v = eval(spec, double(K));
  for (int m = 0; m <= powers; ++m) out.powers.push_back(power_exp_tail(v, z + double(m), t));
  const double w = std::exp(-v * t);
  for (int m = 0; m < corrections; ++m) {
    if (w == 0.0) {
      out.corrections.push_back(0.0);
      continue;
    }
    auto f = [&](double u) -> cdouble {
      const double x = double(K) + u;
      const double p = eval(spec, x);
      return deriv(spec, x, 2) * std::exp(-(1.0 + z + double(m)) * std::log(p) - (p - v) * t);
    };
    out.corrections.push_back(w * quad::half_line(f, 0.0, 1e-10));
  }
  return out;
}

// sum_{k>K} H(z,k) e^{-phi(k) t} for the model, by Euler-Maclaurin on g(u) = phi'(u) model(u) e^{-phi(u) t}.
cdouble model_tail(const BernsteinSpec& spec, const TailModel& model, const BasisIntegrals& ints, int K, cdouble z,
                   double t) {
  cdouble integral = 0.0;
  for (int m = 0; m <= model.powers; ++m) integral += model.coef[static_cast<std::size_t>(m)] * ints.powers[static_cast<std::size_t>(m)];
  for (int m = 0; m < model.corrections; ++m) {
    integral += model.coef[static_cast<std::size_t>(model.powers + 1 + m)] * ints.corrections[static_cast<std::size_t>(m)];
  }
  auto g = [&](double u) {
    const double p = eval(spec, u);
    const double d1 = deriv(spec, u, 1);
    return d1 * model.value(p, deriv(spec, u, 2) / d1, z) * std::exp(-p * t);
  };
  const double h = 1e-3 * K;
  const cdouble dg = (g(K + h) - g(K - h)) / (2.0 * h);
  return integral - g(double(K)) / 2.0 - dg / 12.0;
}

}  // namespace

LogTerm h_term_log(const BernsteinSpec& spec, cdouble z, int k) {
  if (k < 1) throw DomainError("h_term needs k >= 1");
  if (spec.is_constant()) throw DomainError("h_term is undefined for constant phi");
  check_strip(spec, z);
  LogTerm out;
  const int n = nonneg_integer(z);
  if (n >= 0 && k >= n + 1) {
    out.zero = true;
    return out;
  }
  const BernsteinSpec sk = spec.shifted_by(double(k));
  // Mean-value form for the factor phi(k) - phi(k + delta) when z is close to an integer.
  const double nr = std::round(z.real());
  const cdouble delta = z - nr;
  const int special = (std::abs(delta) < 1e-8 && nr >= 0.0 && nr <= k - 1) ? k - static_cast<int>(nr) : 0;

  cdouble acc = 0.0;
  for (int j = 1; j <= k; ++j) {
    cdouble factor;
    if (j == special) {
      factor = -delta * deriv(spec, double(k) + delta / 2.0, 1);
    } else {
      factor = -eval(sk, z + double(j - k));
    }
    acc += std::log(factor);
  }
  for (int j = 1; j < k; ++j) acc -= std::log(-eval(sk, double(j - k)));
  acc -= std::log(eval(spec, double(k)));
  WeierstrassCache cache(sk);
  acc += std::log(mellin_infinity(cache, z));
  out.log_value = acc;
  return out;
}

cdouble h_term(const BernsteinSpec& spec, cdouble z, int k, double log_cap) {
  const LogTerm lt = h_term_log(spec, z, k);
  if (lt.zero) return 0.0;
  if (lt.log_value.real() > log_cap) throw OverflowGuard(lt.log_value.real(), lt.log_value.imag());
  return std::exp(lt.log_value);
}

double tail_bound(const BernsteinSpec& spec, cdouble z, int l, double t, const TailConstants& cst) {
  if (l < 1) throw DomainError("tail_bound needs l >= 1");
  if (!(t > 0.0)) throw DomainError("tail_bound needs t > 0");
  const double a = z.real();
  const double kz = cst.k_scale * std::max(std::abs(reciprocal_gamma(-z)), cst.k_floor);
  const double cc = cst.c * (std::abs(a) + a * a / 2.0);

  // 1/(x^2 phi'(x)) at the root of phi(x) + x phi'(x) = phi(k).
  auto y_term = [&](double k, double pk) {
    double x;
    try {
      const double lo = inverse(spec, pk / 2.0);
      const double hi = k / 2.0;
      auto h = [&](double u) { return eval(spec, u) + u * deriv(spec, u, 1) - pk; };
      const double hlo = h(lo), hhi = h(hi);
      if (!(lo < hi) || hlo > 0.0 || hhi < 0.0) throw RootError("y_k is not bracketed");
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(
          h, lo, hi, hlo, hhi, boost::math::tools::eps_tolerance<double>(40), iters);
      x = 0.5 * (r.first + r.second);
    } catch (const Error&) {
      // Lemma-type fallback with exponent 1/2.
      x = std::max(1.0, std::sqrt(k));
    }
    return 1.0 / (x * x * deriv(spec, x, 1));
  };
  // Corrected envelope f(k) and the integral bound F(k) of sum_{j>k} f(j).
  auto envelope = [&](double k, double& integral) {
    const double pk = eval(spec, k);
    const double dk = deriv(spec, k, 1);
    const double corr = cc * pk * (8.0 * std::log(k) / (k * k * dk) + y_term(k, pk));
    const double e = std::exp(corr);
    auto g = [&](double u) { return std::exp(-(1.0 + a) * std::log(pk + u) - u * t); };
    integral = kz * e * std::exp(-pk * t) * quad::half_line(g, 0.0, 1e-10);
    return kz * e * dk * std::exp(-(1.0 + a) * std::log(pk) - pk * t);
  };

  constexpr int kCap = 1000000;
  double integral = 0.0;
  double sum = 0.0;
  int k = l + 1;
  double f = envelope(k, integral);
  auto switch_here = [&](double fk, double Fk, int kk) {
    return fk <= 1e-3 * (fk + Fk) || fk + Fk < 1e-16 * sum || fk + Fk < 1e-300 || kk >= kCap;
  };
  while (!switch_here(f, integral, k)) {
    sum += f;
    ++k;
    f = envelope(k, integral);
  }
  return sum + f + integral;
}

static SeriesResult moment_raw(const BernsteinSpec& spec, cdouble z, double t, double tol,
                               const MomentOptions& opts) {
  if (!(t > 0.0)) throw DomainError("moment needs t > 0");
  if (!(tol > 0.0)) throw DomainError("moment needs tol > 0");
  if (spec.is_constant()) throw DomainError("moment needs a non-constant phi");
  check_strip(spec, z);

  SeriesResult res;
  const HypothesisReport hyp = check_hypotheses(spec);
  if (!hyp.all_pass()) {
    if (!opts.allow_unverified) {
      throw DomainError("series hypotheses fail on the probe grid for " + spec.describe() +
                        " (override with allow_unverified)");
    }
    res.warnings.push_back("hypotheses_unverified");
  }

  const WeierstrassCache cache(spec);
  const cdouble lead = mellin_infinity(cache, z);

  auto make_term = [&](int k) {
    TermContext tc;
    tc.k = k;
    tc.phi_k = eval(spec, double(k));
    tc.dphi_k = deriv(spec, double(k), 1);
    tc.exp_weight = std::exp(-tc.phi_k * t);
    const LogTerm lt = h_term_log(spec, z, k);
    if (!lt.zero) {
      if (lt.log_value.real() > opts.log_cap) throw OverflowGuard(lt.log_value.real(), lt.log_value.imag());
      tc.h_value = std::exp(lt.log_value);
    }
    return tc;
  };

  const int n = nonneg_integer(z);
  if (n >= 0) {
    cdouble sum = 0.0;
    for (int k = 1; k <= n; ++k) {
      const TermContext tc = make_term(k);
      sum += tc.h_value * tc.exp_weight;
    }
    res.value = lead + sum;
    res.terms_used = n + 1;
    res.converged = true;
    return res;
  }

  if (eval(spec, double(opts.k_max)) * t < 30.0) res.warnings.push_back("slow_decay");

  std::vector<TermContext> terms;
  terms.reserve(1024);
  cdouble partial = 0.0;
  int small_run = 0;
  int last_bound_k = -1000;
  cdouble est_prev = 0.0;
  bool have_prev = false;
  double best_cert = std::numeric_limits<double>::infinity();
  cdouble best_value = lead;
  constexpr int kRows = 40;
  std::vector<double> ratio;
  std::size_t ratio_done = 0;

  int k_done = 0;
  for (int checkpoint = 64; k_done < opts.k_max; checkpoint = std::min(opts.k_max, checkpoint * 2)) {
    const int first = k_done + 1;
    terms.resize(static_cast<std::size_t>(checkpoint));
    parallel_for(static_cast<std::size_t>(first), static_cast<std::size_t>(checkpoint) + 1, opts.threads,
                 [&](std::size_t k) { terms[k - 1] = make_term(static_cast<int>(k)); });

    for (int k = first; k <= checkpoint; ++k) {
      const TermContext& tc = terms[static_cast<std::size_t>(k - 1)];
      const cdouble term = tc.h_value * tc.exp_weight;
      partial += term;
      const double scale = std::max(1.0, std::abs(lead + partial));
      small_run = std::abs(term) < tol * std::abs(lead + partial) ? small_run + 1 : 0;
      if (small_run >= 3 && k - last_bound_k >= 16) {
        last_bound_k = k;
        const double tb = tail_bound(spec, z, k, t, opts.tail);
        if (tb < tol * scale) {
          res.value = lead + partial;
          res.terms_used = k + 1;
          res.tail_certificate = tb;
          res.converged = true;
          return res;
        }
      }
    }
    k_done = checkpoint;

    if (opts.accelerate && checkpoint >= 64) {
      ratio.resize(terms.size());
      for (std::size_t i = ratio_done; i < terms.size(); ++i) {
        ratio[i] = deriv(spec, double(i + 1), 2) / terms[i].dphi_k;
      }
      ratio_done = terms.size();
      const BasisIntegrals ints = basis_integrals(spec, checkpoint, z, t, 3, 2);
      const cdouble t2 = model_tail(spec, fit_model(terms, ratio, z, checkpoint, 2, 1, kRows), ints, checkpoint, z, t);
      const cdouble t3 = model_tail(spec, fit_model(terms, ratio, z, checkpoint, 3, 2, kRows), ints, checkpoint, z, t);
      const cdouble est = partial + t3;
      double cert = std::abs(t3 - t2);
      cert = have_prev ? std::max(cert, std::abs(est - est_prev)) : std::numeric_limits<double>::infinity();
      est_prev = est;
      have_prev = true;
      if (cert < best_cert) {
        best_cert = cert;
        best_value = lead + est;
      }
      if (cert <= tol * std::max(1.0, std::abs(lead + est))) {
        res.value = lead + est;
        res.terms_used = checkpoint + 1;
        res.tail_certificate = cert;
        res.converged = true;
        return res;
      }
    }
  }

  res.value = opts.accelerate ? best_value : lead + partial;
  res.terms_used = k_done + 1;
  res.tail_certificate = opts.accelerate ? best_cert : tail_bound(spec, z, k_done, t, opts.tail);
  res.converged = false;
  if (opts.throw_on_failure) {
    std::ostringstream os;
    os << "moment series did not reach tol " << tol << " within " << opts.k_max << " terms (certificate "
       << res.tail_certificate << ")";
    for (const auto& w : res.warnings) os << "; " << w;
    throw ConvergenceError(os.str());
  }
  return res;
}

SeriesResult moment(const BernsteinSpec& spec, cdouble z, double t, double tol, const MomentOptions& opts) {
  SeriesResult res = moment_raw(spec, z, t, tol, opts);
  // I(t) > 0, so real orders give real moments.
  if (z.imag() == 0.0) res.value.imag(0.0);
  return res;
}

SeriesResult neg_int_moment(const BernsteinSpec& spec, int l, double t, double tol) {
  if (!(t > 0.0)) throw DomainError("neg_int_moment needs t > 0");
  if (l >= 0) throw DomainError("neg_int_moment needs a negative integer l");
  if (!phi_vanishes_at_zero(spec)) throw DomainError("neg_int_moment needs phi(0) = 0");
  const double a = a_phi(spec);
  if (!(a < 0.0) || !(double(l) > -1.0 + a)) {
    std::ostringstream os;
    os << "l = " << l << " is outside (-1 + a_phi, 0) with a_phi = " << a << " for " << spec.describe();
    throw DomainError(os.str());
  }
  // Coefficients of P(v) = prod_{j=1}^{n} (v - phi(j+l)) / n!, lowest degree first.
  const int n = -l - 1;
  std::vector<double> coef{1.0};
  for (int j = 1; j <= n; ++j) {
    const double root = eval(spec, double(j + l));
    std::vector<double> next(coef.size() + 1, 0.0);
    for (std::size_t i = 0; i < coef.size(); ++i) {
      next[i + 1] += coef[i];
      next[i] -= root * coef[i];
    }
    coef = std::move(next);
  }
  double fact = 1.0;
  for (int j = 2; j <= n; ++j) fact *= j;
  for (auto& c : coef) c /= fact;

  auto poly = [&](double v, double& dp) {
    double p = 0.0;
    dp = 0.0;
    for (std::size_t i = coef.size(); i-- > 0;) {
      dp = dp * v + p;
      p = p * v + coef[i];
    }
    return p;
  };
  auto term = [&](double k) {
    double dp;
    const double v = eval(spec, k);
    return poly(v, dp) * deriv(spec, k, 1) * std::exp(-v * t);
  };
  // int_V^inf P(v) e^{-vt} dv in closed form.
  auto poly_exp_tail = [&](double v) {
    double total = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      double inner = 0.0;
      double ratio = 1.0;  // i!/r! / t^{i-r+1} built from r = i downwards
      double vr = std::pow(v, double(i));
      for (std::size_t r = i + 1; r-- > 0;) {
        inner += ratio / t * vr;
        ratio *= double(r) / t;
        vr = v != 0.0 ? vr / v : 0.0;
      }
      total += coef[i] * inner;
    }
    return total * std::exp(-v * t);
  };
  auto em_tail = [&](int K) {
    const double k = double(K);
    const double v = eval(spec, k);
    const double d1 = deriv(spec, k, 1);
    const double d2 = deriv(spec, k, 2);
    double dp;
    const double p = poly(v, dp);
    const double w = std::exp(-v * t);
    const double f = p * d1 * w;
    const double df = (dp * d1 * d1 + p * d2 - t * p * d1 * d1) * w;
    return poly_exp_tail(v) + f / 2.0 - df / 12.0;
  };

  long double sum = 0.0L;
  int k_next = 0;
  auto sum_to = [&](int K) {
    for (; k_next < K; ++k_next) sum += term(double(k_next));
    return static_cast<double>(sum);
  };
  int K = 64;
  double prev = sum_to(K) + em_tail(K);
  SeriesResult res;
  for (; K < (1 << 22);) {
    K *= 2;
    const double cur = sum_to(K) + em_tail(K);
    const double diff = std::abs(cur - prev);
    prev = cur;
    if (diff <= tol * std::max(std::abs(cur), 1e-300)) {
      res.value = cur;
      res.terms_used = K;
      res.tail_certificate = diff;
      res.converged = true;
      return res;
    }
  }
  throw ConvergenceError("neg_int_moment did not converge for " + spec.describe());
}

double minus_two_moment_via_ode(const BernsteinSpec& spec, double t, double dt) {
  if (!(a_phi(spec) < -1.0)) throw DomainError("minus_two_moment_via_ode needs a_phi < -1 (phi(-1) defined)");
  if (!(dt > 0.0) || !(t > dt)) throw DomainError("minus_two_moment_via_ode needs 0 < dt < t");
  auto m1 = [&](double s) { return neg_int_moment(spec, -1, s, 1e-14).value.real(); };
  const double d = (m1(t + dt) - m1(t - dt)) / (2.0 * dt);
  return -d - eval(spec, -1.0) * m1(t);
}

double zeta(double s) {
  if (!(s > 1.0)) throw RangeError("zeta(s) needs s > 1 (simple pole at s = 1)");
  return neg_int_moment(BernsteinSpec::log1p(), -1, s - 1.0, 1e-13).value.real();
}

}  // namespace expfun

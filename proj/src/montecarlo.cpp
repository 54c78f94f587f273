#include "expfun/montecarlo.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "expfun/errors.hpp"
#include "expfun/parallel.hpp"
#include "expfun/philox.hpp"
#include "expfun/quadrature.hpp"

namespace expfun {
namespace detail {
void exp_neg(const double* x, double* y, std::size_t n);
void chord_integrals(const double* t, const double* v, const double* e, std::size_t stride, std::size_t pieces,
                     double* out);
void philox_blocks(std::uint32_t k0, std::uint32_t k1, std::uint32_t c2, std::uint32_t c3, std::uint64_t first,
                   std::size_t n, std::uint32_t* out);
double sum(const double* x, std::size_t n);
void box_muller(const std::uint32_t* u, std::size_t n, double* angle, double* out);
}

// Tail T(y) = mu([y, inf)) on nodes y_0 = epsilon < y_1 < ...; T(y_last) ~ 0.
struct JumpTable {
  std::vector<double> y;
  std::vector<double> tail;
};

namespace {

// Same stream as Philox4x32(seed, stream), generated in batches of up to 256 blocks.
class Engine {
 public:
  using result_type = std::uint32_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Engine(std::uint64_t seed, std::uint64_t stream)
      : k0_(static_cast<std::uint32_t>(seed)),
        k1_(static_cast<std::uint32_t>(seed >> 32)),
        c2_(static_cast<std::uint32_t>(stream)),
        c3_(static_cast<std::uint32_t>(stream >> 32)) {}

  result_type operator()() {
    if (pos_ == len_) refill();
    return buf_[pos_++];
  }

  /// The next n words, in order.
  void take(std::uint32_t* out, std::size_t n) {
    while (n > 0) {
      if (pos_ == len_) refill();
      const std::size_t m = std::min(n, len_ - pos_);
      std::copy_n(buf_.data() + pos_, m, out);
      pos_ += m;
      out += m;
      n -= m;
    }
  }

 private:
  void refill() {
    batch_ = std::min<std::size_t>(batch_ * 2, kMaxBlocks);
    detail::philox_blocks(k0_, k1_, c2_, c3_, next_, batch_, buf_.data());
    next_ += batch_;
    len_ = 4 * batch_;
    pos_ = 0;
  }

  static constexpr std::size_t kMaxBlocks = 256;
  std::uint32_t k0_, k1_, c2_, c3_;
  std::uint64_t next_ = 0;
  std::size_t batch_ = 1;
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  std::array<std::uint32_t, 4 * kMaxBlocks> buf_;
};

double uniform(Engine& rng) {
  // (0, 1]: never returns 0, so logs stay finite.
  return 1.0 - boost::random::uniform_01<double>()(rng);
}

double exponential(Engine& rng, double rate) { return boost::random::exponential_distribution<double>(rate)(rng); }

double sample_jump(const JumpLaw& law, Engine& rng) {
  switch (law.kind) {
    case JumpLaw::Kind::normal:
      return boost::random::normal_distribution<double>(0.0, law.p1)(rng);
    case JumpLaw::Kind::uniform:
      return law.p1 * (2.0 * uniform(rng) - 1.0);
    case JumpLaw::Kind::laplace: {
      const double e = exponential(rng, 1.0 / law.p1);
      return uniform(rng) < 0.5 ? -e : e;
    }
    case JumpLaw::Kind::exponential:
      return exponential(rng, law.p1);
    case JumpLaw::Kind::gamma:
      return boost::random::gamma_distribution<double>(law.p1, 1.0)(rng) / law.p2;
  }
  return 0.0;
}

double sample_table(const JumpTable& table, Engine& rng) {
  const double target = uniform(rng) * table.tail.front();
  // Largest i with tail[i] >= target.
  std::size_t lo = 0;
  std::size_t hi = table.tail.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (table.tail[mid] >= target) lo = mid;
    else hi = mid;
  }
  const double t0 = table.tail[lo];
  const double t1 = table.tail[hi];
  const double y0 = table.y[lo];
  const double y1 = table.y[hi];
  if (t1 > 0.0 && t0 > t1) {
    const double w = std::log(target / t0) / std::log(t1 / t0);
    return y0 * std::pow(y1 / y0, w);
  }
  const double w = t0 > t1 ? (t0 - target) / (t0 - t1) : 0.0;
  return y0 + w * (y1 - y0);
}

std::shared_ptr<const JumpTable> build_table(const std::function<double(double)>& density, double epsilon,
                                             const std::vector<double>& extra_nodes) {
  std::vector<double> nodes;
  const double ratio = std::pow(2.0, 0.25);
  constexpr double y_cap = 1e15;
  double y = epsilon;
  double mass = 0.0;
  std::vector<double> masses;
  int quiet = 0;
  while (y < y_cap) {
    nodes.push_back(y);
    double next = y * ratio;
    for (double e : extra_nodes) {
      if (e > y * (1.0 + 1e-12) && e < next) next = e;
    }
    const double m = quad::smooth(density, y, next, 1e-10);
    masses.push_back(m);
    mass += m;
    y = next;
    quiet = (m <= 1e-17 * mass) ? quiet + 1 : 0;
    if (quiet >= 8 && y > 1.0) break;
  }
  nodes.push_back(y);
  auto table = std::make_shared<JumpTable>();
  table->y = std::move(nodes);
  table->tail.assign(table->y.size(), 0.0);
  for (std::size_t i = masses.size(); i-- > 0;) table->tail[i] = table->tail[i + 1] + masses[i];
  return table;
}

double default_step(const LevySpec& spec, const McControl& ctrl) {
  if (ctrl.step > 0.0) return ctrl.step;
  return spec.kind == LevySpec::Kind::brownian ? std::ldexp(1.0, -12) : std::ldexp(1.0, -8);
}

const char* jump_name(GridJump j) {
  switch (j) {
    case GridJump::start: return "start";
    case GridJump::midpoint: return "midpoint";
    case GridJump::end: return "end";
  }
  return "?";
}

std::string scheme_of(const LevySpec& spec, const McControl& ctrl) {
  std::ostringstream os;
  switch (spec.kind) {
    case LevySpec::Kind::gamma:
      os << "gamma_grid;h=" << default_step(spec, ctrl) << ";jump=" << jump_name(ctrl.jump);
      break;
    case LevySpec::Kind::brownian:
      os << "brownian_linear;h=" << default_step(spec, ctrl);
      break;
    case LevySpec::Kind::truncated_custom:
      os << "exact_events;epsilon=" << spec.epsilon;
      break;
    default:
      os << "exact_events";
  }
  return os.str();
}

void push(Path& p, double time, double level, double slope) {
  p.breakpoints.push_back(time);
  p.levels.push_back(level);
  p.slopes.push_back(slope);
}

// Brownian path on the grid s_j = j h, ending at the stopping time.
struct GridNodes {
  std::vector<double> time;
  std::vector<double> level;
  std::vector<double> expneg;
  std::optional<double> killed_at;
  double stop = 0.0;
};

void brownian_nodes(const LevySpec& spec, double t, const McControl& ctrl, std::uint64_t index, GridNodes& g) {
  Engine rng(ctrl.seed, index);
  g.killed_at.reset();
  double end = t;
  if (spec.killing_q > 0.0) {
    const double e = exponential(rng, spec.killing_q);
    if (e < t) {
      g.killed_at = e;
      end = e;
    }
  }
  g.stop = end;
  const double h = default_step(spec, ctrl);
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(end / h - 1e-9)));
  g.time.resize(cells + 1);
  g.level.resize(cells + 1);
  g.expneg.resize(cells + 1);
  const double sigma = std::sqrt(spec.sigma2);
  const double scale = sigma * std::sqrt(h);
  const std::size_t even = (cells + 1) / 2 * 2;
  thread_local std::vector<std::uint32_t> words;
  thread_local std::vector<double> normals;
  thread_local std::vector<double> angles;
  words.resize(even);
  normals.resize(even);
  angles.resize(even / 2);
  rng.take(words.data(), even);
  detail::box_muller(words.data(), even, angles.data(), normals.data());
  g.time[0] = 0.0;
  g.level[0] = 0.0;
  std::copy_n(normals.data(), cells, g.level.data() + 1);
  for (std::size_t j = 1; j < cells; ++j) g.time[j] = double(j) * h;
  g.time[cells] = end;
  const double last = end - g.time[cells - 1];
  const double last_sd = last == h ? scale : sigma * std::sqrt(std::max(last, 0.0));
  for (std::size_t j = 1; j < cells; ++j) g.level[j] = g.level[j - 1] + scale * g.level[j];
  g.level[cells] = g.level[cells - 1] + last_sd * g.level[cells];
  detail::exp_neg(g.level.data(), g.expneg.data(), g.level.size());
}

void fill_path(const LevySpec& spec, double t, const McControl& ctrl, std::uint64_t index, Path& p) {
  p.breakpoints.clear();
  p.levels.clear();
  p.slopes.clear();
  p.killed_at.reset();
  p.horizon = t;
  p.grid = false;
  Engine rng(ctrl.seed, index);
  double end = t;
  if (spec.killing_q > 0.0) {
    const double e = exponential(rng, spec.killing_q);
    if (e < t) {
      p.killed_at = e;
      end = e;
    }
  }
  switch (spec.kind) {
    case LevySpec::Kind::drift_only:
      push(p, 0.0, 0.0, spec.drift);
      return;
    case LevySpec::Kind::compound_poisson:
    case LevySpec::Kind::symmetric_cp:
    case LevySpec::Kind::truncated_custom: {
      const double slope = spec.drift;
      push(p, 0.0, 0.0, slope);
      if (!(spec.lambda > 0.0)) return;
      double s = 0.0;
      double level = 0.0;
      for (;;) {
        const double next = s + exponential(rng, spec.lambda);
        if (next >= end) break;
        const double jump = spec.kind == LevySpec::Kind::truncated_custom ? sample_table(*spec.table, rng)
                                                                          : sample_jump(spec.jump, rng);
        level += slope * (next - s) + jump;
        s = next;
        push(p, s, level, slope);
      }
      return;
    }
    case LevySpec::Kind::gamma: {
      const double h = default_step(spec, ctrl);
      const long cells = std::max(1L, static_cast<long>(std::ceil(end / h - 1e-9)));
      double level = 0.0;
      push(p, 0.0, 0.0, 0.0);
      p.grid = true;
      for (long j = 0; j < cells; ++j) {
        const double s0 = double(j) * h;
        const double width = std::min(h, end - s0);
        if (width <= 0.0) break;
        level += boost::random::gamma_distribution<double>(width, 1.0)(rng);
        double at = s0;
        if (ctrl.jump == GridJump::midpoint) at = s0 + 0.5 * width;
        if (ctrl.jump == GridJump::end) at = s0 + width;
        if (at == 0.0) {
          p.levels[0] = level;
        } else if (at < t) {
          push(p, at, level, 0.0);
        }
      }
      return;
    }
    case LevySpec::Kind::brownian: {
      GridNodes g;
      brownian_nodes(spec, t, ctrl, index, g);
      p.grid = true;
      for (std::size_t j = 0; j + 1 < g.time.size(); ++j) {
        const double width = g.time[j + 1] - g.time[j];
        push(p, g.time[j], g.level[j], width > 0.0 ? (g.level[j + 1] - g.level[j]) / width : 0.0);
      }
      return;
    }
  }
}

// I(ts[k]) for increasing ts in one pass.
void functionals(const Path& p, const std::vector<double>& ts, std::vector<double>& out) {
  const double stop = p.killed_at ? std::min(*p.killed_at, p.horizon) : p.horizon;
  const std::size_t n = p.breakpoints.size();
  std::size_t k = 0;
  double acc = 0.0;
  auto piece = [&](std::size_t i, double a, double b) {
    const double len = b - a;
    if (len <= 0.0) return 0.0;
    const double m = p.slopes[i];
    const double v = p.levels[i] + m * (a - p.breakpoints[i]);
    if (m == 0.0) return len * std::exp(-v);
    return std::exp(-v) * (-std::expm1(-m * len)) / m;
  };
  for (std::size_t i = 0; i < n && k < ts.size(); ++i) {
    const double s0 = p.breakpoints[i];
    const double s1 = std::min(i + 1 < n ? p.breakpoints[i + 1] : p.horizon, stop);
    while (k < ts.size() && ts[k] <= s1) {
      out[k] = acc + piece(i, s0, std::max(s0, ts[k]));
      ++k;
    }
    acc += piece(i, s0, s1);
    if (s1 >= stop) break;
  }
  for (; k < ts.size(); ++k) out[k] = acc;
}

// I at each t from the Brownian nodes (linear between nodes), and optionally
// the same functional on the 2h sub-grid.
void continuous_functionals(const GridNodes& g, const std::vector<double>& ts, std::vector<double>& out,
                            std::vector<double>* coarse_out) {
  thread_local std::vector<double> pieces;
  const std::size_t last = g.time.size() - 1;
  auto run = [&](std::size_t stride, std::vector<double>& result) {
    const std::size_t whole = last / stride;
    pieces.resize(whole + 1);
    detail::chord_integrals(g.time.data(), g.level.data(), g.expneg.data(), stride, whole, pieces.data());
    if (whole * stride < last) {
      const std::size_t a = whole * stride;
      const double tt[] = {g.time[a], g.time[last]};
      const double vv[] = {g.level[a], g.level[last]};
      const double ee[] = {g.expneg[a], g.expneg[last]};
      detail::chord_integrals(tt, vv, ee, 1, 1, &pieces[whole]);
    }
    const std::size_t count = whole + (whole * stride < last ? 1 : 0);
    std::size_t k = 0;
    double acc = 0.0;
    std::size_t p = 0;
    for (; p < count && k < ts.size(); ++p) {
      const std::size_t i = p * stride;
      const std::size_t j = std::min(i + stride, last);
      const double s0 = g.time[i];
      const double s1 = g.time[j];
      while (k < ts.size() && ts[k] < s1) {
        const double a = std::max(s0, ts[k]);
        const double len = s1 - s0;
        const double va = g.level[i] + (len > 0.0 ? (a - s0) / len : 0.0) * (g.level[j] - g.level[i]);
        const double tt[] = {s0, a};
        const double vv[] = {g.level[i], va};
        const double ee[] = {g.expneg[i], std::exp(-va)};
        double part = 0.0;
        detail::chord_integrals(tt, vv, ee, 1, 1, &part);
        result[k] = acc + part;
        ++k;
      }
      if (k == ts.size()) break;
      // Pieces wholly before the next t.
      const double next = ts[k];
      std::size_t q = p + 1;
      while (q < count && g.time[std::min((q + 1) * stride, last)] <= next) ++q;
      acc += detail::sum(pieces.data() + p, q - p);
      p = q - 1;
    }
    if (k < ts.size()) acc += detail::sum(pieces.data() + p, count - p);
    for (; k < ts.size(); ++k) result[k] = acc;
  };
  run(1, out);
  if (coarse_out) run(2, *coarse_out);
}

struct Accumulator {
  long n = 0;
  cdouble mean = 0.0;
  double m2 = 0.0;
  cdouble coarse_mean = 0.0;

  void add(cdouble v) {
    ++n;
    const cdouble delta = v - mean;
    mean += delta / double(n);
    m2 += std::real(std::conj(delta) * (v - mean));
  }
  void merge(const Accumulator& o) {
    if (o.n == 0) return;
    const long total = n + o.n;
    const cdouble delta = o.mean - mean;
    mean += delta * (double(o.n) / double(total));
    m2 += o.m2 + std::norm(delta) * double(n) * double(o.n) / double(total);
    coarse_mean += (o.coarse_mean - coarse_mean) * (double(o.n) / double(total));
    n = total;
  }
};

cdouble power(double x, cdouble z) {
  if (z.imag() == 0.0) return std::pow(x, z.real());
  return std::exp(z * std::log(x));
}

}  // namespace

LevySpec LevySpec::drift_only(double d, double q) {
  if (!(d >= 0.0) || !(q >= 0.0)) throw DomainError("drift and killing must be non-negative");
  LevySpec s;
  s.kind = Kind::drift_only;
  s.drift = d;
  s.killing_q = q;
  return s;
}

LevySpec LevySpec::gamma(double q) {
  if (!(q >= 0.0)) throw DomainError("killing must be non-negative");
  LevySpec s;
  s.kind = Kind::gamma;
  s.killing_q = q;
  return s;
}

LevySpec LevySpec::compound_poisson(double lambda, JumpLaw jump, double drift, double q) {
  if (!(lambda > 0.0)) throw DomainError("jump intensity must be positive");
  jump.validate();
  if (!jump.positive()) throw DomainError("subordinator jumps must be positive: " + jump.describe());
  if (!(drift >= 0.0) || !(q >= 0.0)) throw DomainError("drift and killing must be non-negative");
  LevySpec s;
  s.kind = Kind::compound_poisson;
  s.lambda = lambda;
  s.jump = jump;
  s.drift = drift;
  s.killing_q = q;
  return s;
}

LevySpec LevySpec::truncated_custom(const BernsteinSpec& phi, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("small-jump cutoff must be positive");
  if (phi.offset() != 0.0) throw DomainError("truncated_custom needs an unshifted Bernstein function");
  const auto density = levy_density(phi);
  if (!density) throw DomainError("no Levy density available for " + phi.describe());
  LevySpec s;
  s.kind = Kind::truncated_custom;
  s.bernstein = phi;
  s.epsilon = epsilon;
  s.killing_q = phi.killing();
  const auto& mu = *density;
  // Power densities overflow near 0.
  const auto first_moment = [&](double y) {
    const double m = mu(y);
    return std::isfinite(m) ? y * m : 0.0;
  };
  s.drift = phi.drift() + quad::endpoint_singular(first_moment, 0.0, epsilon, 1e-10);
  std::vector<double> extra{1.0};
  if (const auto* cm = phi.custom_measure()) {
    for (const auto& node : cm->table) extra.push_back(node.first);
  }
  if (phi.family() == Family::linear) {
    s.lambda = 0.0;
    return s;
  }
  s.table = build_table(mu, epsilon, extra);
  s.lambda = s.table->tail.front();
  return s;
}

LevySpec LevySpec::brownian(double sigma2, double q) {
  if (!(sigma2 > 0.0)) throw DomainError("Brownian variance must be positive");
  if (!(q >= 0.0)) throw DomainError("killing must be non-negative");
  LevySpec s;
  s.kind = Kind::brownian;
  s.sigma2 = sigma2;
  s.killing_q = q;
  return s;
}

LevySpec LevySpec::symmetric_cp(double lambda, JumpLaw jump, double q) {
  if (!(lambda > 0.0)) throw DomainError("jump intensity must be positive");
  jump.validate();
  if (!jump.symmetric()) throw DomainError("jump law is not symmetric: " + jump.describe());
  if (!(q >= 0.0)) throw DomainError("killing must be non-negative");
  LevySpec s;
  s.kind = Kind::symmetric_cp;
  s.lambda = lambda;
  s.jump = jump;
  s.killing_q = q;
  return s;
}

bool LevySpec::subordinator() const noexcept { return kind != Kind::brownian && kind != Kind::symmetric_cp; }

bool LevySpec::deterministic() const noexcept {
  return killing_q == 0.0 && (kind == Kind::drift_only || (kind == Kind::truncated_custom && lambda == 0.0));
}

std::string LevySpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::drift_only: os << "drift_only(d=" << drift << ")"; break;
    case Kind::gamma: os << "gamma_subordinator"; break;
    case Kind::compound_poisson:
      os << "compound_poisson(lambda=" << lambda << ", jump=" << jump.describe() << ", d=" << drift << ")";
      break;
    case Kind::truncated_custom:
      os << "truncated(" << bernstein->describe() << ", epsilon=" << epsilon << ")";
      break;
    case Kind::brownian: os << "brownian(sigma2=" << sigma2 << ")"; break;
    case Kind::symmetric_cp: os << "symmetric_cp(lambda=" << lambda << ", jump=" << jump.describe() << ")"; break;
  }
  if (killing_q > 0.0) os << " killed at rate " << killing_q;
  return os.str();
}

Path sample_path(const LevySpec& spec, double t, const McControl& ctrl, std::uint64_t path_index) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("sample_path needs t > 0");
  Path p;
  fill_path(spec, t, ctrl, path_index, p);
  return p;
}

double exp_functional(const Path& path, double t) {
  if (!(t >= 0.0) || t > path.horizon * (1.0 + 1e-12)) throw DomainError("t outside the simulated horizon");
  std::vector<double> out(1);
  functionals(path, {std::min(t, path.horizon)}, out);
  return out[0];
}

std::vector<MCEstimate> mc_moments(const LevySpec& spec, const std::vector<cdouble>& zs,
                                   const std::vector<double>& ts, long n_paths, const McControl& ctrl) {
  if (n_paths < 100) throw DomainError("mc_moment needs at least 100 paths");
  if (zs.empty() || ts.empty()) throw DomainError("mc_moment needs at least one z and one t");
  for (double t : ts) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("mc_moment needs t > 0");
  }
  if (ctrl.chunk == 0) throw DomainError("chunk size must be positive");
  std::vector<double> sorted = ts;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const double horizon = sorted.back();
  const bool richardson = ctrl.richardson && spec.kind == LevySpec::Kind::brownian;
  const std::size_t nz = zs.size();
  const std::size_t nt = sorted.size();

  const auto chunk = static_cast<long>(ctrl.chunk);
  const long n_chunks = spec.deterministic() ? 1 : (n_paths + chunk - 1) / chunk;
  std::vector<std::vector<Accumulator>> parts(static_cast<std::size_t>(n_chunks));
  parallel_for(0, static_cast<std::size_t>(n_chunks), ctrl.threads, [&](std::size_t c) {
    std::vector<Accumulator> acc(nz * nt);
    Path path;
    GridNodes nodes;
    std::vector<double> values(nt);
    std::vector<double> coarse_values(nt);
    const long first = static_cast<long>(c) * chunk;
    const long last = spec.deterministic() ? 1 : std::min(n_paths, first + chunk);
    for (long i = first; i < last; ++i) {
      if (spec.kind == LevySpec::Kind::brownian) {
        brownian_nodes(spec, horizon, ctrl, static_cast<std::uint64_t>(i), nodes);
        continuous_functionals(nodes, sorted, values, richardson ? &coarse_values : nullptr);
      } else {
        fill_path(spec, horizon, ctrl, static_cast<std::uint64_t>(i), path);
        functionals(path, sorted, values);
      }
      for (std::size_t a = 0; a < nz; ++a) {
        for (std::size_t b = 0; b < nt; ++b) {
          Accumulator& slot = acc[a * nt + b];
          slot.add(power(values[b], zs[a]));
          if (richardson) slot.coarse_mean += (power(coarse_values[b], zs[a]) - slot.coarse_mean) / double(slot.n);
        }
      }
    }
    parts[c] = std::move(acc);
  });
  std::vector<Accumulator> total(nz * nt);
  for (const auto& part : parts) {
    for (std::size_t j = 0; j < total.size(); ++j) total[j].merge(part[j]);
  }

  const std::string scheme = scheme_of(spec, ctrl);
  std::vector<MCEstimate> out;
  for (std::size_t a = 0; a < nz; ++a) {
    for (double t : ts) {
      const auto b = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
      const Accumulator& acc = total[a * nt + b];
      MCEstimate e;
      e.z = zs[a];
      e.t = t;
      e.mean = acc.mean;
      e.n_paths = n_paths;
      e.std_error = spec.deterministic() ? 0.0 : std::sqrt(acc.m2 / double(acc.n - 1) / double(acc.n));
      e.seed = ctrl.seed;
      e.scheme = scheme;
      if (richardson) {
        e.richardson_delta = acc.mean - acc.coarse_mean;
        if (std::abs(*e.richardson_delta) > 3.0 * e.std_error) {
          e.warnings.push_back("discretization_bias: |mean(h) - mean(2h)| exceeds 3 standard errors");
        }
      }
      if (zs[a].real() < 0.0 && t < 0.1) {
        e.warnings.push_back("small_t_negative_moment: relative variance may be large");
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

MCEstimate mc_moment(const LevySpec& spec, cdouble z, double t, long n_paths, const McControl& ctrl) {
  return mc_moments(spec, {z}, {t}, n_paths, ctrl).front();
}

std::string mc_csv(const std::vector<MCEstimate>& rows) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "z_re,z_im,t,mean_re,mean_im,stderr,n_paths,seed,scheme\n";
  for (const auto& r : rows) {
    os << r.z.real() << "," << r.z.imag() << "," << r.t << "," << r.mean.real() << "," << r.mean.imag() << ","
       << r.std_error << "," << r.n_paths << "," << r.seed << "," << r.scheme << "\n";
  }
  return os.str();
}

}  // namespace expfun

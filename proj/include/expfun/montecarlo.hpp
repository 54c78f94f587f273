#pragma once

// Monte Carlo estimates of E[I(t)^z], I(t) = int_0^{min(t, e_q)} e^{-xi_s} ds,
// from simulated Levy paths. Paths are piecewise linear, so I is integrated
// exactly segment by segment.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expfun/bernstein.hpp"
#include "expfun/levy.hpp"

namespace expfun {

struct JumpTable;

struct LevySpec {
  enum class Kind { drift_only, gamma, compound_poisson, truncated_custom, brownian, symmetric_cp };
  Kind kind = Kind::drift_only;
  /// Drift of drift_only and compound_poisson.
  double drift = 0.0;
  double lambda = 0.0;
  JumpLaw jump{};
  std::optional<BernsteinSpec> bernstein;
  double epsilon = 0.0;
  double sigma2 = 0.0;
  double killing_q = 0.0;
  /// Tail of the truncated Levy measure (truncated_custom only).
  std::shared_ptr<const JumpTable> table;

  static LevySpec drift_only(double d, double q = 0.0);
  /// Gamma subordinator, phi(u) = log(1 + u).
  static LevySpec gamma(double q = 0.0);
  static LevySpec compound_poisson(double lambda, JumpLaw jump, double drift = 0.0, double q = 0.0);
  /// Jumps of size >= epsilon of the subordinator with exponent `phi`; smaller
  /// jumps are replaced by their mean drift int_0^epsilon y mu(dy).
  static LevySpec truncated_custom(const BernsteinSpec& phi, double epsilon);
  static LevySpec brownian(double sigma2, double q = 0.0);
  static LevySpec symmetric_cp(double lambda, JumpLaw jump, double q = 0.0);

  bool subordinator() const noexcept;
  /// No randomness at all (drift only, no killing).
  bool deterministic() const noexcept;
  std::string describe() const;
};

/// Where a grid increment of the Gamma scheme is placed inside its cell.
enum class GridJump { start, midpoint, end };

struct McControl {
  /// Grid step of the Gamma and Brownian schemes; 0 selects 2^-8 (Gamma) or 2^-12 (Brownian).
  double step = 0.0;
  std::uint64_t seed = 1;
  int threads = 0;
  GridJump jump = GridJump::midpoint;
  /// Brownian: also evaluate every path on the 2h sub-grid and report the difference.
  bool richardson = true;
  std::size_t chunk = 1024;
};

/// Segment i covers [breakpoints[i], breakpoints[i+1]) (the last one ends at
/// horizon) and starts at levels[i] with slope slopes[i].
struct Path {
  std::vector<double> breakpoints;
  std::vector<double> levels;
  std::vector<double> slopes;
  std::optional<double> killed_at;
  double horizon = 0.0;
  /// Built on a fixed time grid (Gamma, Brownian) rather than from jump epochs.
  bool grid = false;
};

/// Simulates xi on [0, t]. `path_index` selects the random stream.
Path sample_path(const LevySpec& spec, double t, const McControl& ctrl, std::uint64_t path_index = 0);

/// int_0^{min(t, killed_at)} e^{-xi_s} ds. Requires t <= path.horizon.
double exp_functional(const Path& path, double t);

struct MCEstimate {
  cdouble z = 0.0;
  double t = 0.0;
  cdouble mean = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  std::uint64_t seed = 0;
  std::string scheme;
  /// Brownian with richardson: mean(h) - mean(2h) from the same paths.
  std::optional<cdouble> richardson_delta;
  std::vector<std::string> warnings;
};

/// One estimate per (z, t) pair, z-major. All pairs share the same paths.
/// Results do not depend on ctrl.threads.
std::vector<MCEstimate> mc_moments(const LevySpec& spec, const std::vector<cdouble>& zs,
                                   const std::vector<double>& ts, long n_paths, const McControl& ctrl = {});

MCEstimate mc_moment(const LevySpec& spec, cdouble z, double t, long n_paths, const McControl& ctrl = {});

/// CSV with columns z_re,z_im,t,mean_re,mean_im,stderr,n_paths,seed,scheme.
std::string mc_csv(const std::vector<MCEstimate>& rows);

}  // namespace expfun

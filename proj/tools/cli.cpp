#include "expfun/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "expfun/bgamma.hpp"
#include "expfun/convolution.hpp"
#include "expfun/errors.hpp"
#include "expfun/json_io.hpp"
#include "expfun/levy.hpp"
#include "expfun/montecarlo.hpp"
#include "expfun/series.hpp"
#include "expfun/symmetric.hpp"

namespace expfun {
namespace {

using Row = nlohmann::ordered_json;

struct Output {
  std::string command;
  Row meta = Row::object();
  std::vector<Row> rows;
};

struct Globals {
  std::string format = "csv";
  std::string output;
  std::string config;
  int threads = 0;
};

std::string csv_cell(const Row& v) {
  std::ostringstream os;
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number()) {
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  std::string s;
  if (v.is_array()) {
    for (const auto& item : v) {
      if (!s.empty()) s += '|';
      s += item.is_string() ? item.get<std::string>() : item.dump();
    }
  } else {
    s = v.is_string() ? v.get<std::string>() : v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void write_output(const Output& o, const Globals& g, std::ostream& out) {
  std::ostringstream text;
  if (g.format == "json") {
    Row doc = Row::object();
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = o.command;
    for (const auto& [k, v] : o.meta.items()) doc[k] = v;
    doc["rows"] = o.rows;
    text << doc.dump(2) << '\n';
  } else if (!o.rows.empty()) {
    std::vector<std::string> columns;
    for (const auto& [k, v] : o.rows.front().items()) columns.push_back(k);
    for (std::size_t i = 0; i < columns.size(); ++i) text << (i ? "," : "") << columns[i];
    text << '\n';
    for (const auto& row : o.rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        text << (i ? "," : "") << (row.contains(columns[i]) ? csv_cell(row[columns[i]]) : "");
      }
      text << '\n';
    }
  }
  if (g.output.empty()) {
    out << text.str();
    return;
  }
  std::ofstream file(g.output, std::ios::binary);
  if (!file || !(file << text.str()) || !file.flush()) throw IoError("cannot write " + g.output);
}

int exit_code_of(const Error& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kExitConvergence;
  return kExitDomain;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  Row j = Row::object();
  j["schema_version"] = kSchemaVersion;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  err << j.dump() << '\n';
}

// Appends "--key value" for config entries not already given as flags.
std::vector<std::string> merge_config(const std::vector<std::string>& args, std::ostream& err) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad config JSON in " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw IoError("config " + path + " must hold a JSON object");

  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  auto scalar = [](const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
      std::ostringstream os;
      os << std::setprecision(17) << v.get<double>();
      return os.str();
    }
    return v.dump();
  };
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (given(flag)) {
      err << "warning: flag " << flag << " overrides the config value\n";
      continue;
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& item : value) {
        merged.push_back(flag);
        merged.push_back(scalar(item));
      }
    } else if (key == "phi" && value.is_object()) {
      merged.push_back(flag);
      merged.push_back(value.dump());
    } else {
      merged.push_back(flag);
      merged.push_back(scalar(value));
    }
  }
  return merged;
}

Row complex_fields(Row row, const std::string& prefix, cdouble v) {
  row[prefix + "_re"] = v.real();
  row[prefix + "_im"] = v.imag();
  return row;
}

std::vector<cdouble> parse_complex_list(const std::vector<std::string>& items) {
  std::vector<cdouble> zs;
  for (const auto& s : items) zs.push_back(parse_complex(s));
  return zs;
}

// Psi from --psi-table (CSV with columns u,psi, linear interpolation) or from
// a built-in symmetric process.
struct PsiSource {
  std::string process = "brownian";
  double sigma2 = 1.0;
  double lambda = 1.0;
  std::string jump = "normal:1";
  std::string table;

  std::function<double(double)> build() const {
    if (!table.empty()) return read_table();
    SymmetricLevySpec spec = process == "brownian" ? SymmetricLevySpec::brownian(sigma2)
                                                   : SymmetricLevySpec::compound_poisson(lambda, parse_jump_law(jump));
    return [spec](double u) { return spec.psi(u); };
  }

  std::function<double(double)> read_table() const {
    std::ifstream in(table);
    if (!in) throw IoError("cannot read " + table);
    std::string line;
    std::vector<std::pair<double, double>> nodes;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream is(line);
      double u = 0.0;
      double p = 0.0;
      if (!(is >> u >> p)) throw IoError("bad row '" + line + "' in " + table);
      nodes.emplace_back(u, p);
    }
    if (nodes.size() < 2) throw IoError(table + " needs at least two (u, psi) rows");
    std::sort(nodes.begin(), nodes.end());
    return [nodes](double u) {
      if (u < nodes.front().first || u > nodes.back().first) {
        throw DomainError("u = " + std::to_string(u) + " outside the psi table");
      }
      auto hi = std::upper_bound(nodes.begin(), nodes.end(), std::make_pair(u, std::numeric_limits<double>::infinity()));
      if (hi == nodes.end()) return nodes.back().second;
      auto lo = hi - 1;
      const double w = (u - lo->first) / (hi->first - lo->first);
      return (1.0 - w) * lo->second + w * hi->second;
    };
  }
};

void add_psi_options(CLI::App* cmd, PsiSource& src) {
  cmd->add_option("--process", src.process, "Built-in symmetric process")
      ->check(CLI::IsMember({"brownian", "cp"}));
  cmd->add_option("--sigma2", src.sigma2, "Brownian variance");
  cmd->add_option("--lambda", src.lambda, "Jump intensity (cp)");
  cmd->add_option("--jump", src.jump, "Symmetric jump law, e.g. normal:1, uniform:0.5, laplace:1");
  cmd->add_option("--psi-table", src.table, "CSV of (u, Psi(u)) pairs");
}

LevySpec make_levy(const std::string& process, double lambda, const std::string& jump, double drift, double sigma2,
                   double epsilon, const std::string& phi, double q) {
  if (process == "drift") return LevySpec::drift_only(drift, q);
  if (process == "gamma") return LevySpec::gamma(q);
  if (process == "cp") return LevySpec::compound_poisson(lambda, parse_jump_law(jump), drift, q);
  if (process == "truncated") {
    if (phi.empty()) throw DomainError("--process truncated needs --phi");
    if (q > 0.0) throw DomainError("give the killing rate of a truncated process inside --phi (\",q=<rate>\")");
    return LevySpec::truncated_custom(parse_phi(phi), epsilon);
  }
  if (process == "brownian") return LevySpec::brownian(sigma2, q);
  return LevySpec::symmetric_cp(lambda, parse_jump_law(jump), q);
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moments of exponential functionals of Levy processes", "expfun"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", g.output, "Write results to this file instead of standard output");
  app.add_option("--config", g.config, "JSON file of option values; flags win on conflict");
  app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);

  Output result;

  // moment
  auto* moment_cmd = app.add_subcommand("moment", "E[I(t)^z] of a subordinator by the series expansion");
  std::string phi_text;
  std::vector<std::string> z_text;
  std::vector<double> t_values;
  double tol = 1e-10;
  int k_max = 20000;
  bool allow_unverified = false;
  bool no_accelerate = false;
  moment_cmd->add_option("--phi", phi_text, "Bernstein function: log1p, power:0.5, linear:1, ...,q=<rate>, or JSON")
      ->required();
  moment_cmd->add_option("--z", z_text, "Moment order re[,im]; repeatable")->required();
  moment_cmd->add_option("--t", t_values, "Horizons (comma separated or repeated)")->required()->delimiter(',');
  moment_cmd->add_option("--tol", tol, "Relative tolerance");
  moment_cmd->add_option("--k-max", k_max, "Largest series index");
  moment_cmd->add_flag("--allow-unverified", allow_unverified, "Proceed when the hypothesis check fails");
  moment_cmd->add_flag("--no-accelerate", no_accelerate, "Plain partial sums without the tail model");
  moment_cmd->callback([&] {
    const BernsteinSpec spec = parse_phi(phi_text);
    MomentOptions opts;
    opts.k_max = k_max;
    opts.allow_unverified = allow_unverified;
    opts.accelerate = !no_accelerate;
    opts.threads = g.threads;
    result.command = "moment";
    result.meta["phi"] = to_json(spec);
    for (cdouble z : parse_complex_list(z_text)) {
      for (double t : t_values) {
        const SeriesResult r = moment(spec, z, t, tol, opts);
        Row row = complex_fields(Row::object(), "z", z);
        row["t"] = t;
        const nlohmann::json fields = to_json(r);
        for (const char* k : {"value_re", "value_im", "terms_used", "tail_certificate", "converged", "warnings"}) {
          row[k] = fields.at(k);
        }
        result.rows.push_back(std::move(row));
      }
    }
  });

  // bgamma
  auto* bgamma_cmd = app.add_subcommand("bgamma", "Bernstein-Gamma function W, gamma_phi and Gamma(z+1)/W(z+1)");
  std::string quantity = "W";
  bgamma_cmd->add_option("--phi", phi_text, "Bernstein function")->required();
  bgamma_cmd->add_option("--z", z_text, "Arguments re[,im]; repeatable");
  bgamma_cmd->add_option("--quantity", quantity, "W, log_W, mellin or gamma_phi")
      ->check(CLI::IsMember({"W", "log_W", "mellin", "gamma_phi"}));
  bgamma_cmd->callback([&] {
    const BernsteinSpec spec = parse_phi(phi_text);
    result.command = "bgamma";
    result.meta["phi"] = to_json(spec);
    if (quantity == "gamma_phi") {
      Row row = Row::object();
      row["quantity"] = quantity;
      row["value"] = gamma_phi(spec);
      result.rows.push_back(std::move(row));
      return;
    }
    if (z_text.empty()) throw DomainError("--z is required for --quantity " + quantity);
    const WeierstrassCache cache(spec);
    for (cdouble z : parse_complex_list(z_text)) {
      const cdouble v = quantity == "W" ? cache.W(z) : quantity == "log_W" ? cache.log_W(z) : mellin_infinity(cache, z);
      Row row = complex_fields(Row::object(), "z", z);
      row["quantity"] = quantity;
      result.rows.push_back(complex_fields(std::move(row), "value", v));
    }
  });

  // zeta
  auto* zeta_cmd = app.add_subcommand("zeta", "Riemann zeta as E[I(s-1)^-1] of the Gamma subordinator");
  std::vector<double> s_values;
  zeta_cmd->add_option("--s", s_values, "Arguments s > 1")->required()->delimiter(',');
  zeta_cmd->callback([&] {
    result.command = "zeta";
    for (double s : s_values) {
      if (!(s > 1.0)) throw RangeError("zeta(s) needs s > 1 (simple pole at s = 1)");
      const SeriesResult r = neg_int_moment(BernsteinSpec::log1p(), -1, s - 1.0, 1e-13);
      Row row = Row::object();
      row["s"] = s;
      row["value"] = r.value.real();
      row["terms_used"] = r.terms_used;
      row["tail_certificate"] = r.tail_certificate;
      result.rows.push_back(std::move(row));
    }
  });

  // symmetric
  auto* sym_cmd = app.add_subcommand("symmetric", "Moment identities for symmetric Levy processes");
  sym_cmd->require_subcommand(1);

  auto* half_neg_cmd = sym_cmd->add_subcommand("half-neg", "E[I(t)^-1/2] = t^-1/2");
  half_neg_cmd->add_option("--t", t_values, "Horizons")->required()->delimiter(',');
  half_neg_cmd->callback([&] {
    result.command = "symmetric half-neg";
    for (double t : t_values) {
      Row row = Row::object();
      row["t"] = t;
      row["value"] = half_neg_moment(t);
      result.rows.push_back(std::move(row));
    }
  });

  auto* cp_cmd = sym_cmd->add_subcommand("cp-half-neg", "E[I(t)^-1/2] for symmetric compound Poisson processes");
  double cp_lambda = 1.0;
  std::string variant = "both";
  cp_cmd->add_option("--lambda", cp_lambda, "Jump intensity")->required();
  cp_cmd->add_option("--t", t_values, "Horizons")->required()->delimiter(',');
  cp_cmd->add_option("--variant", variant, "paper, laplace_derived or both")
      ->check(CLI::IsMember({"paper", "laplace_derived", "both"}));
  cp_cmd->callback([&] {
    result.command = "symmetric cp-half-neg";
    std::vector<std::pair<std::string, CpVariant>> variants;
    if (variant != "laplace_derived") variants.emplace_back("paper", CpVariant::paper);
    if (variant != "paper") variants.emplace_back("laplace_derived", CpVariant::laplace_derived);
    for (double t : t_values) {
      for (const auto& [name, v] : variants) {
        Row row = Row::object();
        row["lambda"] = cp_lambda;
        row["t"] = t;
        row["variant"] = name;
        row["value"] = cp_half_neg_moment(cp_lambda, t, v);
        result.rows.push_back(std::move(row));
      }
    }
  });

  auto* half_pos_cmd = sym_cmd->add_subcommand("half-pos", "E[I(t)^1/2]");
  PsiSource psi_src;
  std::optional<double> psi_half;
  half_pos_cmd->add_option("--psi-half", psi_half, "Psi(1/2); overrides the process options");
  half_pos_cmd->add_option("--t", t_values, "Horizons")->required()->delimiter(',');
  add_psi_options(half_pos_cmd, psi_src);
  half_pos_cmd->callback([&] {
    result.command = "symmetric half-pos";
    const double p = psi_half ? *psi_half : psi_src.build()(0.5);
    for (double t : t_values) {
      Row row = Row::object();
      row["t"] = t;
      row["psi_half"] = p;
      row["value"] = half_pos_moment(p, t);
      result.rows.push_back(std::move(row));
    }
  });

  auto* nmh_cmd = sym_cmd->add_subcommand("n-minus-half", "E[I(t)^{n-1/2}] by iterated convolution");
  int n = 1;
  std::vector<double> psi_list;
  ConvolutionGrid grid;
  nmh_cmd->add_option("--n", n, "Order n >= 1")->check(CLI::PositiveNumber);
  nmh_cmd->add_option("--psi", psi_list, "Psi(k-1/2) for k = 1..n; overrides the process options")->delimiter(',');
  nmh_cmd->add_option("--t", t_values, "Horizons")->required()->delimiter(',');
  nmh_cmd->add_option("--cells", grid.cells, "Grid cells");
  nmh_cmd->add_option("--span", grid.span, "Grid span (default: each t)");
  add_psi_options(nmh_cmd, psi_src);
  nmh_cmd->callback([&] {
    result.command = "symmetric n-minus-half";
    std::vector<double> psi = psi_list;
    if (psi.empty()) {
      const auto fn = psi_src.build();
      for (int k = 1; k <= n; ++k) psi.push_back(fn(k - 0.5));
    } else if (static_cast<int>(psi.size()) != n && nmh_cmd->count("--n") > 0) {
      throw DomainError("--psi lists " + std::to_string(psi.size()) + " values but --n is " + std::to_string(n));
    }
    for (double t : t_values) {
      Row row = Row::object();
      row["n"] = static_cast<long>(psi.size());
      row["t"] = t;
      row["value"] = n_minus_half_moment(psi, t, grid);
      result.rows.push_back(std::move(row));
    }
  });

  // verify-conv
  auto* conv_cmd = app.add_subcommand("verify-conv", "Check the convolution identity on two tabulated curves");
  std::string z_single;
  std::string curve_f;
  std::string curve_g;
  std::optional<double> conv_lambda;
  std::optional<double> exponent_f;
  std::optional<double> exponent_g;
  int cells = 4096;
  conv_cmd->add_option("--z", z_single, "Order with 0 < Re z < 1")->required();
  conv_cmd->add_option("--curve-f", curve_f, "CSV of E[I^{-z}(s)]")->required();
  conv_cmd->add_option("--curve-g", curve_g, "CSV of E[Ihat^{z-1}(s)]")->required();
  conv_cmd->add_option("--t", t_values, "Horizons")->required()->delimiter(',');
  conv_cmd->add_option("--cp-lambda", conv_lambda, "Compound Poisson intensity (selects that right-hand side)");
  conv_cmd->add_option("--exponent-f", exponent_f, "Singularity exponent of f at 0 (overrides the file)");
  conv_cmd->add_option("--exponent-g", exponent_g, "Singularity exponent of g at 0 (overrides the file)");
  conv_cmd->add_option("--cells", cells, "Grid cells");
  conv_cmd->callback([&] {
    result.command = "verify-conv";
    const cdouble z = parse_complex(z_single);
    const TabulatedFunction f = read_curve_csv(curve_f, exponent_f);
    const TabulatedFunction gc = read_curve_csv(curve_g, exponent_g);
    for (double t : t_values) {
      const IdentityReport r = verify_identity(f, gc, z, t, conv_lambda, cells);
      Row row = complex_fields(Row::object(), "z", z);
      row["t"] = t;
      row = complex_fields(std::move(row), "lhs", r.lhs);
      row = complex_fields(std::move(row), "rhs", r.rhs);
      row["abs_residual"] = r.abs_residual;
      row["rel_residual"] = r.rel_residual;
      result.rows.push_back(std::move(row));
    }
  });

  // mc
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of E[I(t)^z]");
  std::string process = "gamma";
  double lambda = 1.0;
  std::string jump;
  double drift = 0.0;
  double sigma2 = 1.0;
  double epsilon = 1e-3;
  double q = 0.0;
  long paths = 10000;
  std::uint64_t seed = 1;
  std::string scheme = "midpoint";
  double step = 0.0;
  bool no_richardson = false;
  mc_cmd->add_option("--process", process, "drift, gamma, cp, truncated, brownian or symmetric-cp")
      ->check(CLI::IsMember({"drift", "gamma", "cp", "truncated", "brownian", "symmetric-cp"}));
  mc_cmd->add_option("--lambda", lambda, "Jump intensity");
  mc_cmd->add_option("--jump", jump, "Jump law (cp: exponential:1, gamma:2,1; symmetric-cp: normal:1, ...)");
  mc_cmd->add_option("--drift", drift, "Drift (drift, cp)");
  mc_cmd->add_option("--sigma2", sigma2, "Brownian variance");
  mc_cmd->add_option("--epsilon", epsilon, "Small-jump cutoff (truncated)");
  mc_cmd->add_option("--phi", phi_text, "Bernstein function of the truncated process");
  mc_cmd->add_option("--q", q, "Killing rate");
  mc_cmd->add_option("--z", z_text, "Moment orders re[,im]; repeatable")->required();
  mc_cmd->add_option("--t", t_values, "Horizons")->required()->delimiter(',');
  mc_cmd->add_option("--paths", paths, "Number of paths (>= 100)");
  mc_cmd->add_option("--seed", seed, "64-bit seed");
  mc_cmd->add_option("--scheme", scheme, "Gamma grid: place each increment at the cell start, midpoint or end")
      ->check(CLI::IsMember({"start", "midpoint", "end"}));
  mc_cmd->add_option("--step", step, "Grid step (Gamma default 2^-8, Brownian 2^-12)");
  mc_cmd->add_flag("--no-richardson", no_richardson, "Skip the 2h comparison (Brownian)");
  mc_cmd->callback([&] {
    if (jump.empty()) jump = process == "cp" ? "exponential:1" : "normal:1";
    const LevySpec spec = make_levy(process, lambda, jump, drift, sigma2, epsilon, phi_text, q);
    McControl ctrl;
    ctrl.step = step;
    ctrl.seed = seed;
    ctrl.threads = g.threads;
    ctrl.jump = scheme == "start" ? GridJump::start : scheme == "end" ? GridJump::end : GridJump::midpoint;
    ctrl.richardson = !no_richardson;
    result.command = "mc";
    result.meta["process"] = spec.describe();
    for (const MCEstimate& e : mc_moments(spec, parse_complex_list(z_text), t_values, paths, ctrl)) {
      Row row = complex_fields(Row::object(), "z", e.z);
      row["t"] = e.t;
      row = complex_fields(std::move(row), "mean", e.mean);
      row["stderr"] = e.std_error;
      row["n_paths"] = e.n_paths;
      row["seed"] = e.seed;
      row["scheme"] = e.scheme;
      row["richardson_delta_re"] = e.richardson_delta ? Row(e.richardson_delta->real()) : Row();
      row["richardson_delta_im"] = e.richardson_delta ? Row(e.richardson_delta->imag()) : Row();
      row["warnings"] = e.warnings;
      result.rows.push_back(std::move(row));
    }
  });

  try {
    std::vector<std::string> args = merge_config(raw_args, err);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    write_output(result, g, out);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    report_error(err, "usage", e.what(), kExitDomain);
    return kExitDomain;
  } catch (const Error& e) {
    const int code = exit_code_of(e);
    report_error(err, e.kind(), e.what(), code);
    return code;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "domain", e.what(), kExitDomain);
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    report_error(err, "domain", e.what(), kExitDomain);
    return kExitDomain;
  }
}

}  // namespace expfun

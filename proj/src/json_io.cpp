#include "expfun/json_io.hpp"

#include <sstream>

#include "expfun/errors.hpp"

namespace expfun {
namespace {

double number(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw DomainError(std::string("phi field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double required(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("phi field '") + key + "' is required");
  return number(j, key, 0.0);
}

}  // namespace

nlohmann::json to_json(const BernsteinSpec& spec) {
  nlohmann::json j;
  j["family"] = to_string(spec.family());
  switch (spec.family()) {
    case Family::power:
    case Family::shifted_power:
      j["alpha"] = spec.alpha();
      break;
    case Family::linear:
      j["d"] = spec.drift();
      break;
    case Family::custom: {
      const CustomMeasure* m = spec.custom_measure();
      if (m->table.empty()) throw DomainError("custom spec with a functional density cannot be serialized");
      j["d"] = m->drift;
      j["analytic_bound"] = m->analytic_bound;
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& [y, v] : m->table) nodes.push_back({y, v});
      j["custom_density"] = {{"nodes", nodes}, {"interpolation", "loglog-linear"}};
      break;
    }
    default:
      break;
  }
  j["q"] = spec.killing();
  if (spec.offset() != 0.0) j["shift"] = spec.offset();
  return j;
}

BernsteinSpec bernstein_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw DomainError("phi JSON needs a string field 'family'");
  }
  const std::string family = j.at("family").get<std::string>();
  const double q = number(j, "q", 0.0);
  BernsteinSpec spec = [&] {
    if (family == "log1p") return BernsteinSpec::log1p(q);
    if (family == "power") return BernsteinSpec::power(required(j, "alpha"), q);
    if (family == "shifted_power") return BernsteinSpec::shifted_power(required(j, "alpha"), q);
    if (family == "loglog") return BernsteinSpec::loglog(q);
    if (family == "truncated_gamma") return BernsteinSpec::truncated_gamma(q);
    if (family == "linear") return BernsteinSpec::linear(number(j, "d", 1.0), q);
    if (family == "custom") {
      if (!j.contains("custom_density")) throw DomainError("custom phi needs 'custom_density'");
      const auto& cd = j.at("custom_density");
      const auto& raw = cd.is_object() ? cd.at("nodes") : cd;
      if (cd.is_object() && cd.contains("interpolation") && cd.at("interpolation") != "loglog-linear") {
        throw DomainError("custom_density interpolation must be loglog-linear");
      }
      std::vector<std::pair<double, double>> nodes;
      for (const auto& node : raw) {
        if (!node.is_array() || node.size() != 2) throw DomainError("custom_density nodes are [y, density] pairs");
        nodes.emplace_back(node[0].get<double>(), node[1].get<double>());
      }
      return BernsteinSpec::tabulated(std::move(nodes), number(j, "d", 0.0), q, number(j, "analytic_bound", 0.0));
    }
    throw DomainError("unknown phi family '" + family + "'");
  }();
  if (j.contains("shift")) spec = spec.shifted_by(number(j, "shift", 0.0));
  return spec;
}

BernsteinSpec parse_phi(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw DomainError(std::string("bad phi JSON: ") + e.what());
    }
    return bernstein_from_json(j);
  }
  nlohmann::json j;
  std::string head = text;
  std::string rest;
  if (const auto comma = text.find(','); comma != std::string::npos) {
    head = text.substr(0, comma);
    rest = text.substr(comma + 1);
  }
  const auto colon = head.find(':');
  j["family"] = head.substr(0, colon);
  auto to_number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw DomainError("bad number '" + s + "' in phi '" + text + "'");
    }
  };
  if (colon != std::string::npos) {
    const double p = to_number(head.substr(colon + 1));
    j[j["family"] == "linear" ? "d" : "alpha"] = p;
  }
  if (!rest.empty()) {
    if (rest.rfind("q=", 0) != 0) throw DomainError("expected ',q=<rate>' in phi '" + text + "'");
    j["q"] = to_number(rest.substr(2));
  }
  return bernstein_from_json(j);
}

nlohmann::json to_json(const SeriesResult& r) {
  return {{"schema_version", kSchemaVersion},   {"value_re", r.value.real()},
          {"value_im", r.value.imag()},         {"terms_used", r.terms_used},
          {"tail_certificate", r.tail_certificate}, {"converged", r.converged},
          {"warnings", r.warnings}};
}

SeriesResult series_result_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) throw DomainError("unsupported schema_version");
  SeriesResult r;
  r.value = {j.at("value_re").get<double>(), j.at("value_im").get<double>()};
  r.terms_used = j.at("terms_used").get<long>();
  r.tail_certificate = j.at("tail_certificate").get<double>();
  r.converged = j.at("converged").get<bool>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

cdouble parse_complex(const std::string& text) {
  std::istringstream is(text);
  double re = 0.0;
  double im = 0.0;
  char sep = 0;
  if (!(is >> re)) throw DomainError("bad complex number '" + text + "'");
  if (is >> sep) {
    if (sep != ',' || !(is >> im)) throw DomainError("bad complex number '" + text + "'");
  }
  std::string trailing;
  if (is >> trailing) throw DomainError("bad complex number '" + text + "'");
  return {re, im};
}

}  // namespace expfun

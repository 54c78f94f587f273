#pragma once

// JSON forms of Bernstein specs and results ("schema_version": 1).

#include <string>

#include <json.hpp>

#include "expfun/bernstein.hpp"
#include "expfun/series.hpp"

namespace expfun {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const BernsteinSpec& spec);
BernsteinSpec bernstein_from_json(const nlohmann::json& j);

/// "log1p", "power:0.5", "shifted_power:0.5", "loglog", "truncated_gamma",
/// "linear:1", each optionally followed by ",q=<rate>", or a JSON object.
BernsteinSpec parse_phi(const std::string& text);

nlohmann::json to_json(const SeriesResult& r);
SeriesResult series_result_from_json(const nlohmann::json& j);

/// "re" or "re,im".
cdouble parse_complex(const std::string& text);

}  // namespace expfun

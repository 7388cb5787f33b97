#pragma once

#include <fstream>
#include <istream>
#include <string>

#include <json.hpp>

#include "gluepoll/errors.hpp"
#include "gluepoll/model.hpp"

namespace gluepoll {

// Config file schema (JSON):
//
//   {
//     "stations": [
//       {
//         "lambda_hat": 0.1,
//         "service":    {"family": "exponential", "mean": 1.0},
//         "switchover": {"family": "exponential", "mean": 2.0},
//         "glue": 3.0,
//         "retrial_rate": 5.0
//       },
//       ...
//     ]
//   }
//
// Distribution entries accept an optional "scv" (squared coefficient of
// variation); second_moment = mean^2 (1 + scv). "scv" is implied for
// exponential (1) and deterministic (0) and required for gamma/two_point.
// The lambda_hat values are treated as relative rates and normalized so
// that the profile carries unit load at rho = 1.

namespace detail {

inline DistFamily parse_family(const std::string& s, int station, const char* role) {
  if (s == "exponential" || s == "exp") return DistFamily::exponential;
  if (s == "deterministic" || s == "det") return DistFamily::deterministic;
  if (s == "gamma" || s == "gamma_shaped") return DistFamily::gamma_shaped;
  if (s == "two_point" || s == "two-point") return DistFamily::two_point;
  throw ConfigParseError("station " + std::to_string(station + 1) + ": unknown " + role +
                         " family \"" + s + "\"");
}

inline ServiceDistribution parse_distribution(const nlohmann::json& j, int station,
                                              const char* role) {
  const std::string where = "station " + std::to_string(station + 1) + " " + role;
  if (!j.is_object()) throw ConfigParseError(where + ": expected an object");
  if (!j.contains("family") || !j.contains("mean"))
    throw ConfigParseError(where + ": needs \"family\" and \"mean\"");
  const DistFamily family = parse_family(j.at("family").get<std::string>(), station, role);
  const double mean = j.at("mean").get<double>();
  double scv;
  if (j.contains("scv")) {
    scv = j.at("scv").get<double>();
  } else {
    switch (family) {
      case DistFamily::exponential: scv = 1.0; break;
      case DistFamily::deterministic: scv = 0.0; break;
      default:
        throw ConfigParseError(where + ": \"scv\" is required for family \"" +
                               std::string(to_string(family)) + "\"");
    }
  }
  return ServiceDistribution::from_scv(family, mean, scv);
}

}  // namespace detail

inline LoadProfile load_profile(std::istream& in, const std::string& origin = "<stream>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigParseError(origin + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("stations") || !j.at("stations").is_array())
    throw ConfigParseError(origin + ": top-level \"stations\" array is required");

  PollingConfig config;
  int idx = 0;
  try {
    for (const auto& js : j.at("stations")) {
      StationParams st;
      if (!js.contains("lambda_hat"))
        throw ConfigParseError("station " + std::to_string(idx + 1) +
                               ": \"lambda_hat\" is required");
      st.arrival_rate = js.at("lambda_hat").get<double>();
      st.service = detail::parse_distribution(js.at("service"), idx, "service");
      st.switchover = detail::parse_distribution(js.at("switchover"), idx, "switchover");
      if (!js.contains("glue") || !js.contains("retrial_rate"))
        throw ConfigParseError("station " + std::to_string(idx + 1) +
                               ": \"glue\" and \"retrial_rate\" are required");
      st.glue_duration = js.at("glue").get<double>();
      st.retrial_rate = js.at("retrial_rate").get<double>();
      config.stations.push_back(st);
      ++idx;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigParseError(origin + ": station " + std::to_string(idx + 1) + ": " + e.what());
  }
  return normalize(config);  // throws ValidationError listing every violation
}

inline LoadProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open config file: " + path);
  return load_profile(in, path);
}

}  // namespace gluepoll

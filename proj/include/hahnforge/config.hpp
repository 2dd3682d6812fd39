#pragma once

// Per-invocation settings: prime configuration, truncation and search bounds.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "hahnforge/errors.hpp"
#include "hahnforge/newton.hpp"
#include "hahnforge/padic_hahn.hpp"

namespace hahnforge {

enum class OutputMode { Text, Json };

struct RunConfig {
  std::int64_t p = 2;
  int r = 1;
  int L = 2;             // guard digits added to each bucket's Witt length
  int L_max = 256;  // largest Witt length a bucket may need
  int max_field_degree = 6;
  int stall_limit = 3;
  OutputMode output = OutputMode::Text;

  void validate() const {
    if (p < 2) throw Error(ErrorKind::UsageError, "p must be a prime");
    for (std::int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw Error(ErrorKind::UsageError, "p = " + std::to_string(p) + " is not prime");
    if (r < 1 || L < 1 || L_max < 1 || max_field_degree < 1 || stall_limit < 1)
      throw Error(ErrorKind::UsageError, "r, L, L_max, max_field_degree and stall_limit must be >= 1");
  }

  NormalizeOptions normalize_options() const { return NormalizeOptions{L, L_max}; }

  NewtonOptions newton_options() const {
    NewtonOptions o;
    o.max_field_degree = max_field_degree;
    o.stall_limit = stall_limit;
    return o;
  }

  /// Overlays the keys present in `j`; unknown keys are rejected.
  void merge_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::UsageError, "config must be a JSON object");
    try {
      for (const auto& [key, val] : j.items()) {
        if (key == "p") {
          p = val.get<std::int64_t>();
        } else if (key == "r") {
          r = val.get<int>();
        } else if (key == "L") {
          L = val.get<int>();
        } else if (key == "L_max") {
          L_max = val.get<int>();
        } else if (key == "max_field_degree") {
          max_field_degree = val.get<int>();
        } else if (key == "stall_limit") {
          stall_limit = val.get<int>();
        } else if (key == "output") {
          const auto s = val.get<std::string>();
          if (s != "text" && s != "json") throw Error(ErrorKind::UsageError, "output must be \"text\" or \"json\"");
          output = s == "json" ? OutputMode::Json : OutputMode::Text;
        } else {
          throw Error(ErrorKind::UsageError, "unknown config key '" + key + "'");
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::UsageError, std::string("config: ") + e.what());
    }
  }

  nlohmann::json to_json() const {
    return {{"p", p},
            {"r", r},
            {"L", L},
            {"L_max", L_max},
            {"max_field_degree", max_field_degree},
            {"stall_limit", stall_limit},
            {"output", output == OutputMode::Json ? "json" : "text"}};
  }
};

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UsageError, "cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::UsageError, "config file '" + path + "': " + e.what());
  }
  RunConfig c;
  c.merge_json(j);
  return c;
}

/// Defaults, overlaid by the file named in HAHNFORGE_CONFIG when set.
inline RunConfig default_config() {
  const char* path = std::getenv("HAHNFORGE_CONFIG");
  if (!path || !*path) return {};
  return load_config_file(path);
}

}  // namespace hahnforge

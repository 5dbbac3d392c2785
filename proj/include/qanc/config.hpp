#pragma once

// Run configuration: the ParameterSet fields at top level plus optional
// "sweep" and "search" objects. Unknown keys are rejected.

#include <optional>
#include <string>

#include <json.hpp>

#include "qanc/construction.hpp"
#include "qanc/params.hpp"
#include "qanc/verify.hpp"

namespace qanc {

struct RunConfig {
  ParameterSet params;
  verify::SweepSpec sweep;
  construction::SearchRanges search;
  bool has_search = false;

  /// Throws ConfigError on unknown keys or bad values.
  static RunConfig from_json(const nlohmann::json& j);
  /// Reads and parses a file; unreadable files and JSON syntax errors throw
  /// ConfigError.
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

/// Parses a JSON file, mapping I/O and syntax failures to ConfigError.
nlohmann::json read_json_file(const std::string& path);

}  // namespace qanc

#include "qanc/config.hpp"

#include <fstream>
#include <set>

#include "qanc/errors.hpp"

namespace qanc {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"c",  "r",   "gamma", "log_alpha",   "t1",
                                              "eta", "R0", "generations", "epsilon_seed",
                                              "sweep", "search"};
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
    if (k != "sweep" && k != "search") params[k] = v;
  }
  RunConfig cfg;
  cfg.params = ParameterSet::from_json(params);
  if (j.contains("sweep")) cfg.sweep = verify::SweepSpec::from_json(j.at("sweep"));
  for (int g : cfg.sweep.generations) {
    if (g > cfg.params.generations) {
      throw ConfigError("sweep generation " + std::to_string(g) + " exceeds generations = " +
                        std::to_string(cfg.params.generations));
    }
  }
  if (j.contains("search")) {
    try {
      cfg.search = construction::SearchRanges::from_json(j.at("search"));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad search ranges: ") + e.what());
    }
    cfg.has_search = true;
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  try {
    return from_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = params.to_json();
  j["sweep"] = sweep.to_json();
  if (has_search) j["search"] = search.to_json();
  return j;
}

}  // namespace qanc

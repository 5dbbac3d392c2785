#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qanc/config.hpp"
#include "qanc/errors.hpp"

using namespace qanc;

namespace {

std::string cfg(const char* name) { return std::string(QANC_SOURCE_DIR) + "/configs/" + name; }

std::string write_tmp(const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / "qanc_test_config.json";
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("shipped configs load") {
  const auto m = RunConfig::load(cfg("seed_moderate.json"));
  CHECK(m.params.c == 0.3);
  CHECK(m.params.log_alpha == 800.0);
  CHECK(m.sweep.mode.mode == construction::Mode::kModerate);
  CHECK_FALSE(m.has_search);
  CHECK(RunConfig::load(cfg("seed_paper.json")).sweep.mode.mode == construction::Mode::kPaper);
  const auto s = RunConfig::load(cfg("search.json"));
  CHECK(s.has_search);
  CHECK(RunConfig::load(cfg("bad_gamma.json")).params.gamma == 0.1);
}

TEST_CASE("round trip through JSON") {
  const auto a = RunConfig::load(cfg("search.json"));
  const auto b = RunConfig::from_json(a.to_json());
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("bad files and keys are config errors") {
  const auto seed = RunConfig::load(cfg("seed_moderate.json")).to_json();
  const auto with = [&](const std::string& key, const nlohmann::json& v) {
    auto j = seed;
    j[key] = v;
    return write_tmp(j.dump());
  };
  CHECK_NOTHROW(RunConfig::load(write_tmp(seed.dump())));
  CHECK_THROWS_AS(RunConfig::load(cfg("malformed.json")), ConfigError);
  CHECK_THROWS_AS(RunConfig::load(cfg("does_not_exist.json")), ConfigError);
  CHECK_THROWS_AS(RunConfig::load(write_tmp(R"([1, 2])")), ConfigError);
  CHECK_THROWS_AS(RunConfig::load(write_tmp(R"({"c": 0.3})")), ConfigError);
  CHECK_THROWS_AS(RunConfig::load(with("colour", 1)), ConfigError);
  CHECK_THROWS_AS(RunConfig::load(with("c", "0.3")), ConfigError);
  CHECK_THROWS_AS(RunConfig::load(with("sweep", {{"generations", {4}}})), ConfigError);
  CHECK_THROWS_AS(RunConfig::load(with("search", {{"budget", 4}, {"seed", 1}, {"colour", 1}})),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::load(with("search", {{"budget", 4}, {"seed", -1}})), ConfigError);
}

}

// qanc: search, verify, curvature spot checks, growth series, report summary.
// Exit codes: 0 pass, 1 mathematical failure, 2 usage or config failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qanc/config.hpp"
#include "qanc/construction.hpp"
#include "qanc/curvature.hpp"
#include "qanc/errors.hpp"
#include "qanc/growth.hpp"
#include "qanc/verify.hpp"

namespace fs = std::filesystem;
using namespace qanc;

namespace {

constexpr int kPass = 0;
constexpr int kMathFailure = 1;
constexpr int kUsage = 2;

struct Common {
  std::string config;
  std::string mode;
  std::string out_dir = ".";
};

RunConfig load_config(const Common& c) {
  RunConfig cfg = RunConfig::load(c.config);
  if (!c.mode.empty()) cfg.sweep.mode.mode = construction::parse_mode(c.mode);
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot write '" + p.string() + "'");
  return os;
}

// Every CSV starts with a comment line echoing the run configuration.
void echo_params(std::ostream& os, const RunConfig& cfg) {
  os << "# config: " << cfg.to_json().dump() << "\n";
}

int report_failure(const ConstraintLedger& L) {
  const auto f = L.first_failure();
  if (f) {
    std::cerr << "FAIL " << f->name << ": achieved " << f->achieved << " " << f->relation << " "
              << f->required << " does not hold";
    if (!f->note.empty()) std::cerr << " (" << f->note << ")";
    std::cerr << "\n";
  }
  std::string others;
  for (const auto& e : L.entries())
    if (!e.pass && (!f || e.name != f->name)) others += (others.empty() ? "" : ", ") + e.name;
  if (!others.empty()) std::cerr << "also failing: " << others << "\n";
  return kMathFailure;
}

growth::GrowthSeries run_growth(const RunConfig& cfg, int generations) {
  ParameterSet p = cfg.params;
  p.generations = std::max(p.generations, generations);
  const auto cons = construction::build_construction(p, cfg.sweep.mode);
  return growth::growth_series(*cons, generations);
}

int cmd_verify(const Common& c, int growth_generations) {
  const RunConfig cfg = load_config(c);
  const fs::path dir(c.out_dir);

  auto samples = open_out(dir / "samples.csv");
  echo_params(samples, cfg);
  auto rep = verify::sweep_Q(cfg.params, cfg.sweep, &samples);

  nlohmann::json growth_j;
  try {
    const auto gs = run_growth(cfg, growth_generations);
    auto gcsv = open_out(dir / "growth.csv");
    echo_params(gcsv, cfg);
    gs.write_csv(gcsv);
    rep.ledger.append(gs.to_ledger(cfg.params.gamma));
    growth_j = gs.to_json();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    rep.ledger.add_failure("growth", e.what());
  }
  rep.pass = rep.ledger.pass();

  nlohmann::json j = rep.to_json();
  j["config"] = cfg.to_json();
  j["growth"] = growth_j;
  auto out = open_out(dir / "report.json");
  out << std::setw(1) << j << "\n";

  std::cout << "ledger: " << rep.ledger.entries().size() << " entries, "
            << (rep.pass ? "all pass" : "FAIL") << "\n";
  return rep.pass ? kPass : report_failure(rep.ledger);
}

int cmd_search(const Common& c, const std::string& output) {
  const RunConfig cfg = load_config(c);
  if (!cfg.has_search) throw ConfigError("config has no \"search\" ranges");
  const auto res = construction::search_parameters(cfg.search, cfg.params, cfg.sweep.mode);
  nlohmann::json j = {{"feasible", res.feasible},
                      {"evaluated", res.evaluated},
                      {"parameters", res.best.to_json()},
                      {"required_log_alpha", res.required_log_alpha},
                      {"min_relative_margin", res.min_relative_margin},
                      {"ledger", res.ledger.to_json()},
                      {"search", cfg.search.to_json()}};
  if (!res.feasible) j["binding"] = res.binding;
  auto out = open_out(output.empty() ? fs::path(c.out_dir) / "search.json" : fs::path(output));
  out << std::setw(1) << j << "\n";
  if (!res.feasible) {
    std::cerr << "FAIL no feasible parameter set in " << res.evaluated
              << " candidates; binding constraint " << res.binding << "\n";
    return kMathFailure;
  }
  std::cout << "feasible after " << res.evaluated << " candidates, required log alpha "
            << res.required_log_alpha << "\n";
  return kPass;
}

struct PointSpec {
  int generation = 1;
  double s = 0, x = 0;
};

PointSpec parse_point(const std::string& line) {
  std::string t = line;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  PointSpec p;
  if (!(is >> p.generation >> p.s >> p.x)) throw ConfigError("bad point '" + line + "'");
  return p;
}

std::vector<PointSpec> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open points file '" + path + "'");
  std::vector<PointSpec> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("generation", 0) == 0) continue;
    pts.push_back(parse_point(line));
  }
  return pts;
}

int cmd_curvature(const Common& c, const std::string& points_file,
                  const std::vector<std::string>& points, const std::string& output) {
  const RunConfig cfg = load_config(c);
  std::vector<PointSpec> pts;
  if (!points_file.empty()) pts = read_points(points_file);
  for (const auto& p : points) pts.push_back(parse_point(p));
  if (pts.empty()) throw ConfigError("no points given (use --points or --point)");

  const auto cons = construction::build_construction(cfg.params, cfg.sweep.mode);
  std::ofstream file;
  if (!output.empty()) file = open_out(output);
  std::ostream& os = output.empty() ? std::cout : file;
  echo_params(os, cfg);
  os << verify::csv_header() << "\n";
  for (const auto& p : pts) {
    curvature::CurvatureSample smp;
    try {
      smp = curvature::sample(*cons, p.generation, XReal(p.s), XReal(p.x));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("point outside the domain: ") + e.what());
    }
    verify::write_csv_row(os, smp);
  }
  return kPass;
}

int cmd_growth(const Common& c, int generations, const std::string& output) {
  const RunConfig cfg = load_config(c);
  const auto gs = run_growth(cfg, generations);
  const fs::path csv = output.empty() ? fs::path(c.out_dir) / "growth.csv" : fs::path(output);
  auto os = open_out(csv);
  echo_params(os, cfg);
  gs.write_csv(os);
  const auto L = gs.to_ledger(cfg.params.gamma);
  std::cout << "exponent " << std::setprecision(10) << gs.fit.exponent << " (target "
            << 4.0 + 2.0 * cfg.params.gamma << "), diam/t in [" << gs.diam_min << ", "
            << gs.diam_max << "], V1 " << gs.fit.V1 << ", V2 " << gs.fit.V2 << "\n";
  return L.pass() ? kPass : report_failure(L);
}

int cmd_report(const std::string& input) {
  const auto j = read_json_file(input);
  if (!j.contains("ledger") || !j.at("ledger").is_array()) {
    throw ConfigError("'" + input + "' has no ledger");
  }
  int failed = 0;
  for (const auto& e : j.at("ledger")) {
    const bool pass = e.value("pass", false);
    failed += pass ? 0 : 1;
    std::cout << (pass ? "pass  " : "FAIL  ") << std::left << std::setw(34)
              << e.value("name", std::string("?")) << " margin " << e.at("margin").dump() << "\n";
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    std::cout << "sweep points " << s.value("points", 0L) << ", K0^2 " << s.value("K0_squared", 0.0)
              << "\n";
  }
  if (j.contains("growth") && j.at("growth").is_object()) {
    std::cout << "growth exponent " << j.at("growth").value("exponent", 0.0) << "\n";
  }
  std::cout << (failed ? "FAIL" : "pass") << " (" << failed << " failing entries)\n";
  return failed ? kMathFailure : kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification pipeline for the doubly warped positive-Ricci metric"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "run configuration JSON")->required();
    sub->add_option("--mode", common.mode, "moderate | paper (overrides sweep.mode)")
        ->check(CLI::IsMember({"moderate", "paper"}));
    sub->add_option("--out", common.out_dir, "output directory");
  };

  int growth_generations = 10;
  auto* verify_cmd = app.add_subcommand("verify", "ledger, sweep, surgery sites and growth");
  add_common(verify_cmd);
  verify_cmd->add_option("--growth-generations", growth_generations)->check(CLI::Range(5, 1000));

  std::string search_out;
  auto* search_cmd = app.add_subcommand("search", "random search over the \"search\" ranges");
  add_common(search_cmd);
  search_cmd->add_option("--output", search_out, "result JSON (default <out>/search.json)");

  std::string points_file, curv_out;
  std::vector<std::string> points;
  auto* curv_cmd = app.add_subcommand("curvature", "curvature at explicit (generation, s, x) points");
  add_common(curv_cmd);
  curv_cmd->add_option("--points", points_file, "CSV of generation,s,x");
  curv_cmd->add_option("--point", points, "one point as generation,s,x");
  curv_cmd->add_option("--output", curv_out, "CSV path (default stdout)");

  int gen_count = 10;
  std::string growth_out;
  auto* growth_cmd = app.add_subcommand("growth", "volume and diameter growth series");
  add_common(growth_cmd);
  growth_cmd->add_option("--generations", gen_count)->check(CLI::Range(1, 1000));
  growth_cmd->add_option("--output", growth_out, "CSV path (default <out>/growth.csv)");

  std::string report_in;
  auto* report_cmd = app.add_subcommand("report", "summarize a report.json ledger");
  report_cmd->add_option("--input", report_in, "report.json from verify")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*verify_cmd) return cmd_verify(common, growth_generations);
    if (*search_cmd) return cmd_search(common, search_out);
    if (*curv_cmd) return cmd_curvature(common, points_file, points, curv_out);
    if (*growth_cmd) return cmd_growth(common, gen_count, growth_out);
    if (*report_cmd) return cmd_report(report_in);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "FAIL " << e.what() << "\n";
    return kMathFailure;
  }
  return kUsage;
}

// Python bindings. Structured results cross the boundary as JSON text and are
// decoded on the Python side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "qanc/config.hpp"
#include "qanc/construction.hpp"
#include "qanc/curvature.hpp"
#include "qanc/errors.hpp"
#include "qanc/growth.hpp"
#include "qanc/json_util.hpp"
#include "qanc/verify.hpp"

namespace py = pybind11;
using namespace qanc;
using nlohmann::json;

namespace {

ParameterSet params_from(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
  return ParameterSet::from_json(j);
}

construction::ModeSettings mode_from(const std::string& mode) {
  construction::ModeSettings m;
  m.mode = construction::parse_mode(mode);
  return m;
}

std::string derived(const std::string& params) {
  const auto p = params_from(params);
  return derive_constants(p).to_json(p.generations).dump();
}

std::string admissibility(const std::string& params, const std::string& mode) {
  return construction::check_admissibility(params_from(params), mode_from(mode)).to_json().dump();
}

std::string curvature_at(const std::string& params, const std::string& mode, int generation,
                         double s, double x) {
  const auto cons = construction::build_construction(params_from(params), mode_from(mode));
  const auto smp = curvature::sample(*cons, generation, XReal(s), XReal(x));
  json j = {{"generation", generation}, {"s", s}, {"x", x}, {"excised", smp.excised}};
  const auto v = smp.values();
  for (std::size_t i = 0; i < v.size(); ++i) j[curvature::value_names()[i]] = xreal_to_json(v[i]);
  return j.dump();
}

std::string growth_of(const std::string& params, const std::string& mode, int generations) {
  auto p = params_from(params);
  p.generations = std::max(p.generations, generations);
  const auto cons = construction::build_construction(p, mode_from(mode));
  const auto gs = growth::growth_series(*cons, generations);
  json j = gs.to_json();
  j["ledger"] = gs.to_ledger(p.gamma).to_json();
  return j.dump();
}

std::string oracle(const std::string& params, int n_points, unsigned long long seed) {
  const auto cons = construction::build_construction(params_from(params), mode_from("moderate"));
  return verify::oracle_crosscheck(*cons, n_points, 1e-4, 1e-3, seed).to_json().dump();
}

std::string verify_config(const std::string& config) {
  json j;
  try {
    j = json::parse(config);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
  const auto cfg = RunConfig::from_json(j);
  auto rep = verify::sweep_Q(cfg.params, cfg.sweep);
  return rep.to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_qanc, m) {
  m.doc() = "Doubly warped positive-Ricci metric: construction, curvature and verification";

  // Later registrations are tried first, so ConfigError wins over the base.
  auto& base = py::register_exception<Error>(m, "QancError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("seed_parameters", [] { return ParameterSet{}.to_json().dump(); });
  m.def("derived_constants", &derived, py::arg("params"));
  m.def("admissibility", &admissibility, py::arg("params"), py::arg("mode"));
  m.def("curvature", &curvature_at, py::arg("params"), py::arg("mode"), py::arg("generation"),
        py::arg("s"), py::arg("x"));
  m.def("growth", &growth_of, py::arg("params"), py::arg("mode"), py::arg("generations"));
  m.def("oracle", &oracle, py::arg("params"), py::arg("n_points"), py::arg("seed"));
  m.def("verify", &verify_config, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("core_t0", &curvature::core_t0);
}

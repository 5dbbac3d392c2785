#include "qanc/params.hpp"

#include <cmath>
#include <numbers>

#include "qanc/errors.hpp"
#include "qanc/json_util.hpp"

namespace qanc {

namespace {

double read_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing parameter '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("parameter '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(std::string("parameter '") + key + "' is not finite");
  return d;
}

}  // namespace

ParameterSet ParameterSet::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("parameter set must be a JSON object");
  ParameterSet p;
  p.c = read_number(j, "c");
  p.r = read_number(j, "r");
  p.gamma = read_number(j, "gamma");
  p.log_alpha = read_number(j, "log_alpha");
  p.t1 = read_number(j, "t1");
  p.eta = read_number(j, "eta");
  p.R0 = read_number(j, "R0");
  p.epsilon_seed = read_number(j, "epsilon_seed");
  if (!j.contains("generations") || !j.at("generations").is_number_integer()) {
    throw ConfigError("parameter 'generations' must be an integer");
  }
  p.generations = j.at("generations").get<int>();
  if (p.generations < 1) throw ConfigError("generations must be >= 1");
  return p;
}

nlohmann::json ParameterSet::to_json() const {
  return {{"c", c},   {"r", r},         {"gamma", gamma},           {"log_alpha", log_alpha},
          {"t1", t1}, {"eta", eta},     {"R0", R0},                 {"generations", generations},
          {"epsilon_seed", epsilon_seed}};
}

double r_bound(double c) {
  const double sqrtK = std::sqrt(1.0 - c * c) / c;
  return std::numbers::pi / (4.0 * sqrtK) - std::acos(c) / sqrtK / 2.0;
}

double DerivedConstants::log_t(int i) const { return log_t1 + (i - 1) * log_alpha; }

XReal DerivedConstants::t(int i) const {
  // t1 * e^{(i-1) log alpha}, keeping the t1 factor exact.
  return XReal(std::exp(log_t1)) * XReal::from_log((i - 1) * log_alpha);
}

XReal DerivedConstants::K_i(int i) const {
  const XReal ti = t(i);
  return XReal(K) / (ti * ti);
}

double DerivedConstants::log_g(int i) const {
  return gamma * (log_t(i) + std::log1p(r / 6.0));
}

nlohmann::json DerivedConstants::to_json(int generations) const {
  nlohmann::json j{{"K", K},
                   {"sqrtK", sqrtK},
                   {"psi", psi},
                   {"sqrtK_psi", sqrtK * psi},
                   {"r_c", r_c},
                   {"Delta", Delta},
                   {"cos_Delta", cos_Delta},
                   {"sin_Delta_over_sqrtK", sin_Delta / sqrtK},
                   {"beta", beta},
                   {"ball_angle", ball_angle},
                   {"C", C},
                   {"II_ball", II_ball},
                   {"D", D},
                   {"omega0", omega0}};
  auto gens = nlohmann::json::array();
  for (int i = 1; i <= generations; ++i) {
    gens.push_back({{"i", i},
                    {"log_t", log_t(i)},
                    {"t", xreal_to_json(t(i))},
                    {"r_i", xreal_to_json(t(i) * XReal(r))},
                    {"K_i", xreal_to_json(K_i(i))},
                    {"log_g", log_g(i)}});
  }
  j["generations"] = gens;
  return j;
}

DerivedConstants derive_constants(const ParameterSet& p) {
  if (!(p.c > 0.0 && p.c < 1.0)) throw DomainError("c must lie in (0, 1)");
  if (!(p.r > 0.0)) throw DomainError("r must be positive");
  if (!(p.t1 > 0.0)) throw DomainError("t1 must be positive");
  if (!(p.log_alpha > 0.0)) throw DomainError("log_alpha must be positive");
  DerivedConstants d;
  d.c = p.c;
  d.r = p.r;
  d.gamma = p.gamma;
  d.log_alpha = p.log_alpha;
  d.log_t1 = std::log(p.t1);
  d.K = (1.0 - p.c * p.c) / (p.c * p.c);
  d.sqrtK = std::sqrt(d.K);
  d.psi = std::acos(p.c) / d.sqrtK;
  d.r_c = r_bound(p.c);
  if (p.r > d.r_c * (1.0 + 1e-15)) {
    throw AdmissibilityError("r = " + std::to_string(p.r) + " exceeds r(c) = " +
                             std::to_string(d.r_c));
  }
  d.Delta = d.sqrtK * (2.0 * p.r + d.psi);
  d.cos_Delta = std::cos(d.Delta);
  d.sin_Delta = std::sin(d.Delta);
  const double l12 = std::log1p(2.0 * p.r);
  d.beta = p.log_alpha / (p.log_alpha - l12 + p.r * (1.0 + p.r) / (6.0 * (1.0 + 2.0 * p.r)));
  d.ball_angle = 0.8 * d.sqrtK * p.r;
  d.C = std::cos(d.ball_angle);
  d.II_ball = d.sqrtK / std::tan(d.ball_angle);
  d.D = 2.0 * (d.II_ball + (1.0 + 3.0 * p.c) / (2.0 * p.c));
  d.omega0 = d.sqrtK * (p.r + d.psi);
  return d;
}

}  // namespace qanc

#pragma once

#include <cstdint>

#include <json.hpp>

#include "qanc/xreal.hpp"

namespace qanc {

/// Free constants of the construction. Generation i occupies
/// t in [t_i, t_{i+1}] with t_i = t1 * alpha^(i-1).
struct ParameterSet {
  double c = 0.3;
  double r = 0.0247;
  double gamma = 0.02;
  double log_alpha = 800.0;
  double t1 = 10.0;
  double eta = 0.04;
  double R0 = 1e-13;
  int generations = 3;
  double epsilon_seed = 5e-8;

  /// Reads exactly the field names above; missing or non-numeric fields
  /// throw ConfigError.
  static ParameterSet from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// The spherical-block radius bound r(c) = pi/(4 sqrt K) - psi/2.
double r_bound(double c);

struct DerivedConstants {
  double c = 0, r = 0, gamma = 0, log_alpha = 0, log_t1 = 0;
  double K = 0;
  double sqrtK = 0;
  double psi = 0;        // sqrt(K) psi = arccos(c)
  double r_c = 0;        // r(c)
  double Delta = 0;      // sqrt(K)(2r + psi)
  double cos_Delta = 0;
  double sin_Delta = 0;
  double beta = 0;
  double ball_angle = 0;  // 4 sqrt(K) r / 5
  double C = 0;           // cos(ball_angle)
  double II_ball = 0;     // sqrt(K) cot(ball_angle)
  double D = 0;           // 2 [sqrt(K) cot(ball_angle) + (1+3c)/(2c)]
  double omega0 = 0;      // sqrt(K)(r + psi), colatitude of the ball centre

  double log_t(int i) const;
  XReal t(int i) const;
  XReal K_i(int i) const;  // K / t_i^2
  /// log g_i with g_i = (t_i + r_i/6)^gamma.
  double log_g(int i) const;

  nlohmann::json to_json(int generations) const;
};

/// Throws DomainError for c outside (0,1) or r <= 0, AdmissibilityError for
/// r > r(c).
DerivedConstants derive_constants(const ParameterSet& p);

}  // namespace qanc

#pragma once

// Grid sweep of the normalized curvature over generations, decay constant,
// generation-reduction checks and the finite-difference cross-check.

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qanc/construction.hpp"
#include "qanc/curvature.hpp"
#include "qanc/ledger.hpp"
#include "qanc/surgery.hpp"

namespace qanc::verify {

struct SweepSpec {
  std::vector<int> generations{1, 2, 3};
  int s_points = 400;       // log-uniform points on [1+2r, alpha]
  int sphere_points = 120;  // uniform points on [1, 1+2r]
  int x_points = 256;       // per f_eps profile, split across its branches
  int window_points = 64;   // per smoothing window
  int junction_points = 10;  // extra points on each side of a junction
  unsigned long long seed = 1;
  construction::ModeSettings mode;

  /// Reads the "sweep" object of a config; unknown keys throw ConfigError.
  static SweepSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SamplePoint {
  int generation = 0;
  XReal s;
  XReal x;
  XReal value;
  std::string what;

  nlohmann::json to_json() const;
};

struct SweepResult {
  long points = 0;   // evaluated (generation, s, x) triples outside the balls
  long excised = 0;  // grid triples inside a surgery ball
  std::array<XReal, 4> min_ricci;
  std::array<SamplePoint, 4> min_ricci_at;
  std::array<XReal, 8> min_sectional;
  SamplePoint min_sectional_at;
  double K0_sq = 0;        // max(0, -min normalized sectional)
  double K0_first_form = 0;  // K0^2 (1 + 1/t1^2): constant of K >= -K0/(1+t^2) for t >= t1
  ConstraintLedger reduction;  // generation-reduction invariants
  long reduction_compared = 0;

  nlohmann::json to_json() const;
};

/// K0^2 = max(0, -min of the normalized sectional values).
double fit_decay_constant(const std::vector<curvature::CurvatureSample>& samples,
                          SamplePoint* binding = nullptr);

/// Sweeps every generation of `spec` on a shared (s, x) grid. When `csv` is
/// given one row per evaluated triple is written.
SweepResult sweep(const construction::Construction& cons, const SweepSpec& spec,
                  std::ostream* csv = nullptr);

struct VerificationReport {
  ParameterSet parameters;
  DerivedConstants derived;
  construction::ModeSettings mode;
  ConstraintLedger ledger;
  SweepResult sweep;
  std::vector<surgery::SiteReport> sites;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Admissibility ledger, Menguy margins of every epsilon in use, surgery
/// sites, base cap and the curvature sweep.
VerificationReport sweep_Q(const ParameterSet& p, const SweepSpec& spec, std::ostream* csv = nullptr);

// ---------------------------------------------------------------------------
// finite-difference cross-check

struct OracleReport {
  int points = 0;
  double rel_step = 0;
  double x_rel_step = 0;
  double max_relative_deviation = 0;
  SamplePoint worst;
  double max_richardson_change = 0;

  nlohmann::json to_json() const;
};

/// Compares the closed-form frame curvature (generation 1) with fd_riemann at
/// `n_points` seeded random points outside the balls and away from profile
/// junctions. Relative deviation is |closed - fd| / max(|closed|, 1).
/// Steps are relative: `rel_step` for s and the angles, `x_rel_step` for x,
/// where the curvature is a difference of terms up to ~1/x^2 larger.
OracleReport oracle_crosscheck(const construction::Construction& cons, int n_points,
                               double rel_step = 1e-4, double x_rel_step = 1e-3,
                               unsigned long long seed = 7, bool corrupt_x_theta = false);

/// Round S^4 slice x S^2 and flat product through the same oracle; returns
/// the max deviation from sectional curvatures 1 / 0.
double constant_curvature_fixture_error(double rel_step = 1e-4);

/// Samples CSV header (generation, s, x, excised, 13 values).
std::string csv_header();
/// One samples-CSV row in csv_header() order.
void write_csv_row(std::ostream& os, const curvature::CurvatureSample& smp);

}  // namespace qanc::verify

#pragma once

// Volume and diameter growth along the generations. Volumes are measured
// from t = t1 and kept in log form.

#include <ostream>
#include <vector>

#include <json.hpp>

#include "qanc/construction.hpp"
#include "qanc/ledger.hpp"

namespace qanc::growth {

/// Per-generation pieces of Vol = 16 pi^2 F t_i^(4+2gamma) (1+r/6)^(2gamma) I.
struct GenerationVolume {
  int generation = 0;
  double eps = 0;           // epsilon of the f_eps used for F
  double F = 0;             // int_0^pi f^2 dx
  XReal I;                  // int_1^alpha U^3 G^2 ds
  double log_volume = 0;
  double log_glued_scale = 0;  // log(t_i^4 g_i^2 / II_ball^4), not added to the volume
};

GenerationVolume generation_volume(const construction::Construction& cons, int gen);

/// int_0^pi f^2 dx by Gauss-Legendre panels aligned with the branches.
double f_square_integral(const construction::FProfile& f);

/// log Vol(B(p0, t)) for t >= t1: completed generations plus the partial
/// block containing t.
double volume_of_ball(const construction::Construction& cons, double log_t);

/// diam/t estimated by the x-meridian: pi U(s)/s.
double diameter_at(const construction::Construction& cons, double log_t);

struct GrowthSample {
  double log_t = 0;
  double log_vol = 0;
  double diam_ratio = 0;
  bool aligned = false;  // t = t_j
};

struct GrowthFit {
  double exponent = 0;
  double intercept = 0;
  int used = 0;
  double V1 = 0;  // min of Vol/t^(4+2gamma) over in-period samples
  double V2 = 0;  // max
};

/// Least-squares slope of log Vol against log t over the aligned samples and
/// the per-period band of Vol / t^(4+2gamma) (generations >= 2). Throws
/// InsufficientDataError with fewer than 5 aligned samples.
GrowthFit fit_growth_exponent(const std::vector<GrowthSample>& samples, double gamma, double log_t2);

struct GrowthSeries {
  std::vector<GrowthSample> samples;
  std::vector<GenerationVolume> blocks;
  GrowthFit fit;
  double diam_min = 0;  // over samples with t >= t2
  double diam_max = 0;
  double diam_band_lo = 0;  // pi cos(Delta) - 0.05
  double diam_band_hi = 0;  // pi c + 0.05

  /// Exponent within 4+2gamma +- 0.05, exponent <= 5, V1 < V2 and the
  /// diameter ratio inside its band.
  ConstraintLedger to_ledger(double gamma) const;
  nlohmann::json to_json() const;
  void write_csv(std::ostream& os) const;
};

/// Samples `per_period` radii inside each of `generations` blocks plus the
/// aligned radii t_2 .. t_(generations+1).
GrowthSeries growth_series(const construction::Construction& cons, int generations,
                           int per_period = 32);

}  // namespace qanc::growth

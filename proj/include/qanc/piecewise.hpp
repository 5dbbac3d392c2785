#pragma once

// Piecewise one-variable profiles built from a fixed catalog of closed-form
// branch shapes. Every branch supplies its value and first two derivatives
// exactly; coordinates and parameters are XReal so profiles spanning
// hundreds of decades (the normalized block coordinate s in [1, alpha]) stay
// evaluable.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qanc/xreal.hpp"

namespace qanc::piecewise {

enum class Form {
  kScaledSine,         // A sin(k x + phase)
  kAffineTLogT,        // a + b (x - s0) + kappa (x log(x/s0) - x + s0)
  kPowerLaw,           // f0 (x / x0)^p
  kShiftedSineBump,    // R sin(x + delta * phi((x - a) / L))
  kConstant,           // v
  kLogDerivativeRamp,  // a (x - s0) + m / x
  kHermiteBlend,       // right(x) + h P((x - xl) / 2h), P quintic
};

std::string form_name(Form f);

/// Quintic smoothstep cutoff: 1 for z <= 0, 0 for z >= 1, C2 with vanishing
/// first and second derivatives at both ends. Returns derivative `order`.
double smoothstep_cutoff(double z, int order);

struct BlendData;

/// One closed-form piece of a profile on [lo, hi].
struct Branch {
  XReal lo;
  XReal hi;
  Form form = Form::kConstant;
  std::vector<XReal> params;
  std::shared_ptr<const BlendData> blend;  // kHermiteBlend only

  /// Closed-form derivative of the given order (0, 1 or 2). Does not check
  /// the interval; the owning profile does.
  XReal eval(const XReal& x, int order) const;
  /// Exact integral over [a, b] for kConstant and kLogDerivativeRamp.
  double integral(const XReal& a, const XReal& b) const;
  bool has_integral() const;

  nlohmann::json to_json() const;
};

Branch scaled_sine(XReal lo, XReal hi, XReal amplitude, XReal wavenumber, double phase);
Branch affine_t_log_t(XReal lo, XReal hi, double a, double b, double kappa, double s0);
Branch affine(XReal lo, XReal hi, XReal intercept_at_zero, double slope);
Branch power_law(XReal lo, XReal hi, XReal x0, XReal f0, double p);
Branch shifted_sine_bump(XReal lo, XReal hi, XReal amplitude, double delta,
                         double bump_lo, double bump_len);
Branch constant(XReal lo, XReal hi, XReal value);
Branch log_derivative_ramp(XReal lo, XReal hi, double slope, double s0, double m);

/// Blend produced by smooth_min: `left` is the minimum left of the crossing,
/// `right` the minimum right of it. P matches value/1st/2nd derivative of
/// left - right at the left edge and vanishes to second order at the right.
struct BlendData {
  Branch left;
  Branch right;
  XReal xl;    // window left edge
  XReal half;  // window half-width h
  double p0 = 0, p1 = 0, p2 = 0;  // P(0), P'(0), P''(0) in tau units
};

struct SmoothingWindow {
  XReal center;
  XReal half_width;
  std::string blend;  // descriptor
  XReal error_bound;  // max over window of result - min(f1, f2)
};

class PiecewiseProfile {
 public:
  PiecewiseProfile() = default;
  /// Branches must tile [first.lo, last.hi] without gaps. With
  /// `mirror_about = c` the profile extends to [lo, 2c - lo] by
  /// p(x) = p(2c - x).
  PiecewiseProfile(std::vector<Branch> branches, int continuity_class,
                   std::optional<XReal> mirror_about = std::nullopt);

  XReal eval(const XReal& x, int order) const;
  double eval(double x, int order) const;

  std::size_t branch_index(const XReal& x) const;
  const Branch& branch_at(const XReal& x) const { return branches_[branch_index(x)]; }

  XReal lo() const { return branches_.front().lo; }
  XReal hi() const;
  bool contains(const XReal& x) const;

  const std::vector<Branch>& branches() const { return branches_; }
  const std::vector<SmoothingWindow>& smoothing_windows() const { return windows_; }
  void add_window(SmoothingWindow w) { windows_.push_back(std::move(w)); }
  int continuity_class() const { return continuity_; }
  const std::optional<XReal>& mirror_about() const { return mirror_; }

  /// Integral over [a, b] when every covered branch has a closed form.
  double integral(const XReal& a, const XReal& b) const;

  /// Appends the branches of `tail`, whose lo must equal hi().
  PiecewiseProfile then(const PiecewiseProfile& tail, int continuity_class) const;

  nlohmann::json to_json() const;

 private:
  std::vector<Branch> branches_;
  std::vector<SmoothingWindow> windows_;
  int continuity_ = 0;
  std::optional<XReal> mirror_;
};

struct JunctionJump {
  XReal at;
  int order = 0;
  double jump = 0.0;  // |left - right| / max(|left|, |right|, |f| / |x|^order), 0 if all vanish
  bool pass = true;
};

struct ContinuityReport {
  std::vector<JunctionJump> jumps;
  double max_jump = 0.0;
  bool pass = true;
};

/// Compares left/right one-sided derivatives 0..k at every internal junction.
ContinuityReport check_continuity(const PiecewiseProfile& profile, int k, double tol = 1e-9);

/// min(f1, f2) on the common interval, replaced by a C2 quintic blend on a
/// window of full width `window` centred on the unique transversal crossing.
/// Throws StructuralError for zero or multiple crossings.
PiecewiseProfile smooth_min(const Branch& f1, const Branch& f2, const XReal& window);
/// Same, with window = rel * (crossing abscissa).
PiecewiseProfile smooth_min_relative(const Branch& f1, const Branch& f2, double rel);

/// Crossing abscissa of f1 - f2 on the common interval (one sign change).
XReal find_crossing(const Branch& f1, const Branch& f2);

}  // namespace qanc::piecewise

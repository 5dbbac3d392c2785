#pragma once

// Profiles of the doubly warped metric
//   ds^2 = dt^2 + u(t)^2 (dx^2 + f(t,x)^2 dsigma^2) + g(t)^2 dtheta^2
// in normalized form. On generation i, t = t_i s with s in [1, alpha], and
// U(s) = u(t_i s)/t_i, q(s) = t_i g_t/g are generation independent (except
// that generation 1 has no ramp-down on [1, 1 + r/6]).

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qanc/ledger.hpp"
#include "qanc/params.hpp"
#include "qanc/piecewise.hpp"
#include "qanc/xreal.hpp"

namespace qanc::construction {

using piecewise::PiecewiseProfile;

enum class Mode { kModerate, kPaper };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

/// How f_eps is instantiated. Paper mode uses (epsilon_seed 2^-i, R0) from
/// the parameter set; moderate mode uses one representable (eps, R0) pair
/// for every generation so that f_t vanishes identically.
struct ModeSettings {
  Mode mode = Mode::kPaper;
  double moderate_epsilon = 1e-3;
  double moderate_R0 = 0.9;
  double smoothing_window_rel = 0.01;
};

// ---------------------------------------------------------------------------
// u

struct UValues {
  XReal U;
  double Up = 0;            // dU/ds
  double U_over_s = 0;      // U/s
  double sUp_over_U = 0;    // s U'/U  (= t u_t/u)
  double s2Upp_over_U = 0;  // s^2 U''/U  (= t^2 u_tt/u)
};

struct UProfile {
  PiecewiseProfile profile;  // U(s) on [1, alpha]
  XReal alpha;
  XReal s_junction;  // 1 + 2r, end of the spherical branch
  XReal crossing;    // where f1 meets c s
  double kappa = 0;  // t log t coefficient of f1

  UValues at(const XReal& s) const;
};

/// Conclusion-block margins of U on [1, alpha].
struct UConclusion {
  double min_slope_sphere = 0;  // min U' - cos Delta on [1, 1+2r]
  double max_slope_sphere = 0;  // max U' on [1, 1+2r] (must be <= c)
  double max_sphere_curv_err = 0;  // max |-U''/U - K| on [1, 1+2r]
  double min_slope_w = 0;       // min U' - cos Delta on [1+2r, alpha]
  double max_slope_w = 0;       // max U' on [1+2r, alpha] (must be <= (1+3c)/2)
  double min_ricci_w = 0;       // min -3 s^2 U''/U + gamma(1-2gamma) on [1+2r, alpha]
  XReal worst_ricci_s;
  bool pass = false;
  std::string failure;
};

UConclusion u_conclusion(const UProfile& u, const DerivedConstants& dc, int n_points = 10000);

/// Spherical branch on [1, 1+2r], then the C2-smoothed min of
/// f1(s) = sinD/sqrtK + (s - s0) cosD + kappa (s log(s/s0) - s + s0) and c s.
/// With `verify`, throws ConstructionError when the conclusion block fails.
UProfile build_u(const DerivedConstants& dc, double window_rel = 0.01, bool verify = true);

/// Smallest log alpha for which the unsmoothed w satisfies
/// cos Delta log(alpha/(1+2r)) >= c+1 and -3 w''/w + gamma(1-2gamma)/s^2 > 0.
double required_log_alpha(double c, double r, double gamma);

// ---------------------------------------------------------------------------
// g

struct GValues {
  double sq = 0;     // s q = t g_t/g
  double s2gtt = 0;  // s^2 (q' + q^2) = t^2 g_tt/g
  double logG = 0;   // log(g(t_i s)/g_i)
};

struct GProfile {
  PiecewiseProfile q_first;  // generation 1
  PiecewiseProfile q;        // generations >= 2
  double gamma = 0;
  double beta = 0;
  double r = 0;
  const DerivedConstants* dc = nullptr;

  const PiecewiseProfile& q_for(int gen) const { return gen <= 1 ? q_first : q; }
  GValues at(int gen, const XReal& s) const;
  /// log(t^2/g^2) at t = t_gen s.
  double log_t2_over_g2(int gen, const XReal& s) const;
  XReal t2_over_g2(int gen, const XReal& s) const;
  /// log(g(alpha(t_i + r_i/6)) / g(t_i + r_i/6)) - gamma log alpha.
  double closure_defect() const;
};

/// Throws AdmissibilityError when beta lies outside [1/2, 2].
GProfile build_g(const DerivedConstants& dc);

// ---------------------------------------------------------------------------
// f_eps

/// Closed-form ratios of f_eps at x in [0, pi].
struct FRatios {
  int branch = 0;   // 1: sin(lx)/l, 2: power law, 3: shifted sine
  XReal fx_f;       // f_x / f
  XReal neg_fxx_f;  // -f_xx / f
  XReal W;          // (1 - f_x^2) / f^2
  double A = 0;     // tan x |f_x/f - cot x| (x <= pi/2 only)
  double fx_f_sinx = 0;  // (f_x/f) sin x, finite at x = 0
};

class FProfile {
 public:
  FProfile(double eps, double R0);

  double eps() const { return eps_; }
  double R0() const { return R0_; }
  double y() const { return y_; }         // l b
  const XReal& l() const { return l_; }
  const XReal& b() const { return b_; }
  double delta() const { return delta_; }
  double bump_end() const { return eps_ + bump_len_; }  // eps^(1/4)

  const PiecewiseProfile& profile() const { return profile_; }
  XReal value(const XReal& x) const { return profile_.eval(x, 0); }
  FRatios ratios(const XReal& x) const;
  int branch(const XReal& x) const;

  nlohmann::json to_json() const;

 private:
  double eps_, R0_;
  double y_ = 0;
  XReal l_, b_;
  double delta_ = 0;
  double bump_len_ = 0;
  PiecewiseProfile profile_;
};

/// Throws DomainError for eps outside (0, 1) or R0 outside (0, 1).
std::shared_ptr<const FProfile> build_f_profile(double eps, double R0);

/// l b: root of tan(y) = y/(1-eps) in (0, pi/2).
double solve_lb(double eps);
/// delta with tan(eps + delta) = eps/(1-eps).
double solve_delta(double eps);

struct BranchMargins {
  int branch = 0;
  XReal min_neg_fxx_f, x_min_neg_fxx_f;
  XReal min_W, x_min_W;
  double max_A = 0;
  XReal x_max_A;
};

struct MenguyReport {
  double eps = 0, eta = 0;
  std::vector<BranchMargins> branches;
  XReal margin_fxx;  // min(-f_xx/f) - (1 - eta)
  XReal margin_W;    // min((1-f_x^2)/f^2) - (1 - eta)
  double margin_A = 0;  // 2 eps - max A
  bool pass = false;

  ConstraintLedger to_ledger(const std::string& prefix) const;
  nlohmann::json to_json() const;
};

/// Non-throwing margin computation; x sampled per branch (uniform in lx on
/// branch 1, log-uniform on branch 2, uniform on branch 3) with endpoints.
MenguyReport menguy_margins(const FProfile& f, double eta, int samples_per_branch = 2000);
/// Same, throwing PropertyViolation naming branch and x on any margin <= 0.
MenguyReport verify_menguy_props(const FProfile& f, double eta, int samples_per_branch = 2000);

// ---------------------------------------------------------------------------
// epsilon schedule

struct EpsilonSchedule {
  bool constant = false;
  std::vector<double> eps;  // eps[i] for i = 1..N+1; eps[0] unused
  double transition_lo = 0;  // 1 + r/2
  double transition_hi = 0;  // 1 + 3r/2
  std::vector<double> containment_margin;  // per i: 4r/5 - max distance, normalized

  /// epsilon in force at (generation, s) outside the transition band;
  /// inside the band the larger neighbour is returned.
  double at(int gen, double s) const;
};

/// Paper mode: eps_i = epsilon_seed 2^-i with containment of the transition
/// region in the surgery balls; moderate mode: constant schedule.
/// Throws ScheduleError if containment fails.
EpsilonSchedule build_epsilon_schedule(const ParameterSet& p, const DerivedConstants& dc,
                                       const ModeSettings& mode);

// ---------------------------------------------------------------------------
// whole construction

struct Construction {
  ParameterSet p;
  DerivedConstants dc;
  ModeSettings mode;
  UProfile u;
  GProfile g;
  EpsilonSchedule schedule;

  double R0() const { return mode.mode == Mode::kPaper ? p.R0 : mode.moderate_R0; }
  /// Cached f_eps for the epsilon in force at (gen, s).
  const FProfile& f_at(int gen, double s) const;
  const FProfile& f_for_eps(double eps) const;

 private:
  mutable std::map<double, std::shared_ptr<const FProfile>> f_cache_;
};

/// Builds every profile; throws on structural failures.
std::unique_ptr<Construction> build_construction(const ParameterSet& p, const ModeSettings& mode);

// ---------------------------------------------------------------------------
// admissibility

/// Largest epsilon (bisection in log eps on [1e-12, 0.5]) for which the
/// Menguy margins and the generation-1 gluing inequalities hold with R0.
double epsilon0(const ParameterSet& p, const DerivedConstants& dc, const UProfile& u,
                const GProfile& g, double R0);

/// Ledger entries A1..A11. Never throws; evaluation failures become
/// failing entries.
ConstraintLedger check_admissibility(const ParameterSet& p, const ModeSettings& mode = {});

struct SearchRanges {
  double c[2] = {0.2, 0.32};
  double r_frac[2] = {0.3, 0.8};  // r / r(c)
  double gamma[2] = {0.005, 0.03};
  double log_alpha[2] = {100.0, 4000.0};
  double t1[2] = {5.0, 50.0};
  double eta[2] = {0.01, 0.06};
  int budget = 48;
  unsigned long long seed = 1;

  static SearchRanges from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SearchResult {
  bool feasible = false;
  ParameterSet best;
  ConstraintLedger ledger;
  double required_log_alpha = 0;
  double min_relative_margin = 0;
  int evaluated = 0;
  std::string binding;  // failing entry name when infeasible
};

SearchResult search_parameters(const SearchRanges& ranges, const ParameterSet& base,
                               const ModeSettings& mode = {});

}  // namespace qanc::construction

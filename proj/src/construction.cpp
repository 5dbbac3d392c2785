#include "qanc/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qanc/curvature.hpp"
#include "qanc/errors.hpp"
#include "qanc/json_util.hpp"
#include "qanc/numeric.hpp"
#include "qanc/surgery.hpp"

namespace qanc::construction {

namespace pw = qanc::piecewise;

std::string mode_name(Mode m) { return m == Mode::kPaper ? "paper" : "moderate"; }

Mode parse_mode(const std::string& s) {
  if (s == "paper") return Mode::kPaper;
  if (s == "moderate") return Mode::kModerate;
  throw ConfigError("unknown mode '" + s + "' (expected paper or moderate)");
}

// ---------------------------------------------------------------------------
// u

UValues UProfile::at(const XReal& s) const {
  UValues v;
  const auto& br = profile.branch_at(s);
  v.U = br.eval(s, 0);
  const XReal up = br.eval(s, 1);
  const XReal upp = br.eval(s, 2);
  v.Up = up.to_double();
  v.U_over_s = (v.U / s).to_double();
  v.sUp_over_U = (s * up / v.U).to_double();
  v.s2Upp_over_U = (s * s * upp / v.U).to_double();
  return v;
}

UProfile build_u(const DerivedConstants& dc, double window_rel, bool verify) {
  UProfile u;
  const XReal one(1.0);
  const double s0 = 1.0 + 2.0 * dc.r;
  u.s_junction = XReal(s0);
  u.alpha = XReal::from_log(dc.log_alpha);
  if (!(u.s_junction < u.alpha)) throw ConstructionError("alpha must exceed 1 + 2r");
  const auto sphere = pw::scaled_sine(one, u.s_junction, XReal(1.0 / dc.sqrtK), XReal(dc.sqrtK),
                                      dc.sqrtK * (dc.psi - 1.0));
  u.kappa = (dc.c + 1.0) / (2.0 * (dc.log_alpha - std::log(s0)));
  const auto f1 = pw::affine_t_log_t(u.s_junction, u.alpha, dc.sin_Delta / dc.sqrtK, dc.cos_Delta,
                                     u.kappa, s0);
  const auto line = pw::affine(u.s_junction, u.alpha, XReal(0.0), dc.c);
  u.crossing = pw::find_crossing(f1, line);
  const auto w = pw::smooth_min_relative(f1, line, window_rel);
  u.profile = pw::PiecewiseProfile({sphere}, 1).then(w, 1);
  if (verify) {
    const UConclusion cc = u_conclusion(u, dc);
    if (!cc.pass) throw ConstructionError("u conclusion block fails: " + cc.failure);
  }
  return u;
}

UConclusion u_conclusion(const UProfile& u, const DerivedConstants& dc, int n_points) {
  UConclusion out;
  const double s0 = 1.0 + 2.0 * dc.r;
  const double big = std::numeric_limits<double>::infinity();
  out.min_slope_sphere = big;
  out.max_slope_sphere = -big;
  out.min_slope_w = big;
  out.max_slope_w = -big;
  out.min_ricci_w = big;
  const double g12 = dc.gamma * (1.0 - 2.0 * dc.gamma);

  const auto& sphere_branch = u.profile.branches().front();
  auto visit = [&](const XReal& s, bool sphere) {
    if (sphere) {
      // Evaluated on the spherical branch itself, including its right end.
      const double up = sphere_branch.eval(s, 1).to_double();
      const double curv = (-sphere_branch.eval(s, 2) / sphere_branch.eval(s, 0)).to_double();
      out.min_slope_sphere = std::min(out.min_slope_sphere, up - dc.cos_Delta);
      out.max_slope_sphere = std::max(out.max_slope_sphere, up);
      out.max_sphere_curv_err = std::max(out.max_sphere_curv_err, std::fabs(curv - dc.K));
      return;
    }
    const UValues v = u.at(s);
    {
      out.min_slope_w = std::min(out.min_slope_w, v.Up - dc.cos_Delta);
      out.max_slope_w = std::max(out.max_slope_w, v.Up);
      const double ric = -3.0 * v.s2Upp_over_U + g12;
      if (ric < out.min_ricci_w) {
        out.min_ricci_w = ric;
        out.worst_ricci_s = s;
      }
    }
  };

  const int n_sphere = std::max(16, n_points / 4);
  for (int k = 0; k <= n_sphere; ++k) visit(XReal(1.0 + 2.0 * dc.r * k / n_sphere), true);
  const int n_w = std::max(16, n_points - n_sphere);
  const double span = log_ratio(u.alpha, XReal(s0));
  for (int k = 0; k <= n_w; ++k) visit(XReal(s0) * XReal::from_log(span * k / n_w), false);
  for (const auto& win : u.profile.smoothing_windows()) {
    constexpr int kWin = 64;
    for (int k = 0; k <= kWin; ++k) {
      visit(win.center + win.half_width * XReal(-1.0 + 2.0 * k / kWin), false);
    }
  }

  constexpr double kTol = 1e-12;
  std::ostringstream why;
  if (out.min_slope_sphere < -kTol) why << "U' < cos(Delta) on the spherical branch; ";
  if (out.max_slope_sphere > dc.c + kTol) why << "U' > c on the spherical branch; ";
  if (out.max_sphere_curv_err > 1e-9 * dc.K) why << "-U''/U != K on the spherical branch; ";
  if (out.min_slope_w < -kTol) why << "U' < cos(Delta) on [1+2r, alpha]; ";
  if (out.max_slope_w > (1.0 + 3.0 * dc.c) / 2.0 + kTol) why << "U' > (1+3c)/2 on [1+2r, alpha]; ";
  if (!(out.min_ricci_w > 0.0)) {
    why << "-3U''/U + gamma(1-2gamma)/s^2 <= 0 at s = " << out.worst_ricci_s.str() << "; ";
  }
  out.failure = why.str();
  out.pass = out.failure.empty();
  return out;
}

double required_log_alpha(double c, double r, double gamma) {
  const double K = (1.0 - c * c) / (c * c);
  const double sqrtK = std::sqrt(K);
  const double Delta = sqrtK * (2.0 * r + std::acos(c) / sqrtK);
  const double cosD = std::cos(Delta);
  const double a = std::sin(Delta) / sqrtK;
  const double ls0 = std::log1p(2.0 * r);
  if (!(cosD > 0.0)) return std::numeric_limits<double>::infinity();
  const double g12 = gamma * (1.0 - 2.0 * gamma);
  // Margin of -3 w''/w + gamma(1-2gamma)/s^2 on the f1 branch, in sigma = log s:
  // f1/s = a e/s0 + cosD (1 - e) + kappa (sigma - log s0 - 1 + e), e = s0/s.
  auto margin = [&](double L) {
    const double kappa = (c + 1.0) / (2.0 * (L - ls0));
    constexpr int kN = 20000;
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kN; ++k) {
      const double sig = ls0 + (L - ls0) * k / kN;
      const double e = std::exp(ls0 - sig);
      const double f1s = a * e / (1.0 + 2.0 * r) + cosD * (1.0 - e) +
                         kappa * (sig - ls0 - 1.0 + e);
      if (f1s >= c) break;
      m = std::min(m, -3.0 * kappa / f1s + g12);
    }
    return m;
  };
  const double L3 = ls0 + (c + 1.0) / cosD;
  double lo = L3, hi = std::max(2.0 * L3, 100.0);
  if (margin(lo) > 0.0) return lo;
  while (!(margin(hi) > 0.0)) {
    hi *= 2.0;
    if (hi > 1e7) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// g

GValues GProfile::at(int gen, const XReal& s) const {
  const auto& qp = q_for(gen);
  const auto& br = qp.branch_at(s);
  const XReal qv = br.eval(s, 0);
  const XReal q1 = br.eval(s, 1);
  GValues v;
  v.sq = (s * qv).to_double();
  v.s2gtt = (s * s * (q1 + qv * qv)).to_double();
  v.logG = qp.integral(XReal(1.0 + r / 6.0), s);
  return v;
}

double GProfile::log_t2_over_g2(int gen, const XReal& s) const {
  const double logG = q_for(gen).integral(XReal(1.0 + r / 6.0), s);
  return 2.0 * (dc->log_t(gen) + log_ratio(s, XReal(1.0))) - 2.0 * dc->log_g(gen) - 2.0 * logG;
}

XReal GProfile::t2_over_g2(int gen, const XReal& s) const {
  return XReal::from_log(log_t2_over_g2(gen, s));
}

double GProfile::closure_defect() const {
  const XReal a = XReal::from_log(dc->log_alpha);
  const double head = q.integral(XReal(1.0 + r / 6.0), a);
  const double tail = q.integral(XReal(1.0), XReal(1.0 + r / 6.0));
  return head + tail - gamma * dc->log_alpha;
}

GProfile build_g(const DerivedConstants& dc) {
  if (!(dc.beta >= 0.5 && dc.beta <= 2.0)) {
    throw AdmissibilityError("beta = " + std::to_string(dc.beta) +
                             " outside [1/2, 2]; log alpha below alpha_2(r)");
  }
  GProfile g;
  g.gamma = dc.gamma;
  g.beta = dc.beta;
  g.r = dc.r;
  g.dc = &dc;
  const double r = dc.r;
  const double gb = dc.gamma * dc.beta;
  const XReal s1(1.0), s2(1.0 + r / 6.0), s3(1.0 + 11.0 * r / 6.0), s4(1.0 + 2.0 * r);
  const XReal a = XReal::from_log(dc.log_alpha);
  const auto flat = pw::constant(s2, s3, XReal(0.0));
  const auto up = pw::log_derivative_ramp(s3, s4, 6.0 * gb / ((1.0 + 2.0 * r) * r), 1.0 + 11.0 * r / 6.0, 0.0);
  const auto tail = pw::log_derivative_ramp(s4, a, 0.0, 0.0, gb);
  g.q_first = pw::PiecewiseProfile({pw::constant(s1, s2, XReal(0.0)), flat, up, tail}, 0);
  g.q = pw::PiecewiseProfile(
      {pw::log_derivative_ramp(s1, s2, -6.0 * gb / r, 1.0 + r / 6.0, 0.0), flat, up, tail}, 0);
  return g;
}

// ---------------------------------------------------------------------------
// f_eps

double solve_lb(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  const double a = eps / (1.0 - eps);
  // tan(y)/y - 1 = a; the series branch keeps full relative precision.
  auto h = [a](double y) { return numeric::tan_minus_x(y) / y - a; };
  const double guess = std::sqrt(3.0 * a);
  double lo = std::min(0.5 * guess, 1.0);
  while (h(lo) > 0.0) lo *= 0.5;
  const double hi = std::numbers::pi / 2.0 - 1e-12;
  return numeric::find_root(h, lo, hi, "matching equation tan(lb) = lb/(1-eps)");
}

double solve_delta(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  // atan(eps/(1-eps)) - eps written as atan of a tangent difference:
  // eps/(1-eps) - tan(eps) = eps^2/(1-eps) - (tan(eps) - eps).
  const double a = eps / (1.0 - eps);
  const double num = eps * eps / (1.0 - eps) - numeric::tan_minus_x(eps);
  return std::atan(num / (1.0 + a * std::tan(eps)));
}

namespace {

double y_over_siny_sq_minus1(double y) {
  const double y2 = y * y;
  if (y < 0.05) {
    return y2 * (1.0 / 3 + y2 * (1.0 / 15 + y2 * (2.0 / 189 + y2 * (1.0 / 675 + y2 * 2.0 / 10395))));
  }
  const double q = y / std::sin(y);
  return q * q - 1.0;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }
double tanc(double x) { return x == 0.0 ? 1.0 : std::tan(x) / x; }

}  // namespace

FProfile::FProfile(double eps, double R0) : eps_(eps), R0_(R0) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (!(R0 > 0.0 && R0 < 1.0)) throw DomainError("R0 must lie in (0, 1)");
  y_ = solve_lb(eps);
  delta_ = solve_delta(eps);
  bump_len_ = std::pow(eps, 0.25) - eps;
  // log l multiplies (1 - p) and log(x/b) ~ log l multiplies p, so solve the
  // matching with the exponent as stored: p = fl(1 - eps), 1 - p exact.
  const double p = 1.0 - eps;
  const double log_l = (std::log(std::sin(y_)) + p * std::log(eps / y_) - std::log(R0) -
                        std::log(std::sin(eps + delta_))) /
                       (1.0 - p);
  if (!(log_l > std::log(y_ / eps))) {
    throw ConstructionError("f_eps matching gives b >= eps (eps = " + std::to_string(eps) +
                            ", R0 = " + std::to_string(R0) + ")");
  }
  l_ = XReal::from_log(log_l);
  b_ = XReal(y_) / l_;
  const XReal zero(0.0);
  const XReal e(eps);
  const XReal half_pi(std::numbers::pi / 2.0);
  profile_ = pw::PiecewiseProfile(
      {pw::scaled_sine(zero, b_, XReal(1.0) / l_, l_, 0.0),
       pw::power_law(b_, e, b_, XReal(std::sin(y_)) / l_, p),
       pw::shifted_sine_bump(e, half_pi, XReal(R0), delta_, eps, bump_len_)},
      1, half_pi);
}

int FProfile::branch(const XReal& x) const {
  XReal xm = x;
  if (XReal(std::numbers::pi / 2.0) < x) xm = XReal(std::numbers::pi) - x;
  if (xm <= b_) return 1;
  if (xm <= XReal(eps_)) return 2;
  return 3;
}

FRatios FProfile::ratios(const XReal& x) const {
  if (x.sign() < 0 || XReal(std::numbers::pi) < x) {
    throw DomainError("x = " + x.str() + " outside [0, pi]");
  }
  if (XReal(std::numbers::pi / 2.0) < x) {
    FRatios m = ratios(XReal(std::numbers::pi) - x);
    m.fx_f = -m.fx_f;
    m.fx_f_sinx = -m.fx_f_sinx;
    return m;
  }
  FRatios out;
  out.branch = branch(x);
  const double xd = x.to_double();
  const double eps = eps_;
  switch (out.branch) {
    case 1: {
      const double z = (l_ * x).to_double();
      out.neg_fxx_f = l_ * l_;
      out.W = l_ * l_;
      if (x.is_zero()) {
        // Pole: f_x/f is undefined; callers use fx_f_sinx.
        out.fx_f_sinx = 1.0;
        out.A = 0.0;
        break;
      }
      out.fx_f = l_ * XReal(std::cos(z) / std::sin(z));
      out.A = std::fabs(numeric::one_minus_xcotx(xd) - numeric::one_minus_xcotx(z)) * tanc(xd);
      out.fx_f_sinx = (1.0 - numeric::one_minus_xcotx(z)) * sinc(xd);
      break;
    }
    case 2: {
      out.fx_f = XReal(1.0 - eps) / x;
      out.neg_fxx_f = XReal(eps * (1.0 - eps)) / (x * x);
      const double q = y_over_siny_sq_minus1(y_);
      const double e = std::expm1(2.0 * eps * log_ratio(x, b_));
      const double bracket = q + e * (1.0 + q) + eps * (2.0 - eps);
      out.W = XReal(bracket) / (x * x);
      out.A = std::fabs(numeric::one_minus_xcotx(xd) - eps) * tanc(xd);
      out.fx_f_sinx = (1.0 - eps) * sinc(xd);
      break;
    }
    default: {
      const double z = (xd - eps) / bump_len_;
      const double phi = pw::smoothstep_cutoff(z, 0);
      const double th = xd + delta_ * phi;
      const double th1 = 1.0 + delta_ * pw::smoothstep_cutoff(z, 1) / bump_len_;
      const double th2 = delta_ * pw::smoothstep_cutoff(z, 2) / (bump_len_ * bump_len_);
      const double cot = std::cos(th) / std::sin(th);
      out.fx_f = XReal(cot * th1);
      out.neg_fxx_f = XReal(th1 * th1 - cot * th2);
      const double ct = std::cos(th) * th1;
      out.W = XReal((1.0 - R0_ * R0_ * ct * ct) / (R0_ * R0_ * std::sin(th) * std::sin(th)));
      if (z >= 1.0) {
        out.A = 0.0;
      } else {
        out.A = std::fabs(std::tan(xd) * cot * delta_ * pw::smoothstep_cutoff(z, 1) / bump_len_ -
                          std::sin(delta_ * phi) / (std::cos(xd) * std::sin(th)));
      }
      out.fx_f_sinx = cot * th1 * std::sin(xd);
      break;
    }
  }
  return out;
}

nlohmann::json FProfile::to_json() const {
  return {{"eps", eps_},
          {"R0", R0_},
          {"lb", y_},
          {"l", xreal_to_json(l_)},
          {"b", xreal_to_json(b_)},
          {"delta", delta_},
          {"bump_end", bump_end()},
          {"profile", profile_.to_json()}};
}

std::shared_ptr<const FProfile> build_f_profile(double eps, double R0) {
  return std::make_shared<const FProfile>(eps, R0);
}

// ---------------------------------------------------------------------------
// Menguy margins

MenguyReport menguy_margins(const FProfile& f, double eta, int n) {
  MenguyReport rep;
  rep.eps = f.eps();
  rep.eta = eta;
  const XReal inf = XReal::from_log(1e15);
  std::array<BranchMargins, 3> bm;
  for (int k = 0; k < 3; ++k) {
    bm[k].branch = k + 1;
    bm[k].min_neg_fxx_f = inf;
    bm[k].min_W = inf;
    bm[k].max_A = -1.0;
  }
  auto visit = [&](const XReal& x, int expect) {
    const FRatios fr = f.ratios(x);
    BranchMargins& m = bm[expect - 1];
    if (fr.neg_fxx_f < m.min_neg_fxx_f) {
      m.min_neg_fxx_f = fr.neg_fxx_f;
      m.x_min_neg_fxx_f = x;
    }
    if (fr.W < m.min_W) {
      m.min_W = fr.W;
      m.x_min_W = x;
    }
    if (fr.A > m.max_A) {
      m.max_A = fr.A;
      m.x_max_A = x;
    }
  };
  // Branch 1 in z = l x, including the pole limit.
  for (int k = 0; k <= n; ++k) visit(XReal(f.y() * k / n) / f.l(), 1);
  // Branch 2 log-uniform on (b, eps].
  const double span = log_ratio(XReal(f.eps()), f.b());
  for (int k = 1; k <= n; ++k) visit(f.b() * XReal::from_log(span * k / n), 2);
  // Branch 3: dense on the bump, coarser beyond.
  const double e = f.eps(), e4 = f.bump_end(), h = std::numbers::pi / 2.0;
  for (int k = 1; k <= n; ++k) visit(XReal(e + (e4 - e) * k / n), 3);
  const int n_tail = std::max(16, n / 4);
  for (int k = 1; k <= n_tail; ++k) visit(XReal(e4 + (h - e4) * k / n_tail), 3);

  XReal mn_fxx = inf, mn_W = inf;
  double mx_A = 0.0;
  for (const auto& m : bm) {
    mn_fxx = min(mn_fxx, m.min_neg_fxx_f);
    mn_W = min(mn_W, m.min_W);
    mx_A = std::max(mx_A, m.max_A);
    rep.branches.push_back(m);
  }
  rep.margin_fxx = mn_fxx - XReal(1.0 - eta);
  rep.margin_W = mn_W - XReal(1.0 - eta);
  rep.margin_A = 2.0 * f.eps() - mx_A;
  rep.pass = rep.margin_fxx.sign() > 0 && rep.margin_W.sign() > 0 && rep.margin_A > 0.0;
  return rep;
}

MenguyReport verify_menguy_props(const FProfile& f, double eta, int n) {
  MenguyReport rep = menguy_margins(f, eta, n);
  for (const auto& m : rep.branches) {
    std::ostringstream why;
    if (m.min_neg_fxx_f <= XReal(1.0 - eta)) {
      why << "-f_xx/f < 1-eta on branch " << m.branch << " at x = " << m.x_min_neg_fxx_f;
    } else if (m.min_W <= XReal(1.0 - eta)) {
      why << "(1-f_x^2)/f^2 < 1-eta on branch " << m.branch << " at x = " << m.x_min_W;
    } else if (m.max_A >= 2.0 * f.eps()) {
      why << "A(x) >= 2 eps on branch " << m.branch << " at x = " << m.x_max_A;
    }
    if (!why.str().empty()) throw PropertyViolation(why.str());
  }
  return rep;
}

ConstraintLedger MenguyReport::to_ledger(const std::string& prefix) const {
  ConstraintLedger l;
  XReal mn_fxx = margin_fxx + XReal(1.0 - eta);
  XReal mn_W = margin_W + XReal(1.0 - eta);
  l.add(prefix + "_neg_fxx_f", mn_fxx, ">=", XReal(1.0 - eta));
  l.add(prefix + "_W", mn_W, ">=", XReal(1.0 - eta));
  l.add(prefix + "_A", XReal(2.0 * eps - margin_A), "<", XReal(2.0 * eps));
  return l;
}

nlohmann::json MenguyReport::to_json() const {
  auto bs = nlohmann::json::array();
  for (const auto& m : branches) {
    bs.push_back({{"branch", m.branch},
                  {"min_neg_fxx_f", xreal_to_json(m.min_neg_fxx_f)},
                  {"x_min_neg_fxx_f", xreal_to_json(m.x_min_neg_fxx_f)},
                  {"min_W", xreal_to_json(m.min_W)},
                  {"x_min_W", xreal_to_json(m.x_min_W)},
                  {"max_A", m.max_A},
                  {"x_max_A", xreal_to_json(m.x_max_A)}});
  }
  return {{"eps", eps},
          {"eta", eta},
          {"margin_neg_fxx_f", xreal_to_json(margin_fxx)},
          {"margin_W", xreal_to_json(margin_W)},
          {"margin_A", margin_A},
          {"pass", pass},
          {"branches", bs}};
}

// ---------------------------------------------------------------------------
// schedule

double EpsilonSchedule::at(int gen, double s) const {
  auto eps_i = [&](int i) {
    if (i >= 1 && static_cast<std::size_t>(i) < eps.size()) return eps[i];
    return constant ? eps.back() : eps[1] * std::ldexp(1.0, -(i - 1));
  };
  if (constant) return eps_i(1);
  return s <= transition_hi ? eps_i(gen) : eps_i(gen + 1);
}

EpsilonSchedule build_epsilon_schedule(const ParameterSet& p, const DerivedConstants& dc,
                                       const ModeSettings& mode) {
  EpsilonSchedule sch;
  sch.transition_lo = 1.0 + dc.r / 2.0;
  sch.transition_hi = 1.0 + 1.5 * dc.r;
  const int n = p.generations;
  sch.eps.assign(n + 2, 0.0);
  if (mode.mode == Mode::kModerate) {
    sch.constant = true;
    for (int i = 1; i <= n + 1; ++i) sch.eps[i] = mode.moderate_epsilon;
    return sch;
  }
  for (int i = 1; i <= n + 1; ++i) sch.eps[i] = p.epsilon_seed * std::ldexp(1.0, -i);
  for (int i = 1; i <= n; ++i) {
    const double xe = std::pow(sch.eps[i], 0.25);
    if (xe >= std::numbers::pi / 2.0) throw ScheduleError("eps_i^(1/4) >= pi/2");
    double dmax = 0.0;
    for (double s : {sch.transition_lo, sch.transition_hi}) {
      dmax = std::max(dmax, surgery::ball_membership(dc, s, xe).distance);
    }
    const double margin = 0.8 * dc.r - dmax;
    sch.containment_margin.push_back(margin);
    if (!(margin > 0.0)) {
      throw ScheduleError("transition region of eps_" + std::to_string(i) +
                          " leaves the surgery ball (distance " + std::to_string(dmax) + ")");
    }
  }
  return sch;
}

// ---------------------------------------------------------------------------
// construction

const FProfile& Construction::f_for_eps(double eps) const {
  auto it = f_cache_.find(eps);
  if (it == f_cache_.end()) it = f_cache_.emplace(eps, build_f_profile(eps, R0())).first;
  return *it->second;
}

const FProfile& Construction::f_at(int gen, double s) const {
  return f_for_eps(schedule.at(gen, s));
}

std::unique_ptr<Construction> build_construction(const ParameterSet& p, const ModeSettings& mode) {
  auto c = std::make_unique<Construction>();
  c->p = p;
  c->dc = derive_constants(p);
  c->mode = mode;
  c->u = build_u(c->dc, mode.smoothing_window_rel, true);
  c->g = build_g(c->dc);
  c->g.dc = &c->dc;
  c->schedule = build_epsilon_schedule(p, c->dc, mode);
  return c;
}

// ---------------------------------------------------------------------------
// admissibility

double epsilon0(const ParameterSet& p, const DerivedConstants& dc, const UProfile& u,
                const GProfile& g, double R0) {
  auto ok = [&](double eps) {
    try {
      const FProfile f(eps, R0);
      if (!menguy_margins(f, p.eta, 600).pass) return false;
      return surgery::certify_site_with(dc, u, g, f, f, 1, 256).pass;
    } catch (const Error&) {
      return false;
    }
  };
  double lo = std::log(1e-12), hi = std::log(0.5);
  if (ok(std::exp(hi))) return std::exp(hi);
  if (!ok(std::exp(lo))) return 0.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(std::exp(mid)) ? lo : hi) = mid;
  }
  return std::exp(lo);
}

ConstraintLedger check_admissibility(const ParameterSet& p, const ModeSettings& mode) {
  ConstraintLedger L;
  L.add("A1_c_upper", XReal(p.c), "<", XReal(1.0 / 3.0));
  L.add("A1_c_positive", XReal(p.c), ">", XReal(0.0));
  L.add("A1_gamma_upper", XReal(p.gamma), "<", XReal(0.25));
  L.add("A1_gamma_positive", XReal(p.gamma), ">", XReal(0.0));
  L.add("A1_log_alpha_positive", XReal(p.log_alpha), ">", XReal(0.0));
  L.add("A1_t1_gt_1", XReal(p.t1), ">", XReal(1.0));
  L.add("A1_eta_positive", XReal(p.eta), ">", XReal(0.0));
  L.add("A1_eta_lt_1", XReal(p.eta), "<", XReal(1.0));
  L.add("A1_R0_positive", XReal(p.R0), ">", XReal(0.0));
  L.add("A1_R0_lt_1", XReal(p.R0), "<", XReal(1.0));
  L.add("A1_epsilon_seed_positive", XReal(p.epsilon_seed), ">", XReal(0.0));

  DerivedConstants dc;
  if (!(p.c > 0.0 && p.c < 1.0) || !(p.r > 0.0) || !(p.t1 > 0.0) || !(p.log_alpha > 0.0)) {
    L.add_failure("A2_r_le_rc", "constants undefined for these ranges");
    return L;
  }
  L.add("A2_r_le_rc", XReal(p.r), "<=", XReal(r_bound(p.c)));
  try {
    dc = derive_constants(p);
  } catch (const Error& e) {
    L.add_failure("A3_cosDelta_log_alpha", e.what());
    return L;
  }
  const double s0 = 1.0 + 2.0 * p.r;
  L.add("A3_cosDelta_log_alpha", XReal(dc.cos_Delta * (p.log_alpha - std::log(s0))), ">=",
        XReal(p.c + 1.0));

  std::optional<UProfile> u;
  try {
    u = build_u(dc, mode.smoothing_window_rel, false);
    const UConclusion cc = u_conclusion(*u, dc);
    constexpr double kTol = 1e-12;
    L.add("A4_sphere_slope_lower", XReal(cc.min_slope_sphere + dc.cos_Delta), ">=",
          XReal(dc.cos_Delta - kTol), "round-off allowance 1e-12");
    L.add("A4_sphere_slope_upper", XReal(cc.max_slope_sphere), "<=", XReal(dc.c + kTol),
          "round-off allowance 1e-12");
    L.add("A4_sphere_curvature", XReal(cc.max_sphere_curv_err), "<=", XReal(1e-9 * dc.K),
          "|-U''/U - K| on the spherical branch");
    L.add("A4_w_slope_lower", XReal(cc.min_slope_w + dc.cos_Delta), ">=",
          XReal(dc.cos_Delta - kTol), "round-off allowance 1e-12");
    L.add("A4_w_slope_upper", XReal(cc.max_slope_w), "<=", XReal((1.0 + 3.0 * p.c) / 2.0 + kTol),
          "round-off allowance 1e-12");
    L.add("A4_w_ricci_TT", XReal(cc.min_ricci_w), ">", XReal(0.0),
          "min of -3 s^2 U''/U + gamma(1-2gamma) at s = " + cc.worst_ricci_s.str());
  } catch (const Error& e) {
    L.add_failure("A4_w_branch_inequalities", e.what());
  }

  L.add("A5_beta_lower", XReal(dc.beta), ">=", XReal(0.5));
  L.add("A5_beta_upper", XReal(dc.beta), "<=", XReal(2.0));
  std::optional<GProfile> g;
  try {
    g = build_g(dc);
    g->dc = &dc;
  } catch (const Error&) {
  }

  const double containment = std::pow(p.r * dc.sqrtK / 5.0, 4);
  L.add("A6_epsilon_containment", XReal(p.epsilon_seed), "<", XReal(containment),
        "(r sqrt(K)/5)^4");
  if (u && g) {
    const double e0 = epsilon0(p, dc, *u, *g, p.R0);
    L.add("A6_epsilon_le_eps0", XReal(p.epsilon_seed), "<=", XReal(e0),
          "eps0 certified by bisection with R0 = " + XReal(p.R0).str());
    if (mode.mode == Mode::kModerate) {
      const double e0m = epsilon0(p, dc, *u, *g, mode.moderate_R0);
      L.add("A6_moderate_epsilon_le_eps0", XReal(mode.moderate_epsilon), "<=", XReal(e0m),
            "moderate mode, R0 = " + XReal(mode.moderate_R0).str());
    }
  } else {
    L.add_failure("A6_epsilon_le_eps0", "profiles unavailable");
  }

  const double q = (1.0 + 3.0 * p.c) / 2.0;
  L.add("A7_eta_ricci_XX", XReal(1.0 - p.eta), ">",
        XReal(q * q *
              (1.0 + 2.0 * (1.0 + p.r / 6.0) * p.gamma + p.gamma * (1.0 - 2.0 * p.gamma) / 6.0)));
  L.add("A8_eta_base_cap", XReal(1.0 - p.eta), ">", XReal(p.c * p.c));
  L.add("A9_gamma_ricci_TT",
        XReal(3.0 * dc.K - 24.0 * p.gamma * (1.0 + p.r * p.gamma / 3.0) / p.r), ">", XReal(0.0),
        "3K - 24 gamma (1 + r gamma/3)/r");

  if (u && g) {
    // t^2 Ric(Theta, Theta) is x independent; minimum over generation 1.
    XReal mn = XReal::from_log(1e15);
    XReal at;
    auto visit = [&](const XReal& s) {
      const UValues uv = u->at(s);
      const GValues gv = g->at(1, s);
      const XReal v = g->t2_over_g2(1, s) -
                      XReal(gv.sq * gv.sq + gv.s2gtt + 3.0 * uv.sUp_over_U * gv.sq);
      if (v < mn) {
        mn = v;
        at = s;
      }
    };
    for (int k = 0; k <= 2000; ++k) visit(XReal(1.0 + 2.0 * p.r * k / 2000));
    const double span = log_ratio(u->alpha, XReal(s0));
    for (int k = 0; k <= 4000; ++k) visit(XReal(s0) * XReal::from_log(span * k / 4000));
    const double paper_bound =
        std::exp((2.0 - 2.0 * p.gamma) * dc.log_t1 - 2.0 * p.gamma * p.log_alpha) -
        (4.0 * std::pow(1.0 + p.r / 6.0, 2) * p.gamma * p.gamma +
         12.0 * p.gamma * (1.0 + 2.0 * p.r) * (1.0 + p.r * p.gamma / 3.0) / p.r +
         3.0 * (1.0 + 3.0 * p.c) * (1.0 + p.r / 6.0) * p.gamma / dc.cos_Delta);
    std::ostringstream note;
    note << "direct t^2/g^2, minimum at s = " << at.str()
         << "; sufficient bound with alpha^(2 gamma) evaluates to " << paper_bound;
    L.add("A10_ricci_theta_t1", mn, ">", XReal(0.0), note.str());
  } else {
    L.add_failure("A10_ricci_theta_t1", "profiles unavailable");
  }

  const auto neck = surgery::NeckSpec::make(dc, p.R0);
  const ConstraintLedger neck_ledger = surgery::neck_compatibility(neck);
  for (auto e : neck_ledger.entries()) {
    e.name = "A11_" + e.name;
    if (e.relation == "error") {
      L.add_failure(e.name, e.note);
    } else {
      L.add(e.name, e.achieved, e.relation, e.required, e.note);
    }
  }
  return L;
}

// ---------------------------------------------------------------------------
// search

namespace {

void read_range(const nlohmann::json& j, const char* key, double (&out)[2]) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string("search range '") + key + "' must be [lo, hi]");
  }
  out[0] = v[0].get<double>();
  out[1] = v[1].get<double>();
  if (!(out[0] <= out[1])) throw ConfigError(std::string("search range '") + key + "' is empty");
}

}  // namespace

SearchRanges SearchRanges::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("search ranges must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    static const char* known[] = {"c", "r_frac", "gamma", "log_alpha", "t1", "eta", "budget", "seed"};
    if (std::find(std::begin(known), std::end(known), k) == std::end(known)) {
      throw ConfigError("unknown search key '" + k + "'");
    }
  }
  SearchRanges r;
  read_range(j, "c", r.c);
  read_range(j, "r_frac", r.r_frac);
  read_range(j, "gamma", r.gamma);
  read_range(j, "log_alpha", r.log_alpha);
  read_range(j, "t1", r.t1);
  read_range(j, "eta", r.eta);
  if (j.contains("budget")) {
    if (!j.at("budget").is_number_integer() || j.at("budget").get<int>() < 1) {
      throw ConfigError("search budget must be a positive integer");
    }
    r.budget = j.at("budget").get<int>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0) throw ConfigError("search seed must be a non-negative integer");
    r.seed = j.at("seed").get<unsigned long long>();
  }
  return r;
}

nlohmann::json SearchRanges::to_json() const {
  auto pair = [](const double (&v)[2]) { return nlohmann::json::array({v[0], v[1]}); };
  return {{"c", pair(c)},       {"r_frac", pair(r_frac)}, {"gamma", pair(gamma)},
          {"log_alpha", pair(log_alpha)}, {"t1", pair(t1)}, {"eta", pair(eta)},
          {"budget", budget},   {"seed", seed}};
}

SearchResult search_parameters(const SearchRanges& ranges, const ParameterSet& base,
                               const ModeSettings& mode) {
  SearchResult res;
  std::mt19937_64 rng(ranges.seed);
  auto pick = [&](const double (&v)[2], int k) {
    // First candidate is the range midpoint; later ones are uniform draws.
    if (k == 0) return 0.5 * (v[0] + v[1]);
    return std::uniform_real_distribution<double>(v[0], v[1])(rng);
  };
  double best_score = -std::numeric_limits<double>::infinity();
  std::map<std::string, int> failures;
  for (int k = 0; k < ranges.budget; ++k) {
    ParameterSet p = base;
    p.c = pick(ranges.c, k);
    p.r = pick(ranges.r_frac, k) * r_bound(p.c);
    p.gamma = pick(ranges.gamma, k);
    p.t1 = pick(ranges.t1, k);
    p.eta = pick(ranges.eta, k);
    const double req = required_log_alpha(p.c, p.r, p.gamma);
    p.log_alpha = std::max(ranges.log_alpha[0], 1.2 * req);
    ++res.evaluated;
    if (!(p.log_alpha <= ranges.log_alpha[1])) {
      ++failures["A4_w_ricci_TT"];
      continue;
    }
    const double sk = std::sqrt((1.0 - p.c * p.c) / (p.c * p.c));
    p.epsilon_seed = std::min(base.epsilon_seed, 0.8 * std::pow(p.r * sk / 5.0, 4));
    ConstraintLedger L = check_admissibility(p, mode);
    if (!L.pass()) {
      ++failures[L.first_failure()->name];
      continue;
    }
    const double score = L.min_relative_margin();
    if (score > best_score) {
      best_score = score;
      res.feasible = true;
      res.best = p;
      res.ledger = L;
      res.required_log_alpha = req;
      res.min_relative_margin = score;
    }
  }
  if (!res.feasible) {
    int most = 0;
    for (const auto& [name, n] : failures) {
      if (n > most) {
        most = n;
        res.binding = name;
      }
    }
  }
  return res;
}

}  // namespace qanc::construction

#include "qanc/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qanc/errors.hpp"
#include "qanc/json_util.hpp"

namespace qanc::piecewise {

namespace {

void check_order(int order) {
  if (order < 0 || order > 2) {
    throw UnsupportedError("derivative order " + std::to_string(order) + " not supported");
  }
}

// Quintic Hermite basis on [0, 1] for data at tau = 0 (value, slope, curvature)
// with zero data at tau = 1.
double hermite_left(double p0, double p1, double p2, double t, int order) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  switch (order) {
    case 0:
      return p0 * (1 - 10 * t3 + 15 * t4 - 6 * t5) + p1 * (t - 6 * t3 + 8 * t4 - 3 * t5) +
             p2 * (0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5);
    case 1:
      return p0 * (-30 * t2 + 60 * t3 - 30 * t4) + p1 * (1 - 18 * t2 + 32 * t3 - 15 * t4) +
             p2 * (t - 4.5 * t2 + 6 * t3 - 2.5 * t4);
    default:
      return p0 * (-60 * t + 180 * t2 - 120 * t3) + p1 * (-36 * t + 96 * t2 - 60 * t3) +
             p2 * (1 - 9 * t + 18 * t2 - 10 * t3);
  }
}

}  // namespace

std::string form_name(Form f) {
  switch (f) {
    case Form::kScaledSine: return "scaled_sine";
    case Form::kAffineTLogT: return "affine_t_log_t";
    case Form::kPowerLaw: return "power_law";
    case Form::kShiftedSineBump: return "shifted_sine_bump";
    case Form::kConstant: return "constant";
    case Form::kLogDerivativeRamp: return "log_derivative_ramp";
    case Form::kHermiteBlend: return "hermite_blend";
  }
  return "unknown";
}

double smoothstep_cutoff(double z, int order) {
  if (z <= 0.0) return order == 0 ? 1.0 : 0.0;
  if (z >= 1.0) return 0.0;
  const double z2 = z * z;
  switch (order) {
    case 0: return 1.0 - z2 * z * (10.0 - 15.0 * z + 6.0 * z2);
    case 1: return -30.0 * z2 * (1.0 - z) * (1.0 - z);
    default: return -60.0 * z * (1.0 - z) * (1.0 - 2.0 * z);
  }
}

// ---------------------------------------------------------------------------
// Branch

XReal Branch::eval(const XReal& x, int order) const {
  check_order(order);
  const auto& p = params;
  switch (form) {
    case Form::kScaledSine: {
      // A sin(k x + phase)
      const double arg = (p[1] * x).to_double() + p[2].to_double();
      if (order == 0) return p[0] * XReal(std::sin(arg));
      if (order == 1) return p[0] * p[1] * XReal(std::cos(arg));
      return -(p[0] * p[1] * p[1] * XReal(std::sin(arg)));
    }
    case Form::kAffineTLogT: {
      const double b = p[1].to_double();
      const double kappa = p[2].to_double();
      const XReal& s0 = p[3];
      const double logs = kappa != 0.0 ? log_ratio(x, s0) : 0.0;
      if (order == 0) {
        XReal v = p[0] + XReal(b) * (x - s0);
        if (kappa != 0.0) v += XReal(kappa) * (x * XReal(logs - 1.0) + s0);
        return v;
      }
      if (order == 1) return XReal(b + kappa * logs);
      return XReal(kappa) / x;
    }
    case Form::kPowerLaw: {
      // f0 (x / x0)^e
      const double e = p[2].to_double();
      const XReal ratio = x / p[0];
      if (order == 0) return p[1] * pow(ratio, e);
      if (order == 1) return p[1] * XReal(e) * pow(ratio, e - 1.0) / p[0];
      return p[1] * XReal(e * (e - 1.0)) * pow(ratio, e - 2.0) / (p[0] * p[0]);
    }
    case Form::kShiftedSineBump: {
      const double xd = x.to_double();
      const double delta = p[1].to_double();
      const double a = p[2].to_double();
      const double len = p[3].to_double();
      const double z = (xd - a) / len;
      const double theta = xd + delta * smoothstep_cutoff(z, 0);
      const double th1 = 1.0 + delta * smoothstep_cutoff(z, 1) / len;
      const double th2 = delta * smoothstep_cutoff(z, 2) / (len * len);
      if (order == 0) return p[0] * XReal(std::sin(theta));
      if (order == 1) return p[0] * XReal(std::cos(theta) * th1);
      return p[0] * XReal(-std::sin(theta) * th1 * th1 + std::cos(theta) * th2);
    }
    case Form::kConstant:
      return order == 0 ? p[0] : XReal{};
    case Form::kLogDerivativeRamp: {
      const double a = p[0].to_double();
      const XReal& s0 = p[1];
      const XReal& m = p[2];
      if (order == 0) {
        XReal v = m.is_zero() ? XReal{} : m / x;
        if (a != 0.0) v += XReal(a) * (x - s0);
        return v;
      }
      if (order == 1) {
        XReal v = m.is_zero() ? XReal{} : -(m / (x * x));
        return v + XReal(a);
      }
      return m.is_zero() ? XReal{} : XReal(2.0) * m / (x * x * x);
    }
    case Form::kHermiteBlend: {
      const BlendData& b = *blend;
      const double tau = ((x - b.xl) / scale2(b.half, 1)).to_double();
      const double poly = hermite_left(b.p0, b.p1, b.p2, tau, order);
      const XReal base = b.right.eval(x, order);
      if (order == 0) return base + b.half * XReal(poly);
      if (order == 1) return base + XReal(0.5 * poly);
      return base + XReal(0.25 * poly) / b.half;
    }
  }
  return {};
}

bool Branch::has_integral() const {
  return form == Form::kConstant || form == Form::kLogDerivativeRamp;
}

double Branch::integral(const XReal& a, const XReal& b) const {
  if (form == Form::kConstant) return (params[0] * (b - a)).to_double();
  if (form == Form::kLogDerivativeRamp) {
    const double slope = params[0].to_double();
    double v = 0.0;
    if (slope != 0.0) {
      const double da = (a - params[1]).to_double();
      const double db = (b - params[1]).to_double();
      v += 0.5 * slope * (db * db - da * da);
    }
    if (!params[2].is_zero()) v += params[2].to_double() * log_ratio(b, a);
    return v;
  }
  throw UnsupportedError("no closed-form integral for " + form_name(form));
}

nlohmann::json Branch::to_json() const {
  nlohmann::json j;
  j["form"] = form_name(form);
  j["interval"] = {xreal_to_json(lo), xreal_to_json(hi)};
  auto ps = nlohmann::json::array();
  for (const auto& p : params) ps.push_back(xreal_to_json(p));
  j["params"] = ps;
  if (blend) {
    j["blend"] = {{"left", blend->left.to_json()},
                  {"right", blend->right.to_json()},
                  {"window_left", xreal_to_json(blend->xl)},
                  {"half_width", xreal_to_json(blend->half)},
                  {"hermite_left_data", {blend->p0, blend->p1, blend->p2}}};
  }
  return j;
}

Branch scaled_sine(XReal lo, XReal hi, XReal amplitude, XReal wavenumber, double phase) {
  return {lo, hi, Form::kScaledSine, {amplitude, wavenumber, XReal(phase)}, nullptr};
}

Branch affine_t_log_t(XReal lo, XReal hi, double a, double b, double kappa, double s0) {
  return {lo, hi, Form::kAffineTLogT, {XReal(a), XReal(b), XReal(kappa), XReal(s0)}, nullptr};
}

Branch affine(XReal lo, XReal hi, XReal intercept_at_zero, double slope) {
  return {lo, hi, Form::kAffineTLogT, {intercept_at_zero, XReal(slope), XReal(0.0), XReal(0.0)},
          nullptr};
}

Branch power_law(XReal lo, XReal hi, XReal x0, XReal f0, double p) {
  return {lo, hi, Form::kPowerLaw, {x0, f0, XReal(p)}, nullptr};
}

Branch shifted_sine_bump(XReal lo, XReal hi, XReal amplitude, double delta, double bump_lo,
                         double bump_len) {
  return {lo, hi, Form::kShiftedSineBump,
          {amplitude, XReal(delta), XReal(bump_lo), XReal(bump_len)}, nullptr};
}

Branch constant(XReal lo, XReal hi, XReal value) {
  return {lo, hi, Form::kConstant, {value}, nullptr};
}

Branch log_derivative_ramp(XReal lo, XReal hi, double slope, double s0, double m) {
  return {lo, hi, Form::kLogDerivativeRamp, {XReal(slope), XReal(s0), XReal(m)}, nullptr};
}

// ---------------------------------------------------------------------------
// PiecewiseProfile

PiecewiseProfile::PiecewiseProfile(std::vector<Branch> branches, int continuity_class,
                                   std::optional<XReal> mirror_about)
    : branches_(std::move(branches)), continuity_(continuity_class), mirror_(mirror_about) {
  if (branches_.empty()) throw StructuralError("profile needs at least one branch");
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (!(branches_[i].lo < branches_[i].hi)) {
      throw StructuralError("branch " + std::to_string(i) + " has empty interval");
    }
    if (i > 0 && !(branches_[i].lo == branches_[i - 1].hi)) {
      throw StructuralError("branches " + std::to_string(i - 1) + "," + std::to_string(i) +
                            " do not share an endpoint");
    }
  }
  if (mirror_ && !(branches_.back().hi == *mirror_)) {
    throw StructuralError("mirror point must be the right end of the last branch");
  }
}

XReal PiecewiseProfile::hi() const {
  if (mirror_) return scale2(*mirror_, 1) - lo();
  return branches_.back().hi;
}

bool PiecewiseProfile::contains(const XReal& x) const { return !(x < lo()) && !(hi() < x); }

std::size_t PiecewiseProfile::branch_index(const XReal& x) const {
  // First branch whose hi exceeds x; the last branch owns its right end.
  auto it = std::upper_bound(branches_.begin(), branches_.end(), x,
                             [](const XReal& v, const Branch& b) { return v < b.hi; });
  if (it == branches_.end()) return branches_.size() - 1;
  return static_cast<std::size_t>(it - branches_.begin());
}

XReal PiecewiseProfile::eval(const XReal& x, int order) const {
  check_order(order);
  if (!contains(x)) throw DomainError("point " + x.str() + " outside profile domain");
  if (mirror_ && *mirror_ < x) {
    const XReal v = eval(scale2(*mirror_, 1) - x, order);
    return order == 1 ? -v : v;
  }
  return branches_[branch_index(x)].eval(x, order);
}

double PiecewiseProfile::eval(double x, int order) const { return eval(XReal(x), order).to_double(); }

double PiecewiseProfile::integral(const XReal& a, const XReal& b) const {
  if (mirror_) throw UnsupportedError("integral over mirrored profile");
  double total = 0.0;
  for (const auto& br : branches_) {
    const XReal lo = max(a, br.lo);
    const XReal hi = min(b, br.hi);
    if (!(lo < hi)) continue;
    total += br.integral(lo, hi);
  }
  return b < a ? -integral(b, a) : total;
}

PiecewiseProfile PiecewiseProfile::then(const PiecewiseProfile& tail, int continuity_class) const {
  std::vector<Branch> all = branches_;
  all.insert(all.end(), tail.branches_.begin(), tail.branches_.end());
  PiecewiseProfile out(std::move(all), continuity_class, tail.mirror_);
  out.windows_ = windows_;
  out.windows_.insert(out.windows_.end(), tail.windows_.begin(), tail.windows_.end());
  return out;
}

nlohmann::json PiecewiseProfile::to_json() const {
  nlohmann::json j;
  j["continuity_class"] = continuity_;
  if (mirror_) j["mirror_about"] = xreal_to_json(*mirror_);
  auto bs = nlohmann::json::array();
  for (const auto& b : branches_) bs.push_back(b.to_json());
  j["branches"] = bs;
  auto ws = nlohmann::json::array();
  for (const auto& w : windows_) {
    ws.push_back({{"center", xreal_to_json(w.center)},
                  {"half_width", xreal_to_json(w.half_width)},
                  {"blend", w.blend},
                  {"error_bound", xreal_to_json(w.error_bound)}});
  }
  j["smoothing_windows"] = ws;
  return j;
}

ContinuityReport check_continuity(const PiecewiseProfile& profile, int k, double tol) {
  check_order(k);
  ContinuityReport rep;
  const auto& bs = profile.branches();
  for (std::size_t i = 1; i < bs.size(); ++i) {
    const XReal at = bs[i].lo;
    const XReal value = max(abs(bs[i - 1].eval(at, 0)), abs(bs[i].eval(at, 0)));
    for (int order = 0; order <= k; ++order) {
      const XReal l = bs[i - 1].eval(at, order);
      const XReal r = bs[i].eval(at, order);
      XReal scale = max(abs(l), abs(r));
      // A derivative that vanishes on one side is measured against the
      // natural size |f| / |x|^order instead of round-off on the other.
      if (order > 0 && !at.is_zero()) scale = max(scale, value / pow(abs(at), order));
      const double jump = scale.is_zero() ? 0.0 : (abs(l - r) / scale).to_double();
      rep.jumps.push_back({at, order, jump, jump <= tol});
      rep.max_jump = std::max(rep.max_jump, jump);
      rep.pass = rep.pass && jump <= tol;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// smooth_min

namespace {

struct Interval {
  XReal lo, hi;
  bool logspace;
};

Interval common_interval(const Branch& f1, const Branch& f2) {
  Interval iv{max(f1.lo, f2.lo), min(f1.hi, f2.hi), false};
  if (!(iv.lo < iv.hi)) throw StructuralError("branches have no common interval");
  iv.logspace = iv.lo.sign() > 0 && log_ratio(iv.hi, iv.lo) > std::log(100.0);
  return iv;
}

XReal interp(const Interval& iv, double u) {
  if (iv.logspace) {
    return iv.lo * XReal::from_log(u * log_ratio(iv.hi, iv.lo));
  }
  return iv.lo + XReal(u) * (iv.hi - iv.lo);
}

}  // namespace

XReal find_crossing(const Branch& f1, const Branch& f2) {
  const Interval iv = common_interval(f1, f2);
  constexpr int kSamples = 1024;
  auto diff = [&](const XReal& x) { return (f1.eval(x, 0) - f2.eval(x, 0)).sign(); };
  int changes = 0;
  double ua = 0.0, ub = 1.0;
  int prev = diff(interp(iv, 0.0));
  for (int n = 1; n <= kSamples; ++n) {
    const double u = static_cast<double>(n) / kSamples;
    const int cur = diff(interp(iv, u));
    if (cur != 0 && prev != 0 && cur != prev) {
      ++changes;
      ua = static_cast<double>(n - 1) / kSamples;
      ub = u;
    }
    if (cur != 0) prev = cur;
  }
  if (changes == 0) throw StructuralError("smooth_min: branches do not cross");
  if (changes > 1) {
    throw StructuralError("smooth_min: branches cross " + std::to_string(changes) + " times");
  }
  const int sa = diff(interp(iv, ua));
  for (int it = 0; it < 200 && ub - ua > 1e-17; ++it) {
    const double um = 0.5 * (ua + ub);
    const int sm = diff(interp(iv, um));
    if (sm == 0) return interp(iv, um);
    (sm == sa ? ua : ub) = um;
  }
  return interp(iv, 0.5 * (ua + ub));
}

PiecewiseProfile smooth_min(const Branch& f1, const Branch& f2, const XReal& window) {
  const Interval iv = common_interval(f1, f2);
  const XReal c = find_crossing(f1, f2);
  const XReal h = scale2(window, -1);
  const XReal xl = c - h;
  const XReal xr = c + h;
  if (!(iv.lo < xl) || !(xr < iv.hi)) {
    throw StructuralError("smooth_min: window exceeds common interval");
  }
  const bool f1_left = (f1.eval(xl, 0) - f2.eval(xl, 0)).sign() < 0;
  const Branch& left = f1_left ? f1 : f2;
  const Branch& right = f1_left ? f2 : f1;

  auto bd = std::make_shared<BlendData>();
  bd->left = left;
  bd->right = right;
  bd->xl = xl;
  bd->half = h;
  // tau = (x - xl) / 2h: P(0) = d / h, P'(0) = 2 d', P''(0) = 4 h d''.
  bd->p0 = ((left.eval(xl, 0) - right.eval(xl, 0)) / h).to_double();
  bd->p1 = 2.0 * (left.eval(xl, 1) - right.eval(xl, 1)).to_double();
  bd->p2 = 4.0 * ((left.eval(xl, 2) - right.eval(xl, 2)) * h).to_double();

  Branch lb = left;
  lb.lo = iv.lo;
  lb.hi = xl;
  Branch blend{xl, xr, Form::kHermiteBlend, {}, bd};
  Branch rb = right;
  rb.lo = xr;
  rb.hi = iv.hi;

  PiecewiseProfile out({lb, blend, rb}, 2);

  XReal err;
  constexpr int kErrSamples = 257;
  for (int n = 0; n <= kErrSamples; ++n) {
    const XReal x = xl + XReal(2.0 * n / kErrSamples) * h;
    const XReal m = min(f1.eval(x, 0), f2.eval(x, 0));
    err = max(err, abs(blend.eval(x, 0) - m));
  }
  out.add_window({c, h, "quintic_hermite(min-difference)", err});
  return out;
}

PiecewiseProfile smooth_min_relative(const Branch& f1, const Branch& f2, double rel) {
  const XReal c = find_crossing(f1, f2);
  return smooth_min(f1, f2, abs(c) * XReal(rel));
}

}  // namespace qanc::piecewise

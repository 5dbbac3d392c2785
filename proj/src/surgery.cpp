#include "qanc/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qanc/curvature.hpp"
#include "qanc/errors.hpp"
#include "qanc/json_util.hpp"

namespace qanc::surgery {

using construction::FProfile;
using construction::GProfile;
using construction::UProfile;

namespace {

double hav(double a) {
  const double h = std::sin(0.5 * a);
  return h * h;
}

BoundarySample sample_with(const DerivedConstants& dc, const UProfile& u, const GProfile& g,
                           const FProfile& f, int gen, double bearing) {
  BoundarySample out;
  out.point = boundary_point(dc, bearing);
  out.eps = f.eps();
  const auto& pt = out.point;
  const XReal s(pt.s);
  const auto uv = u.at(s);
  const double U = uv.U.to_double();
  const double up_u = uv.Up / U;
  const double neg_upp_u = -uv.s2Upp_over_U / (pt.s * pt.s);
  const auto fr = f.ratios(XReal(pt.x));
  const double rho = dc.ball_angle;
  out.II_Y = dc.II_ball;
  out.II_Sigma = up_u * pt.cos_xi + std::sin(dc.omega0) / std::sin(rho) * fr.fx_f_sinx / U;
  out.II_Theta = g.at(gen, s).sq / pt.s * pt.cos_xi;
  const XReal U2(U * U);
  const XReal cross(up_u * up_u);
  out.K_int_SS = fr.W / U2 - cross + XReal(out.II_Sigma * out.II_Sigma);
  out.K_int_YS = (fr.neg_fxx_f / U2 - cross) * XReal(pt.cos_xi * pt.cos_xi) +
                 XReal(neg_upp_u * pt.sin_xi * pt.sin_xi + out.II_Y * out.II_Sigma);
  return out;
}

}  // namespace

Membership ball_membership(const DerivedConstants& dc, double s, double x, bool mirror) {
  constexpr double kSlack = 1e-14;
  if (!(s >= 1.0 - kSlack && s <= 1.0 + 2.0 * dc.r + kSlack)) {
    throw DomainError("s = " + std::to_string(s) + " outside the spherical block");
  }
  const double omega = dc.sqrtK * (s - 1.0) + std::acos(dc.c);
  const double dx = mirror ? std::numbers::pi - x : x;
  const double h = hav(omega - dc.omega0) + std::sin(omega) * std::sin(dc.omega0) * hav(dx);
  const double angle = 2.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
  Membership m;
  m.distance = angle / dc.sqrtK;
  m.member = m.distance < 0.8 * dc.r;
  return m;
}

BoundaryPoint boundary_point(const DerivedConstants& dc, double bearing) {
  BoundaryPoint p;
  p.bearing = bearing;
  const double rho = dc.ball_angle;
  const double w0 = dc.omega0;
  // Destination from the centre at distance rho; bearing 0 runs towards
  // larger colatitude.
  const double cw = std::cos(w0) * std::cos(rho) - std::sin(w0) * std::sin(rho) * std::cos(bearing);
  const double sw_sx = std::sin(rho) * std::sin(bearing);
  const double sw_cx = std::sin(rho) * std::cos(w0) * std::cos(bearing) + std::cos(rho) * std::sin(w0);
  p.omega = std::atan2(std::hypot(sw_sx, sw_cx), cw);
  p.x = std::atan2(sw_sx, sw_cx);
  p.s = 1.0 + (p.omega - std::acos(dc.c)) / dc.sqrtK;
  const double sr = std::sin(rho);
  p.cos_xi = (std::cos(w0) * std::sin(p.omega) - std::sin(w0) * std::cos(p.omega) * std::cos(p.x)) / sr;
  p.sin_xi = std::sin(w0) * std::sin(p.x) / sr;
  return p;
}

BoundarySample boundary_sample(const construction::Construction& cons, int gen, double bearing) {
  const BoundaryPoint pt = boundary_point(cons.dc, bearing);
  return sample_with(cons.dc, cons.u, cons.g, cons.f_at(gen, pt.s), gen, bearing);
}

SiteReport certify_site_with(const DerivedConstants& dc, const UProfile& u, const GProfile& g,
                             const FProfile& f_inner, const FProfile& f_outer, int gen,
                             int n_bearings) {
  if (n_bearings < 2) throw DomainError("need at least two bearings");
  SiteReport rep;
  rep.generation = gen;
  rep.eps_inner = f_inner.eps();
  rep.n_bearings = n_bearings;
  rep.sandwich_lo = dc.II_ball;
  rep.sandwich_hi = dc.II_ball + dc.D * rep.eps_inner;
  rep.min_K_int = XReal::from_log(1e15);
  double II_Y_min = std::numeric_limits<double>::infinity(), II_Y_max = -II_Y_min;
  rep.max_II = -std::numeric_limits<double>::infinity();
  const double s_mid = 1.0 + dc.r;
  for (int k = 0; k < n_bearings; ++k) {
    const double bearing = std::numbers::pi * k / (n_bearings - 1);
    const BoundaryPoint pt = boundary_point(dc, bearing);
    const FProfile& f = pt.s <= s_mid ? f_inner : f_outer;
    const BoundarySample bs = sample_with(dc, u, g, f, gen, bearing);
    II_Y_min = std::min(II_Y_min, bs.II_Y);
    II_Y_max = std::max(II_Y_max, bs.II_Y);
    rep.max_II = std::max({rep.max_II, bs.II_Y, bs.II_Sigma});
    rep.II_Theta_max = std::max(rep.II_Theta_max, std::fabs(bs.II_Theta));
    const XReal kmin = min(bs.K_int_SS, bs.K_int_YS);
    if (kmin < rep.min_K_int) {
      rep.min_K_int = kmin;
      rep.worst_bearing = bearing;
    }
  }
  rep.II_Y = II_Y_max;
  rep.II_Y_spread = II_Y_max - II_Y_min;
  rep.sandwich_pass = rep.max_II >= rep.sandwich_lo * (1.0 - 1e-12) && rep.max_II <= rep.sandwich_hi;
  rep.gluing_margin = rep.min_K_int - XReal(rep.max_II * rep.max_II);
  rep.pass = rep.sandwich_pass && rep.gluing_margin.sign() > 0;
  return rep;
}

SiteReport certify_site(const construction::Construction& cons, int gen, int n_bearings) {
  const auto& fi = cons.f_at(gen, 1.0);
  const auto& fo = cons.f_at(gen, 1.0 + 2.0 * cons.dc.r);
  return certify_site_with(cons.dc, cons.u, cons.g, fi, fo, gen, n_bearings);
}

ConstraintLedger SiteReport::to_ledger() const {
  ConstraintLedger l;
  const std::string p = "site" + std::to_string(generation);
  l.add(p + "_II_lower", XReal(max_II), ">=", XReal(sandwich_lo * (1.0 - 1e-12)),
        "sqrt(K) cot(4 sqrt(K) r/5), relative round-off 1e-12");
  l.add(p + "_II_upper", XReal(max_II), "<=", XReal(sandwich_hi), "plus D eps_i");
  l.add(p + "_gluing", min_K_int, ">", XReal(max_II * max_II), "min K_int against max II^2");
  return l;
}

nlohmann::json SiteReport::to_json() const {
  return {{"generation", generation},
          {"eps_inner", eps_inner},
          {"n_bearings", n_bearings},
          {"II_Y", II_Y},
          {"II_Y_spread", II_Y_spread},
          {"max_II", max_II},
          {"sandwich_lo", sandwich_lo},
          {"sandwich_hi", sandwich_hi},
          {"sandwich_pass", sandwich_pass},
          {"min_K_int", xreal_to_json(min_K_int)},
          {"worst_bearing", worst_bearing},
          {"gluing_margin", xreal_to_json(gluing_margin)},
          {"II_Theta_max", II_Theta_max},
          {"pass", pass}};
}

BoundaryLimit boundary_limit_metric(const DerivedConstants& dc, const UProfile& u,
                                    const FProfile& f, int n) {
  BoundaryLimit out;
  out.eps = f.eps();
  out.C = dc.C;
  out.R0 = f.R0();
  const double cot_rho = dc.C / std::sin(dc.ball_angle);
  for (int k = 0; k < n; ++k) {
    const double bearing = std::numbers::pi * k / (n - 1);
    const BoundaryPoint pt = boundary_point(dc, bearing);
    const double U = u.at(XReal(pt.s)).U.to_double();
    const double B = dc.sqrtK * cot_rho * U * f.value(XReal(pt.x)).to_double();
    const double Bstar = f.R0() * dc.C * std::sin(bearing);
    out.sup_deviation = std::max(out.sup_deviation, std::fabs(B - Bstar));
    out.profile_max = std::max(out.profile_max, B);
  }
  out.relative_deviation = out.sup_deviation / (f.R0() * dc.C);
  return out;
}

NeckSpec NeckSpec::make(const DerivedConstants& dc, double R0) {
  NeckSpec s;
  s.R0 = R0;
  s.C = dc.C;
  s.t0 = curvature::core_t0();
  s.r_neck = R0 * dc.C;
  s.R = dc.C;
  s.core_radius = std::cosh(s.t0 / 100.0) / 100.0;
  s.rho_lo = std::max(s.r_neck, std::pow(s.r_neck, 2.0 / 3.0));
  const double slope = std::sinh(s.t0 / 100.0) / 1e4;
  s.rho_hi = std::min(s.R, slope);
  s.R0_bound = std::pow(slope, 1.5) / dc.C;
  return s;
}

nlohmann::json NeckSpec::to_json() const {
  return {{"R0", R0},         {"C", C},           {"t0", t0},
          {"r_neck", r_neck}, {"R", R},           {"core_radius", core_radius},
          {"rho_lo", rho_lo}, {"rho_hi", rho_hi}, {"R0_bound", R0_bound}};
}

ConstraintLedger neck_compatibility(const NeckSpec& spec) {
  ConstraintLedger l;
  l.add("neck_rho_interval", XReal(spec.rho_hi), ">", XReal(spec.rho_lo),
        "max(r, r^(2/3)) < rho < min(R, core end slope)");
  l.add("neck_R0", XReal(spec.R0), "<", XReal(spec.R0_bound));
  l.add("neck_radius_below_core", XReal(spec.r_neck), "<", XReal(spec.core_radius));
  try {
    double mn = std::numeric_limits<double>::infinity();
    constexpr int kN = 200;
    for (int k = 1; k <= kN; ++k) {
      const auto fc = curvature::core_curvature(k == kN ? spec.t0 : spec.t0 * k / kN);
      mn = std::min(mn, *std::min_element(fc.ricci_eigenvalues.begin(), fc.ricci_eigenvalues.end()));
    }
    l.add("neck_core_ricci", XReal(mn), ">", XReal(0.0), "min Ricci eigenvalue on (0, t0]");
  } catch (const Error& e) {
    l.add_failure("neck_core_ricci", e.what());
  }
  return l;
}

BaseCap base_cap_check(const construction::Construction& cons) {
  BaseCap out;
  const auto uv = cons.u.at(XReal(1.0));
  out.II = -uv.sUp_over_U;
  const auto& f = cons.f_at(1, 1.0);
  const auto mr = construction::menguy_margins(f, cons.p.eta, 2000);
  const double eta = cons.p.eta;
  const XReal c2(cons.p.c * cons.p.c);
  out.min_K_int_SS = (mr.margin_W + XReal(1.0 - eta)) / c2;
  out.min_K_int_XS = (mr.margin_fxx + XReal(1.0 - eta)) / c2;
  constexpr int kN = 4001;
  for (int k = 0; k < kN; ++k) {
    const double x = std::numbers::pi * k / (kN - 1);
    const double d = cons.p.c * (f.value(XReal(x)).to_double() - f.R0() * std::sin(x));
    out.profile_deviation = std::max(out.profile_deviation, std::fabs(d));
  }
  const XReal bound = XReal(1.0 - eta) / c2;
  out.ledger.add("base_cap_K_SS", out.min_K_int_SS, ">=", bound, "(1 - eta)/c^2");
  out.ledger.add("base_cap_K_XS", out.min_K_int_XS, ">=", bound, "(1 - eta)/c^2");
  out.ledger.add("base_cap_gluing", bound, ">", XReal(out.II * out.II),
                 "(1 - eta)/c^2 against II^2");
  return out;
}

}  // namespace qanc::surgery

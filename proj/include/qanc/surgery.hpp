#pragma once

// Surgery sites on the spherical blocks. On [t_i, t_i + 2r_i] the (t, x)
// factor is a round 2-sphere of radius 1/sqrt(K) (normalized by t_i) with
// colatitude omega = sqrt(K)(s - 1 + psi) and longitude x; the ball centre
// o_i sits at (s = 1 + r, x = 0).

#include <vector>

#include <json.hpp>

#include "qanc/construction.hpp"
#include "qanc/ledger.hpp"
#include "qanc/params.hpp"

namespace qanc::surgery {

struct Membership {
  double distance = 0;  // normalized geodesic distance to the centre
  bool member = false;  // distance < 4r/5
};

/// Distance from (s, x) to o_i (or to o'_i at x = pi with `mirror`).
/// Throws DomainError for s outside [1, 1+2r].
Membership ball_membership(const DerivedConstants& dc, double s, double x, bool mirror = false);

/// Boundary point of B(o_i) at bearing zeta in [0, pi] (zeta = 0 points
/// towards larger s along x = 0).
struct BoundaryPoint {
  double bearing = 0;
  double s = 0;
  double x = 0;
  double omega = 0;
  double cos_xi = 0;  // N = T cos(xi) + X sin(xi)
  double sin_xi = 0;
};

BoundaryPoint boundary_point(const DerivedConstants& dc, double bearing);

/// Normal and intrinsic curvature data at one boundary point, normalized by
/// t_i (second fundamental form) and t_i^2 (curvatures).
struct BoundarySample {
  BoundaryPoint point;
  double eps = 0;
  double II_Y = 0;
  double II_Sigma = 0;
  double II_Theta = 0;
  XReal K_int_SS;  // K_int(Sigma1, Sigma2)
  XReal K_int_YS;  // K_int(Y, Sigma_j)
};

BoundarySample boundary_sample(const construction::Construction& cons, int gen, double bearing);

struct SiteReport {
  int generation = 0;
  double eps_inner = 0;  // epsilon_i (larger side)
  int n_bearings = 0;
  double II_Y = 0;
  double II_Y_spread = 0;  // max - min over bearings
  double max_II = 0;
  double sandwich_lo = 0;  // sqrt(K) cot(4 sqrt(K) r/5)
  double sandwich_hi = 0;  // sandwich_lo + D eps_i
  bool sandwich_pass = false;
  XReal min_K_int;
  double worst_bearing = 0;
  XReal gluing_margin;  // min K_int - max II^2
  double II_Theta_max = 0;
  bool pass = false;

  ConstraintLedger to_ledger() const;
  nlohmann::json to_json() const;
};

SiteReport certify_site(const construction::Construction& cons, int gen, int n_bearings = 1000);

/// Geometry-only variant used while bisecting epsilon: constant f on the
/// whole boundary.
SiteReport certify_site_with(const DerivedConstants& dc, const construction::UProfile& u,
                             const construction::GProfile& g,
                             const construction::FProfile& f_inner,
                             const construction::FProfile& f_outer, int gen, int n_bearings);

struct BoundaryLimit {
  double eps = 0;
  double C = 0;
  double R0 = 0;
  double sup_deviation = 0;  // sup |B(t) - R0 C sin(t/C)|
  double relative_deviation = 0;  // sup_deviation / (R0 C)
  double profile_max = 0;
};

/// Rescaled induced profile B(t) = sqrt(K) cot(4 sqrt(K) r/5) U f at
/// t = C zeta compared with R0 C sin(t/C).
BoundaryLimit boundary_limit_metric(const DerivedConstants& dc, const construction::UProfile& u,
                                    const construction::FProfile& f, int n = 2001);

struct NeckSpec {
  double R0 = 0;
  double C = 0;
  double t0 = 0;
  double r_neck = 0;  // max of the boundary profile, R0 C
  double R = 0;       // half-period scale, C
  double core_radius = 0;  // cosh(t0/100)/100
  double rho_lo = 0;  // max(r_neck, r_neck^(2/3))
  double rho_hi = 0;  // min(R, sinh(t0/100)/1e4)
  double R0_bound = 0;  // largest R0 with a nonempty rho interval

  static NeckSpec make(const DerivedConstants& dc, double R0);
  nlohmann::json to_json() const;
};

ConstraintLedger neck_compatibility(const NeckSpec& spec);

struct BaseCap {
  double II = 0;             // t1 II_{-T}(X,X) = t1 II_{-T}(Sigma,Sigma)
  XReal min_K_int_SS;        // t1^2 min K_int(Sigma1, Sigma2)
  XReal min_K_int_XS;        // t1^2 min K_int(X, Sigma)
  double profile_deviation = 0;  // sup |c f(x) - c R0 sin x|
  ConstraintLedger ledger;
};

BaseCap base_cap_check(const construction::Construction& cons);

}  // namespace qanc::surgery

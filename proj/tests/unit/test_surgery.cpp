#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qanc/construction.hpp"
#include "qanc/curvature.hpp"
#include "qanc/errors.hpp"
#include "qanc/surgery.hpp"

using namespace qanc;
using namespace qanc::surgery;
using construction::FProfile;
using construction::Mode;

namespace {

const construction::Construction& paper() {
  static const auto c = construction::build_construction(ParameterSet{}, {Mode::kPaper});
  return *c;
}

}  // namespace

TEST_SUITE("surgery") {

TEST_CASE("ball membership: centre, boundary on the meridian, mirror, disjointness") {
  const auto& dc = paper().dc;
  const double r = dc.r;
  const auto centre = ball_membership(dc, 1.0 + r, 0.0);
  CHECK(centre.member);
  CHECK(centre.distance == doctest::Approx(0.0).epsilon(1e-12));
  for (double s : {1.0 + r - 0.8 * r, 1.0 + r + 0.8 * r}) {
    CHECK(ball_membership(dc, s, 0.0).distance == doctest::Approx(0.8 * r).epsilon(1e-12));
  }
  CHECK(ball_membership(dc, 1.0 + 1.75 * r, 0.0).member);
  CHECK_FALSE(ball_membership(dc, 1.0 + 1.85 * r, 0.0).member);

  for (double x : {0.0, 0.01, 0.3}) {
    for (double s : {1.0 + 0.5 * r, 1.0 + r}) {
      const auto a = ball_membership(dc, s, x);
      const auto b = ball_membership(dc, s, std::numbers::pi - x, true);
      CHECK(a.distance == doctest::Approx(b.distance).epsilon(1e-13));
      CHECK(a.member == b.member);
    }
  }
  // o' = (1 + r, pi) seen from o
  CHECK(ball_membership(dc, 1.0 + r, std::numbers::pi).distance > 1.6 * r);
  CHECK_THROWS_AS(ball_membership(dc, 1.5, 0.1), DomainError);
}

TEST_CASE("the transition corner lies inside the ball when eps < (r sqrt K / 5)^4") {
  const auto& dc = paper().dc;
  const double eps = 0.99 * std::pow(dc.r * dc.sqrtK / 5.0, 4);
  const double x = std::pow(eps, 0.25);
  const auto m = ball_membership(dc, 1.0 + 1.5 * dc.r, x);
  CHECK(m.distance <= x / dc.sqrtK + dc.r / 2.0);
  CHECK(m.member);
}

TEST_CASE("boundary points lie on the ball boundary with a unit normal") {
  const auto& dc = paper().dc;
  for (double bearing : {0.0, 0.4, 1.3, 2.2, std::numbers::pi}) {
    const auto p = boundary_point(dc, bearing);
    CHECK(p.cos_xi * p.cos_xi + p.sin_xi * p.sin_xi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ball_membership(dc, p.s, p.x).distance == doctest::Approx(0.8 * dc.r).epsilon(1e-10));
  }
  CHECK(boundary_point(dc, 0.0).s == doctest::Approx(1.0 + 1.8 * dc.r).epsilon(1e-14));
  CHECK(boundary_point(dc, std::numbers::pi).s == doctest::Approx(1.0 + 0.2 * dc.r).epsilon(1e-14));
}

TEST_CASE("site certificate: sandwich, constant II(Y,Y), gluing margin") {
  const auto& cons = paper();
  for (int gen = 1; gen <= cons.p.generations; ++gen) {
    const auto site = certify_site(cons, gen, 1000);
    CAPTURE(gen);
    CHECK(site.pass);
    CHECK(site.sandwich_pass);
    CHECK(site.II_Y == doctest::Approx(cons.dc.II_ball).epsilon(1e-12));
    CHECK(site.II_Y_spread < 1e-12 * site.II_Y);
    CHECK(site.max_II >= site.sandwich_lo * (1.0 - 1e-12));
    CHECK(site.max_II <= site.sandwich_lo + cons.dc.D * site.eps_inner);
    CHECK(site.gluing_margin > XReal(0.0));
    CHECK(site.to_ledger().pass());
  }
}

TEST_CASE("K_int(Sigma, Sigma) respects the lower bound chain") {
  const auto& cons = paper();
  const auto& dc = cons.dc;
  const double eps = cons.schedule.eps[1];
  const double chain = (1.0 - cons.p.eta - std::pow((1.0 + 3.0 * dc.c) / 2.0, 2)) / (dc.c * dc.c) +
                       std::pow(dc.II_ball - dc.D * eps, 2);
  for (int k = 0; k <= 64; ++k) {
    const auto b = boundary_sample(cons, 1, std::numbers::pi * k / 64);
    CHECK(b.K_int_SS.to_double() >= chain);
  }
  // sin-case identity of the bound
  const double q = std::pow((1.0 + 3.0 * dc.c) / 2.0, 2);
  CHECK((1.0 - q) / (dc.c * dc.c) + dc.K / std::pow(std::tan(dc.ball_angle), 2) -
            std::pow(dc.sqrtK / std::tan(dc.ball_angle), 2) ==
        doctest::Approx((1.0 - q) / (dc.c * dc.c)).epsilon(1e-10));
}

TEST_CASE("II(Sigma, Sigma) approaches the umbilic value as eps -> 0") {
  const auto& cons = paper();
  const auto& dc = cons.dc;
  for (double eps : {1e-6, 1e-9, 1e-12}) {
    const FProfile f(eps, 1e-13);
    const auto site = certify_site_with(dc, cons.u, cons.g, f, f, 1, 500);
    CHECK(std::fabs(site.max_II - dc.II_ball) <= dc.D * eps);
  }
}

TEST_CASE("boundary limit profile: maximum R0 C and deviation shrinking along an eps ladder") {
  const auto& cons = paper();
  double prev = INFINITY;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const FProfile f(eps, 0.9);
    const auto b = boundary_limit_metric(cons.dc, cons.u, f);
    CHECK(b.sup_deviation < prev);
    CHECK(b.profile_max == doctest::Approx(0.9 * cons.dc.C).epsilon(2.0 * b.relative_deviation + 1e-12));
    prev = b.sup_deviation;
  }
}

TEST_CASE("neck constants from the core root") {
  long double lo = 1e-3L, hi = 0.1L;
  for (int k = 0; k < 200; ++k) {
    const long double mid = (lo + hi) / 2;
    (std::sin(2 * mid) / 2 - std::cosh(mid / 100) / 100 > 0 ? hi : lo) = mid;
  }
  const double t0 = static_cast<double>((lo + hi) / 2);
  CHECK(curvature::core_t0() == doctest::Approx(t0).epsilon(1e-13));
  CHECK(t0 == doctest::Approx(0.0100007).epsilon(1e-6));

  const auto& dc = paper().dc;
  const auto ok = NeckSpec::make(dc, 1e-13);
  CHECK(ok.rho_hi == doctest::Approx(std::sinh(t0 / 100.0) / 1e4).epsilon(1e-12));
  CHECK(ok.rho_hi == doctest::Approx(1.0e-8).epsilon(1e-3));
  CHECK(ok.rho_lo < ok.rho_hi);
  CHECK(neck_compatibility(ok).pass());
  CHECK(1.0 / (dc.C * dc.C) > 1.0);

  // R0 = 1e-10: rho must exceed (R0 C)^(2/3) ~ 2.15e-7 but stay below ~1e-8
  const auto bad = NeckSpec::make(dc, 1e-10);
  CHECK(bad.r_neck == doctest::Approx(1e-10 * dc.C));
  CHECK(bad.rho_lo == doctest::Approx(std::pow(1e-10 * dc.C, 2.0 / 3.0)));
  CHECK(bad.rho_lo == doctest::Approx(2.15e-7).epsilon(2e-3));
  CHECK(bad.rho_lo > bad.rho_hi);
  const auto L = neck_compatibility(bad);
  CHECK_FALSE(L.pass());
  CHECK_FALSE(L.find("neck_rho_interval")->pass);
  CHECK(ok.R0_bound > 1e-13);
  CHECK(ok.R0_bound < 1e-10);
}

TEST_CASE("base cap: II = -1, intrinsic curvatures at least (1 - eta)/c^2") {
  for (Mode m : {Mode::kModerate, Mode::kPaper}) {
    const auto cons = construction::build_construction(ParameterSet{}, {m});
    const auto cap = base_cap_check(*cons);
    const double bound = (1.0 - cons->p.eta) / (cons->p.c * cons->p.c);
    CHECK(cap.II == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(cap.min_K_int_SS >= XReal(bound));
    CHECK(cap.min_K_int_XS >= XReal(bound));
    CHECK(cap.ledger.pass());
  }
  CHECK(1.0 - 0.04 - 0.09 == doctest::Approx(0.87));
}

}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qanc/construction.hpp"
#include "qanc/errors.hpp"
#include "qanc/surgery.hpp"

using namespace qanc;
using namespace qanc::construction;

namespace {

const DerivedConstants& seed_dc() {
  static const DerivedConstants dc = derive_constants(ParameterSet{});
  return dc;
}

const Construction& seed_construction(Mode m) {
  static const auto paper = build_construction(ParameterSet{}, {Mode::kPaper});
  static const auto moderate = build_construction(ParameterSet{}, {Mode::kModerate});
  return m == Mode::kPaper ? *paper : *moderate;
}

// tan(y) = y/(1-eps) by plain bisection on (0, pi/2).
long double lb_by_bisection(long double eps) {
  long double lo = 1e-9L, hi = 1.5L;
  for (int k = 0; k < 200; ++k) {
    const long double mid = (lo + hi) / 2;
    (std::tan(mid) - mid / (1 - eps) > 0 ? hi : lo) = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST_SUITE("construction") {

TEST_CASE("u starts on the spherical cap with U(1) = U'(1) = c") {
  const auto& dc = seed_dc();
  const auto u = build_u(dc);
  const auto v = u.at(XReal(1.0));
  CHECK(v.U.to_double() == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(v.Up == doctest::Approx(0.3).epsilon(1e-14));
  for (double s : {1.0, 1.01, 1.0 + 2.0 * dc.r - 1e-9}) {
    const auto w = u.at(XReal(s));
    CHECK(-w.s2Upp_over_U / (s * s) == doctest::Approx(dc.K).epsilon(1e-12));
  }
}

TEST_CASE("u at 1 + 2r equals sin(Delta)/sqrt(K)") {
  const auto& dc = seed_dc();
  const double K = (1.0 - 0.09) / 0.09;
  const double Delta = std::sqrt(K) * 2.0 * 0.0247 + std::acos(0.3);
  const double expect = std::sin(Delta) / std::sqrt(K);
  const auto u = build_u(dc);
  const XReal s(1.0 + 2.0 * dc.r);
  CHECK(u.profile.eval(s, 0).to_double() == doctest::Approx(expect).epsilon(1e-13));
  CHECK(u.profile.eval(s, 1).to_double() == doctest::Approx(std::cos(Delta)).epsilon(1e-12));
}

TEST_CASE("u is C1 at every junction and C2 across the smoothing window") {
  const auto u = build_u(seed_dc());
  const auto c1 = piecewise::check_continuity(u.profile, 1, 1e-10);
  CHECK(c1.pass);
  CHECK(c1.max_jump < 1e-10);
  REQUIRE(u.profile.smoothing_windows().size() == 1);
  const auto& w = u.profile.smoothing_windows()[0];
  for (const XReal& edge : {w.center - w.half_width, w.center + w.half_width}) {
    const double left = u.profile.eval(edge * XReal(1.0 - 1e-13), 2).to_double();
    const double right = u.profile.eval(edge * XReal(1.0 + 1e-13), 2).to_double();
    CHECK(std::fabs(left - right) <= 1e-9 * std::max(std::fabs(left), std::fabs(right)) + 1e-15);
  }
}

TEST_CASE("smoothed w keeps cos(Delta) <= w' <= (1+3c)/2 and the Ric(T,T) inequality") {
  const auto& dc = seed_dc();
  const auto u = build_u(dc);
  const auto cc = u_conclusion(u, dc);
  CHECK(cc.pass);
  CHECK(cc.min_slope_sphere >= -1e-12);
  CHECK(cc.max_slope_sphere <= dc.c + 1e-12);
  CHECK(cc.min_slope_w >= -1e-12);
  CHECK(cc.max_slope_w <= (1.0 + 3.0 * dc.c) / 2.0);
  CHECK(cc.min_ricci_w > 0.0);
}

TEST_CASE("required log alpha at the seed set lies in the hundreds") {
  const double la = required_log_alpha(0.3, 0.0247, 0.02);
  CHECK(la > 500.0);
  CHECK(la < 800.0);
  ParameterSet p;
  p.log_alpha = la * 0.9;
  CHECK_FALSE(check_admissibility(p, {Mode::kModerate}).pass());
}

TEST_CASE("g: flat on [1+r/6, 1+11r/6], s q = gamma beta past 1+2r, closes over a period") {
  const auto& dc = seed_dc();
  const auto g = build_g(dc);
  for (int gen : {1, 2}) {
    for (double s : {1.0 + dc.r / 5.0, 1.0 + dc.r, 1.0 + 1.8 * dc.r}) {
      CHECK(g.at(gen, XReal(s)).sq == 0.0);
    }
    for (const XReal& s : {XReal(1.1), XReal(50.0), XReal::from_log(700.0)}) {
      CHECK(g.at(gen, s).sq == doctest::Approx(dc.gamma * dc.beta).epsilon(1e-13));
    }
  }
  CHECK(std::fabs(g.closure_defect()) < 1e-10);
  CHECK(piecewise::check_continuity(g.q, 0).max_jump < 1e-9);
  CHECK(piecewise::check_continuity(g.q_first, 0).max_jump < 1e-9);
  CHECK(dc.beta >= 0.5);
  CHECK(dc.beta <= 2.0);
}

TEST_CASE("normalized profiles are generation independent") {
  const auto& cons = seed_construction(Mode::kPaper);
  for (double s : {1.3, 2.0, 1e5}) {
    const auto a = cons.g.at(2, XReal(s));
    const auto b = cons.g.at(3, XReal(s));
    CHECK(a.sq == b.sq);
    CHECK(a.s2gtt == b.s2gtt);
    CHECK(a.logG == b.logG);
  }
  // t^2/g^2 grows by alpha^(2 - 2 gamma) per generation
  const double d = cons.g.log_t2_over_g2(3, XReal(2.0)) - cons.g.log_t2_over_g2(2, XReal(2.0));
  CHECK(d == doctest::Approx((2.0 - 2.0 * cons.dc.gamma) * cons.dc.log_alpha).epsilon(1e-12));
}

TEST_CASE("f_eps matching constants") {
  const double eps = 1e-3;
  const double y = solve_lb(eps);
  CHECK(y == doctest::Approx(static_cast<double>(lb_by_bisection(eps))).epsilon(1e-13));
  CHECK(y == doctest::Approx(0.05487).epsilon(2e-4));
  CHECK(y == doctest::Approx(std::sqrt(3.0 * eps)).epsilon(2.0 * eps));

  const long double e = eps;
  const double delta_ref = static_cast<double>(std::atan(e / (1 - e)) - e);
  CHECK(solve_delta(eps) == doctest::Approx(delta_ref).epsilon(1e-12));
  CHECK(solve_delta(eps) == doctest::Approx(1.0005e-6).epsilon(3e-4));
  CHECK(std::tan(eps + solve_delta(eps)) == doctest::Approx(eps / (1.0 - eps)).epsilon(1e-14));
  CHECK(solve_delta(1e-9) == doctest::Approx(1e-18).epsilon(1e-8));
}

TEST_CASE("f_eps shape: f(0) = 0, f'(0) = 1, f(pi/2) = R0, symmetric, C1") {
  for (double R0 : {0.9, 1e-13}) {
    const FProfile f(1e-3, R0);
    CHECK(f.value(XReal(0.0)).to_double() == 0.0);
    CHECK(f.profile().eval(XReal(0.0), 1).to_double() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.value(XReal(std::numbers::pi / 2)).to_double() == doctest::Approx(R0).epsilon(1e-15));
    for (double x : {1e-4, 0.01, 0.4, 1.2}) {
      CHECK(f.value(XReal(x)).to_double() ==
            doctest::Approx(f.value(XReal(std::numbers::pi - x)).to_double()).epsilon(1e-14));
    }
    const auto rep = piecewise::check_continuity(f.profile(), 1);
    CHECK(rep.pass);
    CHECK(rep.max_jump < 1e-9);
  }
}

TEST_CASE("f_eps ratios per branch") {
  const double eps = 1e-3;
  const FProfile f(eps, 0.9);
  const double l = f.l().to_double();
  const auto r1 = f.ratios(f.b() * XReal(0.5));
  CHECK(r1.branch == 1);
  CHECK(r1.neg_fxx_f.to_double() == doctest::Approx(l * l).epsilon(1e-12));
  CHECK(l * l >= 1.0 - 0.04);

  const double x2 = 0.5 * (f.b().to_double() + eps);
  const auto r2 = f.ratios(XReal(x2));
  CHECK(r2.branch == 2);
  CHECK(r2.neg_fxx_f.to_double() == doctest::Approx(eps * (1.0 - eps) / (x2 * x2)).epsilon(1e-12));
  CHECK(f.ratios(XReal(eps)).neg_fxx_f.to_double() >= (1.0 - eps) / eps * (1.0 - 1e-12));

  const auto r3 = f.ratios(XReal(std::numbers::pi / 2));
  CHECK(r3.branch == 3);
  CHECK(r3.neg_fxx_f.to_double() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r3.W.to_double() == doctest::Approx(1.0 / (0.9 * 0.9)).epsilon(1e-13));
}

TEST_CASE("Menguy margins are positive at eps = 1e-3 and 2.5e-8") {
  for (double eps : {1e-3, 2.5e-8}) {
    for (double R0 : {0.9, 1e-13}) {
      CAPTURE(eps);
      CAPTURE(R0);
      const auto rep = menguy_margins(FProfile(eps, R0), 0.04);
      CHECK(rep.pass);
      CHECK(rep.margin_fxx > XReal(0.0));
      CHECK(rep.margin_W > XReal(0.0));
      CHECK(rep.margin_A > 0.0);
    }
  }
  CHECK_FALSE(menguy_margins(FProfile(0.05, 0.9), 0.04).pass);
  CHECK_THROWS_AS(verify_menguy_props(FProfile(0.05, 0.9), 0.04), PropertyViolation);
  CHECK_THROWS_AS(FProfile(0.3, 0.9), ConstructionError);
}

TEST_CASE("epsilon schedule: decreasing and contained in the balls") {
  const auto& cons = seed_construction(Mode::kPaper);
  const auto& sch = cons.schedule;
  CHECK_FALSE(sch.constant);
  const double bound = std::pow(cons.dc.r * cons.dc.sqrtK / 5.0, 4);
  for (int i = 1; i <= cons.p.generations; ++i) {
    CHECK(sch.eps[i] < bound);
    CHECK(sch.eps[i + 1] < sch.eps[i]);
    CHECK(sch.containment_margin[i] > 0.0);
    const double x = std::pow(sch.eps[i], 0.25);
    CHECK(surgery::ball_membership(cons.dc, sch.transition_hi, x).member);
    CHECK(surgery::ball_membership(cons.dc, sch.transition_lo, x).member);
  }
  CHECK(sch.at(1, 1.0) == sch.eps[1]);
  CHECK(sch.at(1, 1.1) == sch.eps[2]);
  CHECK(seed_construction(Mode::kModerate).schedule.constant);
}

TEST_CASE("admissibility at the seed set passes in both modes") {
  for (Mode m : {Mode::kModerate, Mode::kPaper}) {
    const auto L = check_admissibility(ParameterSet{}, {m});
    CHECK(L.pass());
    CHECK(L.find("A11_neck_rho_interval") != nullptr);
  }
}

TEST_CASE("admissibility failures name the violated inequality") {
  ParameterSet p;
  p.c = 0.5;
  auto L = check_admissibility(p);
  const auto* e = L.find("A1_c_upper");
  REQUIRE(e);
  CHECK_FALSE(e->pass);
  CHECK(e->margin.to_double() == doctest::Approx(1.0 / 3.0 - 0.5));

  p = ParameterSet{};
  p.gamma = 0.1;
  L = check_admissibility(p);
  REQUIRE(L.find("A9_gamma_ricci_TT"));
  CHECK_FALSE(L.find("A9_gamma_ricci_TT")->pass);

  // 3K = 24 gamma (1 + r gamma/3)/r at gamma ~ K r / 8 ~ 0.0312
  const double K = (1.0 - 0.09) / 0.09;
  for (double gamma : {0.0305, 0.0320}) {
    p.gamma = gamma;
    const bool expect = 3.0 * K - 24.0 * gamma * (1.0 + 0.0247 * gamma / 3.0) / 0.0247 > 0.0;
    CHECK(check_admissibility(p).find("A9_gamma_ricci_TT")->pass == expect);
  }

  // 1 - eta > ((1+3c)/2)^2 (1 + 2(1+r/6) gamma + gamma(1-2gamma)/6): eta < ~0.0585
  for (double eta : {0.058, 0.059}) {
    p = ParameterSet{};
    p.eta = eta;
    const double rhs = 0.9025 * (1.0 + 2.0 * (1.0 + 0.0247 / 6.0) * 0.02 + 0.02 * 0.96 / 6.0);
    CHECK(check_admissibility(p).find("A7_eta_ricci_XX")->pass == (1.0 - eta > rhs));
  }
}

TEST_CASE("degenerate r = r(c) gives cos(Delta) = 0 and fails the log alpha entry") {
  ParameterSet p;
  p.r = r_bound(p.c);
  const auto dc = derive_constants(p);
  CHECK(std::fabs(dc.cos_Delta) < 1e-12);
  const auto L = check_admissibility(p);
  CHECK_FALSE(L.pass());
  REQUIRE(L.find("A3_cosDelta_log_alpha"));
  CHECK_FALSE(L.find("A3_cosDelta_log_alpha")->pass);
}

TEST_CASE("search finds a feasible set and reports the binding log alpha") {
  SearchRanges ranges;
  ranges.budget = 6;
  const auto res = search_parameters(ranges, ParameterSet{}, {Mode::kModerate});
  CHECK(res.feasible);
  CHECK(res.ledger.pass());
  CHECK(res.best.log_alpha >= res.required_log_alpha);

  SearchRanges bad = ranges;
  bad.gamma[0] = 0.2;
  bad.gamma[1] = 0.24;
  const auto none = search_parameters(bad, ParameterSet{}, {Mode::kModerate});
  CHECK_FALSE(none.feasible);
  CHECK_FALSE(none.binding.empty());
}

TEST_CASE("bad profile inputs throw") {
  CHECK_THROWS_AS(FProfile(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(FProfile(1e-3, 1.5), DomainError);
  CHECK_THROWS_AS(parse_mode("fast"), ConfigError);
}

}

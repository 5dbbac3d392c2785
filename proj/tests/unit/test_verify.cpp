#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qanc/construction.hpp"
#include "qanc/errors.hpp"
#include "qanc/fd_oracle.hpp"
#include "qanc/verify.hpp"

using namespace qanc;
using construction::Mode;
using fd::Real;

namespace {

const construction::Construction& moderate() {
  static const auto c = construction::build_construction(ParameterSet{}, {Mode::kModerate});
  return *c;
}

verify::SweepSpec small_spec(Mode m) {
  verify::SweepSpec s;
  s.generations = {1, 2};
  s.s_points = 24;
  s.sphere_points = 12;
  s.x_points = 16;
  s.window_points = 6;
  s.junction_points = 2;
  s.mode.mode = m;
  return s;
}

const std::array<Real, 6> kSteps{1e-3L, 1e-3L, 1e-3L, 1e-3L, 1e-3L, 1e-3L};

}  // namespace

TEST_SUITE("fd_oracle") {

TEST_CASE("flat metric has zero curvature") {
  const auto r = fd::fd_riemann([](const fd::Point&) { return fd::Diagonal{1, 1, 1, 1, 1, 1}; },
                                {0.5L, 0.5L, 0.5L, 0.5L, 0.5L, 0.5L}, kSteps);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      if (a != b) CHECK(std::fabs(r.sectional[a][b]) < 1e-12);
      CHECK(std::fabs(r.ricci[a][b]) < 1e-12);
    }
}

TEST_CASE("round S^2 and hyperbolic plane factors") {
  // coords 0,1: dphi^2 + sin^2 phi dtheta^2; coords 2,3: dt^2 + e^(2t) dy^2
  const auto metric = [](const fd::Point& p) {
    const Real s = std::sin(p[0]);
    const Real e = std::exp(p[2]);
    return fd::Diagonal{1, s * s, 1, e * e, 1, 1};
  };
  const auto r = fd::fd_riemann(metric, {0.9L, 0.1L, 0.3L, 0.2L, 0, 0}, kSteps);
  CHECK(r.sectional[0][1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.sectional[2][3] == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(std::fabs(r.sectional[0][2]) < 1e-8);
  CHECK(std::fabs(r.sectional[1][3]) < 1e-8);
  CHECK(r.ricci[0][0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.ricci[3][3] == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(r.richardson_change < 1e-4);
}

TEST_CASE("degenerate input is rejected") {
  const auto flat = [](const fd::Point&) { return fd::Diagonal{1, 1, 1, 1, 1, 1}; };
  CHECK_THROWS_AS(fd::fd_riemann(flat, {}, {0, 1e-3L, 1e-3L, 1e-3L, 1e-3L, 1e-3L}),
                  OraclePrecisionError);
  const auto bad = [](const fd::Point& p) { return fd::Diagonal{1, p[0], 1, 1, 1, 1}; };
  CHECK_THROWS_AS(fd::fd_riemann(bad, {0, 0, 0, 0, 0, 0}, kSteps), OraclePrecisionError);
}

TEST_CASE("constant-curvature fixture through the full pipeline") {
  CHECK(verify::constant_curvature_fixture_error() < 1e-6);
}

TEST_CASE("closed form agrees with finite differences at seeded points") {
  const auto rep = verify::oracle_crosscheck(moderate(), 100);
  CHECK(rep.points == 100);
  CHECK(rep.max_relative_deviation < 1e-4);
  const auto other = verify::oracle_crosscheck(moderate(), 20, 1e-4, 1e-3, 99);
  CHECK(other.max_relative_deviation < 1e-4);
}

TEST_CASE("a sign error in K(X, Theta) is detected") {
  const auto rep = verify::oracle_crosscheck(moderate(), 30, 1e-4, 1e-3, 7, true);
  CHECK(rep.max_relative_deviation > 1e-2);
}

}

TEST_SUITE("verify") {

TEST_CASE("decay constant from normalized sectionals") {
  const auto& cons = moderate();
  std::vector<curvature::CurvatureSample> v;
  for (double s : {2.0, 20.0, 200.0}) v.push_back(curvature::sample(cons, 1, XReal(s), XReal(1.0)));
  for (auto& smp : v) {
    for (auto* k : {&smp.k.T_X, &smp.k.T_Sigma, &smp.k.T_Theta, &smp.k.X_Sigma, &smp.k.X_Theta,
                    &smp.k.Sigma_Theta, &smp.k.Sigma_Sigma, &smp.k.Theta_Theta})
      *k = XReal(1.0);
  }
  CHECK(verify::fit_decay_constant(v) == 0.0);
  v[1].k.X_Theta = XReal(-0.3);
  v[2].k.T_Theta = XReal(-0.1);
  verify::SamplePoint at;
  CHECK(verify::fit_decay_constant(v, &at) == doctest::Approx(0.3));
  CHECK(at.s.to_double() == doctest::Approx(20.0));
}

TEST_CASE("sweep settings parse strictly") {
  const auto s = verify::SweepSpec::from_json({{"generations", 3}, {"seed", 5}, {"mode", "paper"}});
  CHECK(s.generations == std::vector<int>{1, 2, 3});
  CHECK(s.seed == 5);
  CHECK(s.mode.mode == Mode::kPaper);
  CHECK(verify::SweepSpec::from_json({{"generations", {3, 1, 3}}}).generations ==
        std::vector<int>{1, 3});
  CHECK_THROWS_AS(verify::SweepSpec::from_json({{"s_point", 3}}), ConfigError);
  CHECK_THROWS_AS(verify::SweepSpec::from_json({{"seed", -1}}), ConfigError);
  CHECK_THROWS_AS(verify::SweepSpec::from_json({{"generations", {0}}}), ConfigError);
  CHECK_THROWS_AS(verify::SweepSpec::from_json({{"mode", "fast"}}), ConfigError);
  CHECK_THROWS_AS(verify::SweepSpec::from_json(nlohmann::json::array()), ConfigError);
  const auto round = verify::SweepSpec::from_json(s.to_json());
  CHECK(round.to_json() == s.to_json());
}

TEST_CASE("sweep is deterministic, positive and generation-reducible") {
  const auto spec = small_spec(Mode::kModerate);
  std::ostringstream a, b;
  const auto r1 = verify::sweep(moderate(), spec, &a);
  const auto r2 = verify::sweep(moderate(), spec, &b);
  CHECK(a.str() == b.str());
  CHECK(r1.points == r2.points);
  CHECK(r1.points > 0);
  CHECK(r1.excised > 0);
  for (const auto& m : r1.min_ricci) CHECK(m > XReal(0.0));
  CHECK(r1.K0_sq >= 0.0);
  CHECK(r1.K0_first_form == doctest::Approx(r1.K0_sq * (1.0 + 1.0 / (10.0 * 10.0))));
  CHECK(r1.reduction.pass());
  CHECK(r1.reduction_compared > 0);
  std::istringstream in(a.str());
  std::string line;
  long rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == r1.points + 1);
}

TEST_CASE("full verification passes in both modes") {
  for (Mode m : {Mode::kModerate, Mode::kPaper}) {
    const auto rep = verify::sweep_Q(ParameterSet{}, small_spec(m));
    CHECK(rep.pass);
    CHECK(rep.ledger.pass());
    CHECK(rep.sites.size() == 3);
    const auto j = rep.to_json();
    CHECK(j.contains("ledger"));
  }
}

TEST_CASE("a gamma that is too large fails verification") {
  ParameterSet p;
  p.gamma = 0.1;
  const auto rep = verify::sweep_Q(p, small_spec(Mode::kModerate));
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.ledger.find("A9_gamma_ricci_TT")->pass);
}

TEST_CASE("csv header matches the row layout") {
  const auto h = verify::csv_header();
  CHECK(h.rfind("generation,s,x,excised,K_T_X", 0) == 0);
  std::ostringstream os;
  verify::write_csv_row(os, curvature::sample(moderate(), 1, XReal(3.0), XReal(1.0)));
  const auto row = os.str();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(h.begin(), h.end(), ','));
}

}

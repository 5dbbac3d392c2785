#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qanc/construction.hpp"
#include "qanc/curvature.hpp"
#include "qanc/errors.hpp"

using namespace qanc;
using namespace qanc::curvature;
using construction::Mode;

namespace {

const construction::Construction& moderate() {
  static const auto c = construction::build_construction(ParameterSet{}, {Mode::kModerate});
  return *c;
}

// dt^2 + sin^2 t (dx^2 + sin^2 x dsigma^2) + g0^2 dtheta^2 at t = s (t_1 = 1)
FrameState round_fixture(double t, double x, double g0) {
  construction::UValues u;
  u.U = std::sin(t);
  u.Up = std::cos(t);
  u.U_over_s = std::sin(t) / t;
  u.sUp_over_U = t * std::cos(t) / std::sin(t);
  u.s2Upp_over_U = -t * t;
  construction::GValues g;
  construction::FRatios f;
  f.fx_f = std::cos(x) / std::sin(x);
  f.neg_fxx_f = 1.0;
  f.W = 1.0;
  return frame_state(1, t, x, u, g, XReal(t * t / (g0 * g0)), f);
}

double rel(const XReal& a, const XReal& b) {
  const XReal scale = max(max(abs(a), abs(b)), XReal(1.0));
  return (abs(a - b) / scale).to_double();
}

}  // namespace

TEST_SUITE("curvature") {

TEST_CASE("round S^4 x S^2 fixture") {
  const double g0 = 0.7;
  for (double t : {0.3, 1.0, 2.0}) {
    for (double x : {0.2, 1.0, 2.5}) {
      const auto fs = round_fixture(t, x, g0);
      const auto k = sectional_components(fs);
      const double t2 = t * t;
      CHECK(k.T_X.to_double() == doctest::Approx(t2).epsilon(1e-13));
      CHECK(k.T_Sigma.to_double() == doctest::Approx(t2).epsilon(1e-13));
      CHECK(k.X_Sigma.to_double() == doctest::Approx(t2).epsilon(1e-13));
      CHECK(k.Sigma_Sigma.to_double() == doctest::Approx(t2).epsilon(1e-13));
      CHECK(k.Theta_Theta.to_double() == doctest::Approx(t2 / (g0 * g0)).epsilon(1e-13));
      CHECK(std::fabs(k.T_Theta.to_double()) < 1e-14);
      CHECK(std::fabs(k.X_Theta.to_double()) < 1e-14);
      CHECK(std::fabs(k.Sigma_Theta.to_double()) < 1e-14);
      const auto ric = ricci_diagonal(fs);
      CHECK(ric.T.to_double() == doctest::Approx(3.0 * t2).epsilon(1e-13));
      CHECK(ric.X.to_double() == doctest::Approx(3.0 * t2).epsilon(1e-13));
      CHECK(ric.Sigma.to_double() == doctest::Approx(3.0 * t2).epsilon(1e-13));
      CHECK(ric.Theta.to_double() == doctest::Approx(t2 / (g0 * g0)).epsilon(1e-13));
    }
  }
}

TEST_CASE("non-static f is rejected") {
  auto fs = round_fixture(1.0, 1.0, 1.0);
  fs.ft = 0.1;
  CHECK_THROWS_AS(sectional_components(fs), UnsupportedError);
}

TEST_CASE("Ricci entries equal sums of sectional curvatures") {
  const auto& cons = moderate();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ls(0.0, cons.p.log_alpha);
  std::uniform_real_distribution<double> ux(1e-6, std::numbers::pi - 1e-6);
  for (int k = 0; k < 500; ++k) {
    const int gen = 1 + k % cons.p.generations;
    const XReal s = XReal::from_log(ls(rng));
    const auto fs = frame_state(cons, gen, s, XReal(ux(rng)));
    const auto a = ricci_diagonal(fs);
    const auto b = ricci_from_sectionals(sectional_components(fs));
    CAPTURE(s);
    CHECK(rel(a.T, b.T) < 1e-12);
    CHECK(rel(a.X, b.X) < 1e-12);
    CHECK(rel(a.Sigma, b.Sigma) < 1e-12);
    CHECK(rel(a.Theta, b.Theta) < 1e-12);
  }
}

TEST_CASE("spherical branch: K(T, X) = K s^2") {
  const auto& cons = moderate();
  const double r = cons.dc.r;
  for (double s : {1.0, 1.0 + 0.5 * r, 1.0 + 1.9 * r}) {
    const auto k = sectional_components(frame_state(cons, 1, XReal(s), XReal(1.0)));
    CHECK(k.T_X.to_double() == doctest::Approx(cons.dc.K * s * s).epsilon(1e-10));
  }
}

TEST_CASE("x -> 0 limit is finite and stable below the first junction") {
  const auto& cons = moderate();
  const XReal b0 = cons.f_at(2, 50.0).b();
  const auto a = sample(cons, 2, XReal(50.0), b0 * XReal(1e-3));
  const auto b = sample(cons, 2, XReal(50.0), b0 * XReal(1e-6));
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    CAPTURE(value_names()[i]);
    CHECK(rel(va[i], vb[i]) < 1e-8);
  }
}

TEST_CASE("sample flags points inside the surgery balls") {
  const auto& cons = moderate();
  const double r = cons.dc.r;
  CHECK(sample(cons, 1, XReal(1.0 + r), XReal(0.0)).excised);
  CHECK(sample(cons, 1, XReal(1.0 + r), XReal(std::numbers::pi - 1e-9)).excised);
  CHECK_FALSE(sample(cons, 1, XReal(1.0 + r), XReal(1.5)).excised);
  CHECK_FALSE(sample(cons, 1, XReal(10.0), XReal(0.0)).excised);
}

TEST_CASE("core metric: t0 and positive Ricci on (0, t0]") {
  const double t0 = core_t0();
  CHECK(std::fabs(std::sin(2 * t0) / 2 - std::cosh(t0 / 100) / 100) < 1e-12);
  CHECK(t0 == doctest::Approx(0.0100007).epsilon(1e-6));
  for (int k = 1; k <= 1000; ++k) {
    const double t = t0 * k / 1000.0;
    const auto fc = core_curvature(t);
    CAPTURE(t);
    CHECK(fc.ricci_positive);
    for (double ev : fc.ricci_eigenvalues) CHECK(ev > 0.0);
  }
  CHECK_THROWS_AS(core_curvature(0.0), DomainError);
  CHECK_THROWS_AS(core_curvature(1.01 * t0), DomainError);
}

TEST_CASE("frame curvature of a round S^4 in the left-invariant frame") {
  // a1 = a2 = a3 = sin t: dt^2 + sin^2 t g_S3 has curvature 1
  const WarpFunction w{[](Dual t) { return Dual{std::sin(t.v), std::cos(t.v) * t.d}; },
                       [](Dual t) { return Dual{std::cos(t.v), -std::sin(t.v) * t.d}; }};
  const auto fc = frame_curvature({w, w, w}, 0.8);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) CHECK(fc.sectional[i][j] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(fc.ricci_eigenvalues[i] == doctest::Approx(3.0).epsilon(1e-12));
  }
}

}

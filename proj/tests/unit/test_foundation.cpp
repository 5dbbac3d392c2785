#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qanc/errors.hpp"
#include "qanc/json_util.hpp"
#include "qanc/ledger.hpp"
#include "qanc/numeric.hpp"
#include "qanc/params.hpp"
#include "qanc/xreal.hpp"

using namespace qanc;

TEST_SUITE("foundation") {

TEST_CASE("xreal round trips doubles and carries huge exponents") {
  CHECK(XReal(3.25).to_double() == 3.25);
  CHECK(XReal(-0.1).to_double() == -0.1);
  CHECK(XReal(0.0).is_zero());

  const XReal big = XReal::from_log(800.0 * 5);
  CHECK_FALSE(big.representable());
  CHECK(big.log_abs() == doctest::Approx(4000.0).epsilon(1e-14));
  const XReal back = big * XReal::from_log(-4000.0);
  CHECK(back.to_double() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((big + XReal(1.0)) == big);
  CHECK(XReal::from_log(-3000.0) < XReal(1e-300));
  CHECK(XReal(-2.0) < XReal(1.0));
}

TEST_CASE("xreal pow keeps reciprocal pairs exact at log magnitude 1e9") {
  const XReal x = XReal::from_log(1e9);
  const XReal a = pow(x, 0.37), b = pow(x, -0.37);
  CHECK((a * b).to_double() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(log_ratio(XReal::from_log(1e6), XReal::from_log(1e6 - 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("xreal json uses plain numbers only when representable") {
  CHECK(xreal_to_json(XReal(2.5)).is_number());
  const auto j = xreal_to_json(XReal::from_log(-2000.0, -1));
  REQUIRE(j.is_object());
  CHECK(j.at("sign") == -1);
  CHECK(xreal_from_json(j).log_abs() == doctest::Approx(-2000.0));
}

TEST_CASE("gauss legendre integrates polynomials exactly") {
  for (int n : {10, 20, 30}) {
    const auto& g = numeric::gauss_legendre(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) acc += g.weights[k] * std::pow(g.nodes[k], 8);
    CHECK(acc == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(numeric::gauss_legendre(7), UnsupportedError);
}

TEST_CASE("small-argument helpers match direct evaluation") {
  for (double x : {0.05, 0.3, 1.2}) {
    CHECK(numeric::one_minus_xcotx(x) == doctest::Approx(1.0 - x / std::tan(x)).epsilon(1e-12));
    CHECK(numeric::tan_minus_x(x) == doctest::Approx(std::tan(x) - x).epsilon(1e-12));
  }
  CHECK(numeric::one_minus_xcotx(1e-6) == doctest::Approx(1e-12 / 3.0).epsilon(1e-10));
}

TEST_CASE("find_root brackets and reports missing sign changes") {
  const double r = numeric::find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, "sqrt2");
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(numeric::find_root([](double x) { return x * x + 1.0; }, 0.0, 2.0, "none"),
                  ConstructionError);
}

TEST_CASE("ledger margins, strictness and marginal flag") {
  ConstraintLedger L;
  CHECK(L.add("lower", XReal(2.0), ">", XReal(1.0)).margin.to_double() == 1.0);
  CHECK(L.add("upper", XReal(2.0), "<=", XReal(2.0)).pass);
  CHECK_FALSE(L.add("strict", XReal(2.0), "<", XReal(2.0)).pass);
  CHECK(L.add("thin", XReal(1.0 + 1e-13), ">", XReal(1.0)).marginal);
  CHECK_FALSE(L.pass());
  REQUIRE(L.first_failure());
  CHECK(L.first_failure()->name == "strict");
  CHECK(L.find("lower") != nullptr);
  CHECK_THROWS_AS(L.add("bad", XReal(1.0), "==", XReal(1.0)), UnsupportedError);
  L.add_failure("boom", "evaluation failed");
  CHECK(L.to_json().size() == 5);
}

TEST_CASE("derived constants at c = 0.2 and the seed set") {
  ParameterSet p;
  p.c = 0.2;
  p.r = 0.01;
  CHECK(derive_constants(p).K == doctest::Approx(24.0).epsilon(1e-14));

  const ParameterSet seed;
  const auto dc = derive_constants(seed);
  const double K = (1.0 - 0.09) / 0.09;
  const double sqrtK = std::sqrt(K);
  const double acos_c = std::acos(0.3);
  CHECK(dc.sqrtK * dc.psi == doctest::Approx(1.26610).epsilon(1e-5));
  CHECK(std::cos(dc.sqrtK * dc.psi) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(dc.r_c == doctest::Approx(std::numbers::pi / (4.0 * sqrtK) - acos_c / sqrtK / 2.0));
  CHECK(dc.r_c == doctest::Approx(0.04795).epsilon(1e-3));
  const double Delta = sqrtK * (2.0 * 0.0247) + acos_c;
  CHECK(dc.Delta == doctest::Approx(Delta).epsilon(1e-14));
  CHECK(dc.Delta == doctest::Approx(1.42319).epsilon(1e-5));
  CHECK(dc.cos_Delta == doctest::Approx(std::cos(Delta)).epsilon(1e-12));
  CHECK(dc.Delta < std::numbers::pi / 2.0);
  const double angle = 0.8 * sqrtK * 0.0247;
  CHECK(dc.II_ball == doctest::Approx(sqrtK / std::tan(angle)).epsilon(1e-13));
  CHECK(dc.II_ball == doctest::Approx(50.6).epsilon(2e-3));
  CHECK(dc.D == doctest::Approx(2.0 * (sqrtK / std::tan(angle) + 1.9 / 0.6)).epsilon(1e-13));
  CHECK(dc.D == doctest::Approx(107.5).epsilon(2e-3));
  // (r sqrtK / 5)^4
  CHECK(std::pow(0.0247 * sqrtK / 5.0, 4) == doctest::Approx(6.08e-8).epsilon(2e-3));
}

TEST_CASE("scale invariance of sqrt(K_i)(2 r_i + psi_i)") {
  const auto dc = derive_constants(ParameterSet{});
  for (int i : {1, 2, 7}) {
    const XReal ti = dc.t(i);
    const XReal sqrtKi = sqrt(dc.K_i(i));
    const XReal lhs = sqrtKi * (XReal(2.0 * dc.r) * ti + XReal(dc.psi) * ti);
    CHECK(lhs.to_double() == doctest::Approx(dc.Delta).epsilon(1e-12));
  }
  CHECK(dc.log_t(3) == doctest::Approx(std::log(10.0) + 1600.0));
}

TEST_CASE("derive_constants rejects out-of-range input") {
  ParameterSet p;
  p.c = 1.2;
  CHECK_THROWS_AS(derive_constants(p), DomainError);
  p = ParameterSet{};
  p.r = 0.06;
  CHECK_THROWS_AS(derive_constants(p), AdmissibilityError);
}

TEST_CASE("parameter json round trip and strict reading") {
  const ParameterSet p;
  const auto q = ParameterSet::from_json(p.to_json());
  CHECK(q.log_alpha == p.log_alpha);
  CHECK(q.generations == p.generations);
  auto j = p.to_json();
  j.erase("gamma");
  CHECK_THROWS_AS(ParameterSet::from_json(j), ConfigError);
}

}

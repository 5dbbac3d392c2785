#include "qanc/numeric.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "qanc/errors.hpp"

namespace qanc::numeric {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const std::string& what, int digits) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0)) {
    throw ConstructionError(what + ": no sign change on [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  }
  boost::uintmax_t iters = 200;
  boost::math::tools::eps_tolerance<double> tol(digits);
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (a + b);
}

namespace {

template <int N>
GaussRule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  GaussRule r;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] == 0.0) continue;
    r.nodes.push_back(-x[i]);
    r.weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.nodes.push_back(x[i]);
    r.weights.push_back(w[i]);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static const GaussRule r10 = make_rule<10>();
  static const GaussRule r20 = make_rule<20>();
  static const GaussRule r30 = make_rule<30>();
  switch (n) {
    case 10: return r10;
    case 20: return r20;
    case 30: return r30;
    default: throw UnsupportedError("gauss_legendre: n must be 10, 20 or 30");
  }
}

double one_minus_xcotx(double x) {
  const double x2 = x * x;
  if (std::fabs(x) < 0.1) {
    // x^2/3 + x^4/45 + 2x^6/945 + x^8/4725 + 2x^10/93555
    return x2 * (1.0 / 3 + x2 * (1.0 / 45 + x2 * (2.0 / 945 + x2 * (1.0 / 4725 + x2 * 2.0 / 93555))));
  }
  return 1.0 - x / std::tan(x);
}

double tan_minus_x(double x) {
  const double x2 = x * x;
  if (std::fabs(x) < 0.1) {
    // x^3/3 + 2x^5/15 + 17x^7/315 + 62x^9/2835 + 1382x^11/155925
    return x * x2 *
           (1.0 / 3 + x2 * (2.0 / 15 + x2 * (17.0 / 315 + x2 * (62.0 / 2835 + x2 * 1382.0 / 155925))));
  }
  return std::tan(x) - x;
}

}  // namespace qanc::numeric

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qanc::numeric {

/// Bracketed root of f on [lo, hi] (TOMS 748). Throws ConstructionError
/// naming `what` when f(lo), f(hi) do not bracket a sign change.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const std::string& what, int digits = 52);

/// Gauss-Legendre rule on [-1, 1] with n points (n in {10, 20, 30}).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

/// 1 - x cot x, accurate for small |x|.
double one_minus_xcotx(double x);
/// tan x - x, accurate for small |x|.
double tan_minus_x(double x);

}  // namespace qanc::numeric

#pragma once

// Finite-difference Riemann tensor of a diagonal metric in six coordinates.
// Christoffel symbols come from central differences of the metric, the
// curvature from central differences of the Christoffel symbols, and the
// result is Richardson-extrapolated over two step sizes. Everything runs in
// long double; callers should supply metric samples at that precision.

#include <array>
#include <functional>

namespace qanc::fd {

using Real = long double;
using Point = std::array<Real, 6>;
using Diagonal = std::array<Real, 6>;
using MetricFn = std::function<Diagonal(const Point&)>;

struct OracleResult {
  std::array<std::array<double, 6>, 6> sectional{};  // K(d_a, d_b)
  std::array<std::array<double, 6>, 6> ricci{};      // Ric_ab / sqrt(g_aa g_bb)
  double richardson_change = 0;  // max |R(h/2) - R(h)| over returned entries
};

/// `steps[k]` is the coordinate step for coordinate k at the coarse level.
/// Throws OraclePrecisionError for vanishing steps or non-finite/degenerate
/// metric samples.
OracleResult fd_riemann(const MetricFn& metric, const Point& p, const std::array<Real, 6>& steps);

}  // namespace qanc::fd

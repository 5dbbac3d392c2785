#include "qanc/fd_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "qanc/errors.hpp"

namespace qanc::fd {

namespace {

using Gamma = std::array<std::array<std::array<Real, 6>, 6>, 6>;  // [a][b][c] = Gamma^a_bc

Diagonal checked(const MetricFn& metric, const Point& p) {
  const Diagonal g = metric(p);
  for (Real v : g) {
    if (!std::isfinite(v) || !(v > 0.0)) throw OraclePrecisionError("degenerate metric sample");
  }
  return g;
}

Gamma christoffel(const MetricFn& metric, const Point& p, const std::array<Real, 6>& h) {
  const Diagonal g = checked(metric, p);
  std::array<Diagonal, 6> dg{};  // dg[c][a] = d_c g_aa
  for (int c = 0; c < 6; ++c) {
    Point pp = p, pm = p;
    pp[c] += h[c];
    pm[c] -= h[c];
    const Diagonal gp = checked(metric, pp), gm = checked(metric, pm);
    for (int a = 0; a < 6; ++a) dg[c][a] = (gp[a] - gm[a]) / (2.0 * h[c]);
  }
  Gamma G{};
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      if (a == b) {
        for (int c = 0; c < 6; ++c) {
          G[a][a][c] = 0.5 * dg[c][a] / g[a];
          G[a][c][a] = G[a][a][c];
        }
      } else {
        G[a][b][b] = -0.5 * dg[a][b] / g[a];
      }
    }
  }
  return G;
}

struct Level {
  std::array<std::array<Real, 6>, 6> sectional{};
  std::array<std::array<Real, 6>, 6> ricci{};
};

Level riemann_at(const MetricFn& metric, const Point& p, const std::array<Real, 6>& h) {
  const Diagonal g = checked(metric, p);
  const Gamma G = christoffel(metric, p, h);
  std::array<Gamma, 6> dG{};  // dG[c] = d_c Gamma
  for (int c = 0; c < 6; ++c) {
    Point pp = p, pm = p;
    pp[c] += h[c];
    pm[c] -= h[c];
    const Gamma Gp = christoffel(metric, pp, h), Gm = christoffel(metric, pm, h);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        for (int d = 0; d < 6; ++d) dG[c][a][b][d] = (Gp[a][b][d] - Gm[a][b][d]) / (2.0 * h[c]);
  }
  // R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
  auto R = [&](int a, int b, int c, int d) {
    Real v = dG[c][a][d][b] - dG[d][a][c][b];
    for (int e = 0; e < 6; ++e) v += G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b];
    return v;
  };
  Level out;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) out.sectional[a][b] = a == b ? 0.0 : R(a, b, a, b) / g[b];
  for (int b = 0; b < 6; ++b)
    for (int d = 0; d < 6; ++d) {
      Real v = 0.0;
      for (int a = 0; a < 6; ++a) v += R(a, b, a, d);
      out.ricci[b][d] = v / (std::sqrt(g[b]) * std::sqrt(g[d]));
    }
  return out;
}

}  // namespace

OracleResult fd_riemann(const MetricFn& metric, const Point& p, const std::array<Real, 6>& steps) {
  for (Real h : steps) {
    if (!(h > 0.0) || !std::isfinite(h)) throw OraclePrecisionError("finite-difference step must be positive");
  }
  std::array<Real, 6> half{};
  for (int k = 0; k < 6; ++k) half[k] = 0.5 * steps[k];
  const Level coarse = riemann_at(metric, p, steps);
  const Level fine = riemann_at(metric, p, half);
  OracleResult out;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      out.sectional[a][b] = static_cast<double>((4 * fine.sectional[a][b] - coarse.sectional[a][b]) / 3);
      out.ricci[a][b] = static_cast<double>((4 * fine.ricci[a][b] - coarse.ricci[a][b]) / 3);
      out.richardson_change = std::max(
          {out.richardson_change,
           static_cast<double>(std::fabs(fine.sectional[a][b] - coarse.sectional[a][b])),
           static_cast<double>(std::fabs(fine.ricci[a][b] - coarse.ricci[a][b]))});
    }
  for (const auto& row : out.ricci)
    for (double v : row)
      if (!std::isfinite(v)) throw OraclePrecisionError("non-finite curvature estimate");
  return out;
}

}  // namespace qanc::fd

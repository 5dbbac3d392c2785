#include "qanc/curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qanc/errors.hpp"
#include "qanc/numeric.hpp"
#include "qanc/surgery.hpp"

namespace qanc::curvature {

FrameState frame_state(int gen, const XReal& s, const XReal& x, const construction::UValues& u,
                       const construction::GValues& g, const XReal& t2_over_g2,
                       const construction::FRatios& f) {
  FrameState fs;
  fs.generation = gen;
  fs.s = s;
  fs.x = x;
  fs.U_over_s = u.U_over_s;
  fs.sUp_over_U = u.sUp_over_U;
  fs.s2Upp_over_U = u.s2Upp_over_U;
  fs.fx_f = f.fx_f;
  fs.neg_fxx_f = f.neg_fxx_f;
  fs.W = f.W;
  fs.sq = g.sq;
  fs.s2gtt = g.s2gtt;
  fs.t2_over_g2 = t2_over_g2;
  return fs;
}

FrameState frame_state(const construction::Construction& cons, int gen, const XReal& s,
                       const XReal& x) {
  const auto& f = cons.f_at(gen, s.to_double());
  return frame_state(gen, s, x, cons.u.at(s), cons.g.at(gen, s), cons.g.t2_over_g2(gen, s),
                     f.ratios(x));
}

XReal Sectionals::min() const {
  const auto a = as_array();
  XReal m = a[0];
  for (const auto& v : a) m = qanc::min(m, v);
  return m;
}

std::array<XReal, 8> Sectionals::as_array() const {
  return {T_X, T_Sigma, T_Theta, X_Sigma, X_Theta, Sigma_Theta, Sigma_Sigma, Theta_Theta};
}

std::array<XReal, 4> Ricci::as_array() const { return {T, X, Sigma, Theta}; }

Sectionals sectional_components(const FrameState& fs, bool corrupt_x_theta) {
  if (fs.ft != 0.0) throw UnsupportedError("curvature formulas require f_t = 0");
  Sectionals k;
  const XReal sU2(1.0 / (fs.U_over_s * fs.U_over_s));
  const double sUp2 = fs.sUp_over_U * fs.sUp_over_U;
  k.T_X = XReal(-fs.s2Upp_over_U);
  k.T_Sigma = k.T_X;
  k.T_Theta = XReal(-fs.s2gtt);
  k.X_Sigma = sU2 * fs.neg_fxx_f - XReal(sUp2);
  k.X_Theta = XReal(-fs.sUp_over_U * fs.sq);
  if (corrupt_x_theta) k.X_Theta = -k.X_Theta;
  k.Sigma_Theta = XReal(-fs.sUp_over_U * fs.sq);
  k.Sigma_Sigma = sU2 * fs.W - XReal(sUp2);
  k.Theta_Theta = fs.t2_over_g2 - XReal(fs.sq * fs.sq);
  return k;
}

Ricci ricci_diagonal(const FrameState& fs) {
  if (fs.ft != 0.0) throw UnsupportedError("curvature formulas require f_t = 0");
  Ricci r;
  const XReal sU2(1.0 / (fs.U_over_s * fs.U_over_s));
  const double sUp = fs.sUp_over_U;
  const double mixed = -2.0 * sUp * sUp - 2.0 * sUp * fs.sq - fs.s2Upp_over_U;
  r.T = XReal(-3.0 * fs.s2Upp_over_U - 2.0 * fs.s2gtt);
  r.X = XReal(2.0) * sU2 * fs.neg_fxx_f + XReal(mixed);
  r.Sigma = sU2 * (fs.W + fs.neg_fxx_f) + XReal(mixed);
  r.Theta = fs.t2_over_g2 - XReal(fs.sq * fs.sq + fs.s2gtt + 3.0 * sUp * fs.sq);
  return r;
}

Ricci ricci_from_sectionals(const Sectionals& k) {
  Ricci r;
  const XReal two(2.0), three(3.0);
  r.T = three * k.T_X + two * k.T_Theta;
  r.X = k.T_X + two * k.X_Sigma + two * k.X_Theta;
  r.Sigma = k.T_Sigma + k.X_Sigma + k.Sigma_Sigma + two * k.Sigma_Theta;
  r.Theta = k.T_Theta + three * k.X_Theta + k.Theta_Theta;
  return r;
}

std::array<XReal, 13> CurvatureSample::values() const {
  const auto a = k.as_array();
  const auto b = ric.as_array();
  std::array<XReal, 13> v;
  std::copy(a.begin(), a.end(), v.begin());
  v[8] = k.min();
  std::copy(b.begin(), b.end(), v.begin() + 9);
  return v;
}

const std::array<std::string, 13>& value_names() {
  static const std::array<std::string, 13> names = {
      "K_T_X",         "K_T_Sigma",     "K_T_Theta", "K_X_Sigma", "K_X_Theta",
      "K_Sigma_Theta", "K_Sigma_Sigma", "K_Theta_Theta", "K_min",
      "Ric_T",         "Ric_X",         "Ric_Sigma", "Ric_Theta"};
  return names;
}

CurvatureSample sample(const construction::Construction& cons, int gen, const XReal& s,
                       const XReal& x) {
  CurvatureSample out;
  out.generation = gen;
  out.s = s;
  out.x = x;
  const FrameState fs = frame_state(cons, gen, s, x);
  out.k = sectional_components(fs);
  out.ric = ricci_diagonal(fs);
  const double sd = s.to_double();
  if (sd <= 1.0 + 2.0 * cons.dc.r) {
    const double xd = x.to_double();
    out.excised = surgery::ball_membership(cons.dc, sd, xd).member ||
                  surgery::ball_membership(cons.dc, sd, xd, true).member;
  }
  return out;
}

// ---------------------------------------------------------------------------
// core

namespace {

Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator-(Dual a) { return {-a.v, -a.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator*(double c, Dual a) { return {c * a.v, c * a.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual dsin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
Dual dcos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
Dual dcosh(Dual a) { return {std::cosh(a.v), std::sinh(a.v) * a.d}; }
Dual dsinh(Dual a) { return {std::sinh(a.v), std::cosh(a.v) * a.d}; }

using Arr3 = std::array<std::array<std::array<Dual, 4>, 4>, 4>;

}  // namespace

FrameCurvature frame_curvature(const std::array<WarpFunction, 3>& a, double t) {
  const Dual tt{t, 1.0};
  std::array<Dual, 4> val{}, slope{};
  for (int i = 0; i < 3; ++i) {
    val[i + 1] = a[i].value(tt);
    slope[i + 1] = a[i].slope(tt);
  }
  // c[i][j][k] = g([e_i, e_j], e_k) as functions of t.
  Arr3 c{};
  for (int i = 1; i <= 3; ++i) {
    const Dual h = slope[i] / val[i];
    c[0][i][i] = -h;
    c[i][0][i] = h;
  }
  for (int i = 1; i <= 3; ++i) {
    const int j = i % 3 + 1, k = j % 3 + 1;
    const Dual v = 2.0 * val[k] / (val[i] * val[j]);
    c[i][j][k] = v;
    c[j][i][k] = -v;
  }
  // Gamma[i][j][k] = g(nabla_{e_i} e_j, e_k).
  Arr3 G{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) G[i][j][k] = 0.5 * (c[i][j][k] - c[j][k][i] + c[k][i][j]);

  // R[i][j][k][m] = g(R(e_i, e_j) e_k, e_m).
  auto R = [&](int i, int j, int k, int m) {
    double out = 0.0;
    // nabla_i nabla_j e_k - nabla_j nabla_i e_k
    out += (i == 0 ? G[j][k][m].d : 0.0) - (j == 0 ? G[i][k][m].d : 0.0);
    for (int n = 0; n < 4; ++n) {
      out += G[j][k][n].v * G[i][n][m].v - G[i][k][n].v * G[j][n][m].v;
      out -= c[i][j][n].v * G[n][k][m].v;
    }
    return out;
  };

  FrameCurvature fc;
  fc.t = t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) fc.sectional[i][j] = i == j ? 0.0 : R(i, j, j, i);
  Eigen::Matrix4d ric;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      double v = 0.0;
      for (int i = 0; i < 4; ++i) v += R(i, j, k, i);
      fc.ricci[j][k] = v;
      ric(j, k) = v;
    }
  const Eigen::Matrix4d sym = 0.5 * (ric + ric.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(sym, Eigen::EigenvaluesOnly);
  for (int i = 0; i < 4; ++i) fc.ricci_eigenvalues[i] = es.eigenvalues()(i);
  fc.ricci_positive = fc.ricci_eigenvalues[0] > 0.0;
  return fc;
}

double core_t0() {
  static const double t0 = numeric::find_root(
      [](double t) { return 0.5 * std::sin(2.0 * t) - std::cosh(t / 100.0) / 100.0; }, 1e-3, 0.1,
      "core end t0");
  return t0;
}

FrameCurvature core_curvature(double t) {
  const double t0 = core_t0();
  if (!(t > 0.0 && t <= t0)) throw DomainError("core parameter outside (0, t0]");
  const WarpFunction a1{[](Dual s) { return dsin(s) * dcos(s); },
                        [](Dual s) { return dcos(2.0 * s); }};
  const WarpFunction a2{[](Dual s) { return 0.01 * dcosh(0.01 * s); },
                        [](Dual s) { return 1e-4 * dsinh(0.01 * s); }};
  return frame_curvature({a1, a2, a2}, t);
}

}  // namespace qanc::curvature

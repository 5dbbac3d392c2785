#pragma once

// Curvature of ds^2 = dt^2 + u^2 (dx^2 + f^2 dsigma^2) + g^2 dtheta^2 in the
// orthonormal frame T, X, Sigma_1, Sigma_2, Theta_1, Theta_2, valid where
// f_t = 0. Every value is normalized by t^2.

#include <array>
#include <string>
#include <vector>

#include "qanc/construction.hpp"
#include "qanc/xreal.hpp"

namespace qanc::curvature {

struct FrameState {
  int generation = 1;
  XReal s;
  XReal x;
  double U_over_s = 0;
  double sUp_over_U = 0;
  double s2Upp_over_U = 0;
  XReal fx_f;
  XReal neg_fxx_f;
  XReal W;  // (1 - f_x^2)/f^2
  double ft = 0;
  double sq = 0;     // t g_t/g
  double s2gtt = 0;  // t^2 g_tt/g
  XReal t2_over_g2;
};

FrameState frame_state(const construction::Construction& cons, int gen, const XReal& s,
                       const XReal& x);
FrameState frame_state(int gen, const XReal& s, const XReal& x, const construction::UValues& u,
                       const construction::GValues& g, const XReal& t2_over_g2,
                       const construction::FRatios& f);

struct Sectionals {
  XReal T_X;  // = K(T, Sigma_j)
  XReal T_Sigma;
  XReal T_Theta;
  XReal X_Sigma;
  XReal X_Theta;  // = K(Sigma_j, Theta_k)
  XReal Sigma_Theta;
  XReal Sigma_Sigma;
  XReal Theta_Theta;

  XReal min() const;
  std::array<XReal, 8> as_array() const;
};

struct Ricci {
  XReal T;
  XReal X;
  XReal Sigma;
  XReal Theta;

  std::array<XReal, 4> as_array() const;
};

/// Throws UnsupportedError when fs.ft != 0. `corrupt_x_theta` flips the sign
/// of K(X, Theta) (used only to exercise the oracle comparison).
Sectionals sectional_components(const FrameState& fs, bool corrupt_x_theta = false);
Ricci ricci_diagonal(const FrameState& fs);
/// Ricci entries re-assembled from sectional components over the frame.
Ricci ricci_from_sectionals(const Sectionals& k);

struct CurvatureSample {
  int generation = 1;
  XReal s;
  XReal x;
  Sectionals k;
  Ricci ric;
  bool excised = false;

  /// 8 sectionals, their minimum, 4 Ricci entries.
  std::array<XReal, 13> values() const;
};

const std::array<std::string, 13>& value_names();

CurvatureSample sample(const construction::Construction& cons, int gen, const XReal& s,
                       const XReal& x);

// ---------------------------------------------------------------------------
// core metric dt^2 + a1^2 s1^2 + a2^2 s2^2 + a3^2 s3^2 on (0, t0] x S^3 with a
// left-invariant coframe dual to X1, X2, X3, [X1,X2] = 2X3 (cyclic).

/// First-order dual number for t-derivatives of frame coefficients.
struct Dual {
  double v = 0;
  double d = 0;
};

struct WarpFunction {
  Dual (*value)(Dual t);
  Dual (*slope)(Dual t);  // derivative of value, as a Dual in t
};

struct FrameCurvature {
  double t = 0;
  std::array<std::array<double, 4>, 4> sectional{};  // K(e_i, e_j)
  std::array<std::array<double, 4>, 4> ricci{};
  std::array<double, 4> ricci_eigenvalues{};
  bool ricci_positive = false;
};

FrameCurvature frame_curvature(const std::array<WarpFunction, 3>& a, double t);

/// Root of sin(2t)/2 = cosh(t/100)/100 in (0, 0.1).
double core_t0();
/// Core metric: a1 = sin t cos t, a2 = a3 = cosh(t/100)/100. Throws
/// DomainError outside (0, t0].
FrameCurvature core_curvature(double t);

}  // namespace qanc::curvature

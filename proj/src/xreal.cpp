#include "qanc/xreal.hpp"

#include <cfloat>
#include <cstdio>
#include <limits>
#include <ostream>

namespace qanc {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
// Beyond this exponent gap the smaller addend is below half an ulp.
constexpr std::int64_t kAddCutoff = 110;

}  // namespace

XReal::XReal(double v) : mant_(v), exp_(0) {
  if (!std::isfinite(v)) {
    // Infinite/NaN inputs are a caller bug; keep them visible.
    mant_ = v;
    return;
  }
  normalize();
}

void XReal::normalize() {
  if (mant_ == 0.0 || !std::isfinite(mant_)) {
    if (mant_ == 0.0) exp_ = 0;
    return;
  }
  int k = 0;
  mant_ = std::frexp(mant_, &k);
  exp_ += k;
}

XReal XReal::from_parts(double mantissa, std::int64_t exponent) {
  XReal r;
  r.mant_ = mantissa;
  r.exp_ = exponent;
  r.normalize();
  return r;
}

XReal XReal::from_log(double log_abs, int sign) {
  if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return {};
  const double e2 = std::floor(log_abs / kLn2);
  const double frac = log_abs - e2 * kLn2;
  return from_parts(sign * std::exp(frac), static_cast<std::int64_t>(e2));
}

double XReal::log_abs() const {
  if (mant_ == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::fabs(mant_)) + static_cast<double>(exp_) * kLn2;
}

double XReal::log10_abs() const { return log_abs() / std::log(10.0); }

double XReal::to_double() const {
  if (mant_ == 0.0) return 0.0;
  if (exp_ > DBL_MAX_EXP) return mant_ > 0 ? HUGE_VAL : -HUGE_VAL;
  if (exp_ < DBL_MIN_EXP - DBL_MANT_DIG) return 0.0;
  return std::ldexp(mant_, static_cast<int>(exp_));
}

bool XReal::representable() const {
  if (mant_ == 0.0) return true;
  return exp_ <= DBL_MAX_EXP && exp_ >= DBL_MIN_EXP;
}

XReal XReal::operator-() const {
  XReal r = *this;
  r.mant_ = -r.mant_;
  return r;
}

XReal& XReal::operator+=(const XReal& o) {
  if (o.mant_ == 0.0) return *this;
  if (mant_ == 0.0) return *this = o;
  const std::int64_t gap = exp_ - o.exp_;
  if (gap > kAddCutoff) return *this;
  if (gap < -kAddCutoff) return *this = o;
  if (gap >= 0) {
    mant_ += std::ldexp(o.mant_, static_cast<int>(-gap));
  } else {
    mant_ = o.mant_ + std::ldexp(mant_, static_cast<int>(gap));
    exp_ = o.exp_;
  }
  normalize();
  return *this;
}

XReal& XReal::operator-=(const XReal& o) { return *this += -o; }

XReal& XReal::operator*=(const XReal& o) {
  mant_ *= o.mant_;
  exp_ += o.exp_;
  normalize();
  return *this;
}

XReal& XReal::operator/=(const XReal& o) {
  mant_ /= o.mant_;
  exp_ -= o.exp_;
  normalize();
  return *this;
}

bool operator<(const XReal& a, const XReal& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa < sb;
  if (sa == 0) return false;
  if (a.exp_ != b.exp_) return sa > 0 ? a.exp_ < b.exp_ : a.exp_ > b.exp_;
  return a.mant_ < b.mant_;
}

std::string XReal::str() const {
  if (representable()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", to_double());
    return buf;
  }
  const double l10 = log10_abs();
  const double e10 = std::floor(l10);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s%.15fe%+.0f", sign() < 0 ? "-" : "",
                std::pow(10.0, l10 - e10), e10);
  return buf;
}

XReal abs(const XReal& x) { return x.sign() < 0 ? -x : x; }

XReal sqrt(const XReal& x) {
  if (x.sign() <= 0) return x.is_zero() ? XReal{} : XReal(std::nan(""));
  std::int64_t e = x.exponent();
  double m = x.mantissa();
  if (e % 2 != 0) {
    m *= 2.0;
    e -= 1;
  }
  return XReal::from_parts(std::sqrt(m), e / 2);
}

XReal pow(const XReal& x, double p) {
  if (x.is_zero()) return p > 0 ? XReal{} : XReal(HUGE_VAL);
  if (x.sign() < 0) return XReal(std::nan(""));
  // x^p = m^p * 2^(e p); split e*p into integer + fraction exactly.
  const double e = static_cast<double>(x.exponent());
  const double hi = e * p;
  const double lo = std::fma(e, p, -hi);
  const double n = std::floor(hi);
  const double frac = (hi - n) + lo;
  const double mp = std::pow(x.mantissa(), p) * std::exp2(frac);
  return XReal::from_parts(mp, static_cast<std::int64_t>(n));
}

XReal min(const XReal& a, const XReal& b) { return b < a ? b : a; }
XReal max(const XReal& a, const XReal& b) { return a < b ? b : a; }

XReal scale2(const XReal& x, std::int64_t k) {
  return XReal::from_parts(x.mantissa(), x.exponent() + k);
}

double log_ratio(const XReal& a, const XReal& b) {
  return std::log(std::fabs(a.mantissa() / b.mantissa())) +
         static_cast<double>(a.exponent() - b.exponent()) * kLn2;
}

std::ostream& operator<<(std::ostream& os, const XReal& x) { return os << x.str(); }

}  // namespace qanc

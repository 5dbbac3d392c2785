#pragma once

// Extended-range real number: value = mantissa * 2^exponent with a 64-bit
// exponent. Used wherever quantities leave the binary64 range (alpha^i,
// the f_eps inner constants at eps near 1e-8, t^2/g^2).

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace qanc {

class XReal {
 public:
  constexpr XReal() = default;
  XReal(double v);  // NOLINT(google-explicit-constructor)

  /// Builds sign * exp(log_abs).
  static XReal from_log(double log_abs, int sign = 1);
  /// Builds mantissa * 2^exponent and normalizes.
  static XReal from_parts(double mantissa, std::int64_t exponent);

  int sign() const { return mant_ > 0 ? 1 : (mant_ < 0 ? -1 : 0); }
  bool is_zero() const { return mant_ == 0.0; }
  /// Natural log of |x|; -inf for zero.
  double log_abs() const;
  double log10_abs() const;
  double mantissa() const { return mant_; }
  std::int64_t exponent() const { return exp_; }

  /// Converts to double; saturates to +-inf or 0 outside the binary64 range.
  double to_double() const;
  /// True when to_double() is finite and not flushed to zero.
  bool representable() const;

  XReal operator-() const;
  XReal& operator+=(const XReal& o);
  XReal& operator-=(const XReal& o);
  XReal& operator*=(const XReal& o);
  XReal& operator/=(const XReal& o);

  friend XReal operator+(XReal a, const XReal& b) { return a += b; }
  friend XReal operator-(XReal a, const XReal& b) { return a -= b; }
  friend XReal operator*(XReal a, const XReal& b) { return a *= b; }
  friend XReal operator/(XReal a, const XReal& b) { return a /= b; }

  friend bool operator==(const XReal& a, const XReal& b) {
    return a.mant_ == b.mant_ && (a.mant_ == 0.0 || a.exp_ == b.exp_);
  }
  friend bool operator<(const XReal& a, const XReal& b);
  friend bool operator>(const XReal& a, const XReal& b) { return b < a; }
  friend bool operator<=(const XReal& a, const XReal& b) { return !(b < a); }
  friend bool operator>=(const XReal& a, const XReal& b) { return !(a < b); }

  std::string str() const;

 private:
  void normalize();

  double mant_ = 0.0;  // 0 or |mant_| in [0.5, 1)
  std::int64_t exp_ = 0;
};

XReal abs(const XReal& x);
XReal sqrt(const XReal& x);
/// x^p for x > 0. The exponent product is split exactly so that
/// pow(x, p) * pow(x, -p) == 1 to working precision even when log|x| ~ 1e9.
XReal pow(const XReal& x, double p);
XReal min(const XReal& a, const XReal& b);
XReal max(const XReal& a, const XReal& b);
/// ldexp-style exact scaling by 2^k.
XReal scale2(const XReal& x, std::int64_t k);
/// log|a/b| computed from mantissa and exponent differences.
double log_ratio(const XReal& a, const XReal& b);

std::ostream& operator<<(std::ostream& os, const XReal& x);

}  // namespace qanc

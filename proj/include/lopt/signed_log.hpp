#pragma once

#include <string>

#include "lopt/bigfloat.hpp"

namespace lopt {

/// Sign plus natural-log magnitude, for quantities of size k! s^-k that
/// would be awkward to carry as plain floats. log_magnitude is meaningless
/// when sign == 0.
class SignedLog {
 public:
  SignedLog() : sign_(0), log_mag_(kDefaultPrecision) {}
  SignedLog(int sign, BigFloat log_magnitude);

  static SignedLog zero(Precision p) { return SignedLog(0, BigFloat(0, p)); }
  static SignedLog from_value(const BigFloat& v);
  static SignedLog from_rational(const Rational& q, Precision p);
  /// ln Γ(k) = ln (k-1)!, positive sign.
  static SignedLog gamma_of(unsigned long k, Precision p);
  static SignedLog factorial_of(unsigned long k, Precision p);

  int sign() const { return sign_; }
  const BigFloat& log_magnitude() const { return log_mag_; }
  bool is_zero() const { return sign_ == 0; }

  /// Converts back to a BigFloat (MPFR's exponent range covers k! for the
  /// orders used here).
  BigFloat value() const;

  SignedLog& operator*=(const SignedLog& o);
  SignedLog& operator/=(const SignedLog& o);
  friend SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }
  friend SignedLog operator/(SignedLog a, const SignedLog& b) { return a /= b; }
  SignedLog pow(const BigFloat& exponent) const;

  /// ln|a/b| and sign(a/b), for ratio checks.
  static BigFloat log_ratio(const SignedLog& a, const SignedLog& b);

  std::string str(int digits = 12) const;

 private:
  int sign_;
  BigFloat log_mag_;
};

}  // namespace lopt

#include "lopt/signed_log.hpp"

#include <utility>

namespace lopt {

SignedLog::SignedLog(int sign, BigFloat log_magnitude)
    : sign_(sign > 0 ? 1 : (sign < 0 ? -1 : 0)), log_mag_(std::move(log_magnitude)) {}

SignedLog SignedLog::from_value(const BigFloat& v) {
  if (v.is_zero()) return zero(v.precision());
  return SignedLog(v.sign(), log(abs(v)));
}

SignedLog SignedLog::from_rational(const Rational& q, Precision p) {
  if (q == 0) return zero(p);
  // Numerator and denominator separately: each converts with one rounding
  // and the logs stay accurate even when the quotient would be enormous.
  const BigFloat num(mpz_class(abs(q.get_num())), p);
  const BigFloat den(q.get_den(), p);
  return SignedLog(sgn(q), log(num) - log(den));
}

SignedLog SignedLog::gamma_of(unsigned long k, Precision p) {
  return SignedLog(1, lgamma(BigFloat(static_cast<long>(k), p)));
}

SignedLog SignedLog::factorial_of(unsigned long k, Precision p) {
  return SignedLog(1, log_factorial(k, p));
}

BigFloat SignedLog::value() const {
  if (sign_ == 0) return BigFloat(0, log_mag_.precision());
  BigFloat v = exp(log_mag_);
  return sign_ < 0 ? -v : v;
}

SignedLog& SignedLog::operator*=(const SignedLog& o) {
  sign_ *= o.sign_;
  if (sign_ == 0) return *this;
  log_mag_ += o.log_mag_;
  return *this;
}

SignedLog& SignedLog::operator/=(const SignedLog& o) {
  sign_ *= o.sign_;
  if (sign_ == 0) return *this;
  log_mag_ -= o.log_mag_;
  return *this;
}

SignedLog SignedLog::pow(const BigFloat& exponent) const {
  return SignedLog(sign_ == 0 ? 0 : 1, log_mag_ * exponent);
}

BigFloat SignedLog::log_ratio(const SignedLog& a, const SignedLog& b) {
  return a.log_mag_ - b.log_mag_;
}

std::string SignedLog::str(int digits) const {
  if (sign_ == 0) return "0";
  return std::string(sign_ < 0 ? "-" : "+") + "exp(" + log_mag_.str(digits) + ")";
}

}  // namespace lopt

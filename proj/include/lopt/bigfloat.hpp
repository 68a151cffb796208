#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <string>

#include "lopt/rational.hpp"

namespace lopt {

/// Binary precision in bits. Kept as a distinct type so that a precision is
/// never confused with a digit count or an order index.
struct Precision {
  mpfr_prec_t bits = 128;

  constexpr Precision() = default;
  constexpr explicit Precision(mpfr_prec_t b) : bits(b) {}

  constexpr Precision operator*(long f) const { return Precision(bits * f); }
  constexpr Precision operator+(long extra) const { return Precision(bits + extra); }
  friend constexpr auto operator<=>(Precision, Precision) = default;
};

inline constexpr Precision kDefaultPrecision{128};

/// Arbitrary-precision float with the precision carried by the value.
///
/// Binary operations round to the larger of the two operand precisions; a
/// mixed operation with a builtin number uses the BigFloat's precision. All
/// operations are correctly rounded (round-to-nearest).
class BigFloat {
 public:
  explicit BigFloat(Precision p = kDefaultPrecision);
  BigFloat(double v, Precision p);
  BigFloat(long v, Precision p);
  BigFloat(int v, Precision p) : BigFloat(static_cast<long>(v), p) {}
  BigFloat(const Rational& q, Precision p);
  BigFloat(const mpz_class& z, Precision p);
  /// Parses a decimal string (e.g. "0.75", "-1e-12").
  static BigFloat parse(const std::string& text, Precision p);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  Precision precision() const { return Precision(mpfr_get_prec(v_)); }
  /// Same value rounded to a different precision.
  BigFloat at(Precision p) const;

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  /// Decimal rendering with `digits` significant digits (printf %.*Rg style).
  std::string str(int digits = 17) const;

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  BigFloat operator-() const;
  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  BigFloat& operator+=(long o);
  BigFloat& operator-=(long o);
  BigFloat& operator*=(long o);
  BigFloat& operator/=(long o);

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator+(const BigFloat& a, long b) { BigFloat r(a); r += b; return r; }
  friend BigFloat operator-(const BigFloat& a, long b) { BigFloat r(a); r -= b; return r; }
  friend BigFloat operator*(const BigFloat& a, long b) { BigFloat r(a); r *= b; return r; }
  friend BigFloat operator/(const BigFloat& a, long b) { BigFloat r(a); r /= b; return r; }
  friend BigFloat operator+(long a, const BigFloat& b) { return b + a; }
  friend BigFloat operator*(long a, const BigFloat& b) { return b * a; }
  friend BigFloat operator-(long a, const BigFloat& b);
  friend BigFloat operator/(long a, const BigFloat& b);

  // Mixed arithmetic with a floating-point builtin would silently convert it
  // to long.
  template <std::floating_point T> friend BigFloat operator+(const BigFloat&, T) = delete;
  template <std::floating_point T> friend BigFloat operator-(const BigFloat&, T) = delete;
  template <std::floating_point T> friend BigFloat operator*(const BigFloat&, T) = delete;
  template <std::floating_point T> friend BigFloat operator/(const BigFloat&, T) = delete;
  template <std::floating_point T> friend BigFloat operator+(T, const BigFloat&) = delete;
  template <std::floating_point T> friend BigFloat operator-(T, const BigFloat&) = delete;
  template <std::floating_point T> friend BigFloat operator*(T, const BigFloat&) = delete;
  template <std::floating_point T> friend BigFloat operator/(T, const BigFloat&) = delete;
  template <std::floating_point T> friend bool operator==(const BigFloat&, T) = delete;
  template <std::floating_point T> friend std::partial_ordering operator<=>(const BigFloat&, T) = delete;

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);
  friend bool operator==(const BigFloat& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigFloat& a, long b);

 private:
  mpfr_t v_;
};

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat pow(const BigFloat& x, const BigFloat& y);
BigFloat pow(const BigFloat& x, long n);
/// x * 2^e, exact.
BigFloat ldexp(const BigFloat& x, long e);
BigFloat min(const BigFloat& a, const BigFloat& b);
BigFloat max(const BigFloat& a, const BigFloat& b);
/// ln Γ(x) for x > 0.
BigFloat lgamma(const BigFloat& x);
BigFloat pi(Precision p);
/// ln(k!) exactly rounded.
BigFloat log_factorial(unsigned long k, Precision p);

/// |a - b| <= 2^-bits * max(|a|, |b|), or both zero.
bool agree_to_bits(const BigFloat& a, const BigFloat& b, long bits);

}  // namespace lopt

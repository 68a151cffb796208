#include "lopt/bigfloat.hpp"

#include <algorithm>
#include <vector>

#include "lopt/errors.hpp"

namespace lopt {

namespace {

mpfr_prec_t wider(const BigFloat& a, const BigFloat& b) {
  return std::max(mpfr_get_prec(a.raw()), mpfr_get_prec(b.raw()));
}

}  // namespace

BigFloat::BigFloat(Precision p) {
  mpfr_init2(v_, p.bits);
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(double v, Precision p) {
  mpfr_init2(v_, p.bits);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(long v, Precision p) {
  mpfr_init2(v_, p.bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const Rational& q, Precision p) {
  mpfr_init2(v_, p.bits);
  mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const mpz_class& z, Precision p) {
  mpfr_init2(v_, p.bits);
  mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
}

BigFloat BigFloat::parse(const std::string& text, Precision p) {
  BigFloat r(p);
  char* end = nullptr;
  mpfr_strtofr(r.v_, text.c_str(), &end, 10, MPFR_RNDN);
  if (text.empty() || end == text.c_str() || *end != '\0') {
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + text + "'");
  }
  return r;
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::at(Precision p) const {
  BigFloat r(p);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string BigFloat::str(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

BigFloat BigFloat::operator-() const {
  BigFloat r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator+=(long o) { mpfr_add_si(v_, v_, o, MPFR_RNDN); return *this; }
BigFloat& BigFloat::operator-=(long o) { mpfr_sub_si(v_, v_, o, MPFR_RNDN); return *this; }
BigFloat& BigFloat::operator*=(long o) { mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
BigFloat& BigFloat::operator/=(long o) { mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r(Precision(wider(a, b)));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r(Precision(wider(a, b)));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r(Precision(wider(a, b)));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat r(Precision(wider(a, b)));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
BigFloat operator-(long a, const BigFloat& b) {
  BigFloat r(b.precision());
  mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}
BigFloat operator/(long a, const BigFloat& b) {
  BigFloat r(b.precision());
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const BigFloat& a, long b) {
  if (mpfr_nan_p(a.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

BigFloat abs(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigFloat sqrt(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigFloat exp(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigFloat log(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& x, const BigFloat& y) {
  BigFloat r(Precision(std::max(x.precision().bits, y.precision().bits)));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& x, long n) {
  BigFloat r(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

BigFloat ldexp(const BigFloat& x, long e) {
  BigFloat r(x.precision());
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

BigFloat min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }
BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

BigFloat lgamma(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_lngamma(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigFloat pi(Precision p) {
  BigFloat r(p);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

BigFloat log_factorial(unsigned long k, Precision p) {
  return lgamma(BigFloat(static_cast<long>(k) + 1, p));
}

bool agree_to_bits(const BigFloat& a, const BigFloat& b, long bits) {
  if (a.is_zero() && b.is_zero()) return true;
  return abs(a - b) <= ldexp(max(abs(a), abs(b)), -bits);
}

}  // namespace lopt

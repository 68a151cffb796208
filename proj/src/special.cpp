#include "lopt/special.hpp"

namespace lopt {

namespace {

// Maclaurin series; the alternating terms peak near e^{x^2}, so the working
// precision carries enough guard bits to absorb that cancellation.
BigFloat erf_series(const BigFloat& x, Precision p) {
  const double xd = x.to_double();
  const Precision wp = p + 24 + static_cast<long>(1.45 * xd * xd);
  const BigFloat xw = x.at(wp);
  const BigFloat x2 = xw * xw;
  BigFloat power = xw;  // (-1)^m x^{2m+1} / m!
  BigFloat sum = xw;
  for (long m = 1;; ++m) {
    power *= x2;
    power /= -m;
    const BigFloat term = power / (2 * m + 1);
    sum += term;
    if (abs(term) <= ldexp(abs(sum), -(wp.bits + 2))) break;
  }
  return (sum * 2 / sqrt(pi(wp))).at(p);
}

}  // namespace

BigFloat erfc_large(const BigFloat& x, Precision p) {
  const Precision wp = p + 24;
  const BigFloat xw = x.at(wp);
  // Modified Lentz on x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...))).
  const BigFloat tiny = ldexp(BigFloat(1, wp), -(wp.bits * 4));
  BigFloat f = xw;
  BigFloat c = xw;
  BigFloat d(0, wp);
  for (long n = 1; n < 1000000; ++n) {
    const BigFloat an = BigFloat(n, wp) / 2;
    d = xw + an * d;
    if (d.is_zero()) d = tiny;
    d = 1 / d;
    c = xw + an / c;
    if (c.is_zero()) c = tiny;
    const BigFloat delta = c * d;
    f *= delta;
    if (abs(delta - 1) <= ldexp(BigFloat(1, wp), -(wp.bits - 2))) break;
  }
  return (exp(-(xw * xw)) / (sqrt(pi(wp)) * f)).at(p);
}

BigFloat erf_highprec(const BigFloat& x, Precision p) {
  if (x.is_zero()) return BigFloat(0, p);
  const BigFloat ax = abs(x);
  BigFloat r = ax <= 2 ? erf_series(ax, p) : (1 - erfc_large(ax, p + 8)).at(p);
  return x.sign() < 0 ? -r : r;
}

}  // namespace lopt

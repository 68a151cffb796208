#include "lopt/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "lopt/errors.hpp"
#include "lopt/quadrature.hpp"
#include "lopt/recursion.hpp"
#include "lopt/special.hpp"

namespace lopt {

BigFloat PiRing::value(Precision p) const { return BigFloat(a, p) + BigFloat(b, p) / sqrt(pi(p)); }

std::string PiRing::str() const {
  if (b == 0) return to_string(a);
  const std::string tail = to_string(b) + "/sqrt(pi)";
  if (a == 0) return tail;
  return to_string(a) + (b > 0 ? "+" : "") + tail;
}

namespace {

template <class T>
T at(const std::vector<T>& v, int i) {
  return i >= 0 && i < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(i)] : T{};
}

template <class T>
void add_at(std::vector<T>& v, int i, const std::type_identity_t<T>& x) {
  if (static_cast<int>(v.size()) <= i) v.resize(static_cast<std::size_t>(i) + 1);
  v[static_cast<std::size_t>(i)] += x;
}

template <class T>
void trim(std::vector<T>& v) {
  while (!v.empty() && v.back() == T{}) v.pop_back();
}

// Taylor coefficients at 0, in units of 1/√π:
//   E = (1/√π) Σ 2^{m+1} x^{2m+1} / (2m+1)!!,  G = ∫E.
Rational e_taylor(int j) {
  if (j < 1 || j % 2 == 0) return 0;
  const int m = (j - 1) / 2;
  return Rational(mpz_class(2) << m, double_factorial_odd(static_cast<unsigned long>(m + 1)));
}

Rational g_taylor(int j) { return j < 2 ? Rational(0) : e_taylor(j - 1) / (j); }

}  // namespace

LadderFunction LadderFunction::derivative() const {
  // (p + qG + rE)' = p' + 2r/√π + q'G + (q + r' + 2xr)E
  LadderFunction d;
  d.level = level;
  for (int i = 1; i < static_cast<int>(p.size()); ++i) add_at(d.p, i - 1, at(p, i) * Rational(i));
  for (int i = 0; i < static_cast<int>(r.size()); ++i) add_at(d.p, i, PiRing{0, 2 * at(r, i)});
  for (int i = 1; i < static_cast<int>(q.size()); ++i) add_at(d.q, i - 1, at(q, i) * i);
  for (int i = 0; i < static_cast<int>(q.size()); ++i) add_at(d.r, i, at(q, i));
  for (int i = 1; i < static_cast<int>(r.size()); ++i) add_at(d.r, i - 1, at(r, i) * i);
  for (int i = 0; i < static_cast<int>(r.size()); ++i) add_at(d.r, i + 1, 2 * at(r, i));
  trim(d.p);
  trim(d.q);
  trim(d.r);
  return d;
}

PiRing LadderFunction::taylor_coeff(int m) const {
  PiRing c = at(p, m);
  Rational b = 0;
  for (int i = 0; i <= m; ++i) {
    b += at(q, i) * g_taylor(m - i);
    b += at(r, i) * e_taylor(m - i);
  }
  return c + PiRing{0, b};
}

LadderFunction build_ladder(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be non-negative");
  LadderFunction f;
  f.q = {Rational(2)};
  for (int m = 0; m < n; ++m) {
    // X -> (x - d/dx) X / (m+1) is f -> (2x f - f') / (m+1) on the prefactor.
    const LadderFunction d = f.derivative();
    LadderFunction next;
    next.level = m + 1;
    const Rational scale(1, m + 1);
    for (int i = 0; i < static_cast<int>(f.p.size()); ++i) add_at(next.p, i + 1, f.p[static_cast<std::size_t>(i)] * 2);
    for (int i = 0; i < static_cast<int>(f.q.size()); ++i) add_at(next.q, i + 1, 2 * f.q[static_cast<std::size_t>(i)]);
    for (int i = 0; i < static_cast<int>(f.r.size()); ++i) add_at(next.r, i + 1, 2 * f.r[static_cast<std::size_t>(i)]);
    for (int i = 0; i < static_cast<int>(d.p.size()); ++i) add_at(next.p, i, -d.p[static_cast<std::size_t>(i)]);
    for (int i = 0; i < static_cast<int>(d.q.size()); ++i) add_at(next.q, i, -d.q[static_cast<std::size_t>(i)]);
    for (int i = 0; i < static_cast<int>(d.r.size()); ++i) add_at(next.r, i, -d.r[static_cast<std::size_t>(i)]);
    for (auto& c : next.p) c = c * scale;
    for (auto& c : next.q) c *= scale;
    for (auto& c : next.r) c *= scale;
    trim(next.p);
    trim(next.q);
    trim(next.r);
    f = std::move(next);
  }
  f.level = n;
  f.c = -f.taylor_coeff(n);
  if (!f.c.is_zero()) {
    // order-0 polynomial of level n, independent of the potential
    const WaveOrder h = compute_series(Potential::quartic(), n, 0).orders[0];
    for (int l = 0; l <= n; ++l) {
      if (h.coeff(l) != 0) add_at(f.p, l, f.c * h.coeff(l));
    }
    trim(f.p);
  }
  return f;
}

PiRing cal_e(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be non-negative");
  return {0, -Rational(mpz_class(1) << (n + 1), 1) / factorial(static_cast<unsigned long>(n))};
}

namespace {

QuadratureOptions g_options(Precision p) {
  QuadratureOptions o;
  o.abs_tol = ldexp(BigFloat(1, p), -2 * static_cast<long>(p.bits));
  o.rel_tol = std::ldexp(1.0, -static_cast<int>(p.bits - 20));
  o.points = std::max(20, static_cast<int>(p.bits / 8) * 2);
  return o;
}

// ∫_0^x e^{t²} dt = Σ x^{2m+1}/(m!(2m+1)), all terms positive.
BigFloat integral_exp_square(const BigFloat& x, Precision p) {
  const BigFloat x2 = x * x;
  BigFloat term = x;  // x^{2m+1}/m!
  BigFloat sum = x;
  const BigFloat eps = ldexp(BigFloat(1, p), -static_cast<long>(p.bits) - 4);
  for (long m = 1;; ++m) {
    term = term * x2 / m;
    const BigFloat add = term / (2 * m + 1);
    sum += add;
    if (add < sum * eps) break;
  }
  return sum;
}

}  // namespace

BigFloat integral_G(const BigFloat& x, Precision p) {
  const BigFloat ax = abs(x.at(p));
  if (ax.is_zero()) return BigFloat(0, p);
  const BigFloat three(3, p);
  // integrands carry guard bits so rounding noise stays below the tolerance
  const Precision gp = p + 24;
  const auto core = [p, gp](const BigFloat& t) {
    const BigFloat tw = t.at(gp);
    return (exp(tw * tw) * erf_highprec(tw, gp)).at(p);
  };
  if (ax <= three) return integrate_regularized(core, BigFloat(0, p), ax, EndpointSingularity::None, g_options(p)).value;
  // e^{t²} erfc t ~ 1/(t√π) is tame; the growing part integrates in closed series.
  const auto tail = [p, gp](const BigFloat& t) {
    const BigFloat tw = t.at(gp);
    return (exp(tw * tw) * erfc_large(tw, gp)).at(p);
  };
  const BigFloat g3 = integrate_regularized(core, BigFloat(0, p), three, EndpointSingularity::None, g_options(p)).value;
  const BigFloat rest = integrate_regularized(tail, three, ax, EndpointSingularity::None, g_options(p)).value;
  return g3 + (integral_exp_square(ax, p) - integral_exp_square(three, p)) - rest;
}

namespace {

template <class C>
BigFloat horner(const std::vector<C>& c, const BigFloat& x, Precision p) {
  BigFloat acc(0, p);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc *= x;
    if constexpr (std::is_same_v<C, PiRing>) {
      acc += it->value(p);
    } else {
      acc += BigFloat(*it, p);
    }
  }
  return acc;
}

BigFloat eval_once(const LadderFunction& f, const BigFloat& x, Precision p) {
  const BigFloat xw = x.at(p);
  const BigFloat x2 = xw * xw;
  BigFloat sum = horner(f.p, xw, p);
  if (!f.q.empty()) sum += horner(f.q, xw, p) * integral_G(xw, p);
  if (!f.r.empty()) sum += horner(f.r, xw, p) * exp(x2) * erf_highprec(xw, p);
  return sum * exp(-x2 / 2);
}

}  // namespace

BigFloat eval_ladder(const LadderFunction& f, const BigFloat& x, Precision p) {
  Precision wp = p;
  BigFloat prev = eval_once(f, x, wp);
  while (wp.bits < 4 * p.bits) {
    wp = wp * 2;
    BigFloat next = eval_once(f, x, wp);
    if (agree_to_bits(prev, next, 40)) return next.at(p);
    prev = std::move(next);
  }
  throw Error(ErrorKind::PrecisionExhausted,
              "X_" + std::to_string(f.level) + "(" + x.str(10) + ") is unstable up to " + std::to_string(wp.bits) + " bits");
}

SignedLog fixed_x_scale(const EuclideanConstants& consts, int n, int k, Precision p) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "order must be >= 1");
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be non-negative");
  const BigFloat half = BigFloat(1, p) / 2;
  const BigFloat nh = BigFloat(n, p) + half;
  const BigFloat lg = consts.log_c.at(p) * nh - log(pi(p) * 2) + log_factorial(static_cast<unsigned long>(k), p) +
                      log(BigFloat(k, p)) * (BigFloat(n, p) - half) - log(consts.s_infinity.at(p)) * (nh + k);
  return SignedLog(1, lg);
}

SignedLog energy_asymptotic(const EuclideanConstants& consts, int n, int k, Precision p) {
  return fixed_x_scale(consts, n, k, p) * SignedLog::from_value(cal_e(n).value(p));
}

SignedLog energy_asymptotic_quartic(int k, Precision p) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "order must be >= 1");
  const BigFloat lg = log(BigFloat(6, p)) / 2 - log(pi(p)) * 3 / 2 + log(BigFloat(3, p)) * k +
                      log_factorial(static_cast<unsigned long>(k), p) - log(BigFloat(k, p)) / 2;
  return SignedLog(-1, lg);
}

SignedLog wave_fixed_x_asymptotic(const EuclideanConstants& consts, const LadderFunction& f, int k,
                                  const BigFloat& x, Precision p) {
  const BigFloat v = eval_ladder(f, x, p);
  if (v.is_zero()) return SignedLog::zero(p);
  return fixed_x_scale(consts, f.level, k, p) * SignedLog::from_value(v);
}

}  // namespace lopt

#pragma once

#include <string>
#include <vector>

#include "lopt/euclidean.hpp"
#include "lopt/rational.hpp"
#include "lopt/signed_log.hpp"

namespace lopt {

/// a + b/√π with rational a, b. Everything the ladder produces lives here.
struct PiRing {
  Rational a;
  Rational b;

  BigFloat value(Precision p) const;
  std::string str() const;
  bool is_zero() const { return a == 0 && b == 0; }

  PiRing& operator+=(const PiRing& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  friend PiRing operator+(PiRing x, const PiRing& y) { return x += y; }
  friend PiRing operator-(const PiRing& x) { return {-x.a, -x.b}; }
  friend PiRing operator-(const PiRing& x, const PiRing& y) { return x + -y; }
  friend PiRing operator*(const PiRing& x, const Rational& r) { return {x.a * r, x.b * r}; }
  friend bool operator==(const PiRing& x, const PiRing& y) { return x.a == y.a && x.b == y.b; }
};

/// X_n(x) = f_n(x) e^{-x²/2} with f_n = p(x) + q(x) G(x) + r(x) E(x), where
/// G(x) = ∫_0^x e^{t²} erf t dt and E(x) = e^{x²} erf x. Index i of each
/// vector is the coefficient of x^i.
///
/// q and r stay rational: d/dx only feeds r into p through E' = 2xE + 2/√π.
struct LadderFunction {
  int level = 0;
  std::vector<PiRing> p;
  std::vector<Rational> q;
  std::vector<Rational> r;
  /// Multiple of Ψ_{n,0} added so that the x^n coefficient of f_n vanishes.
  PiRing c;

  /// f' as a triple (same level, c left empty).
  LadderFunction derivative() const;
  /// Exact x^m Taylor coefficient of f at 0.
  PiRing taylor_coeff(int m) const;
};

/// X_0 = 2G e^{-x²/2}, then X_{n} = (x - d/dx)^n X_0 / n! + C_n Ψ_{n,0}.
LadderFunction build_ladder(int n);

/// -2^{n+1}/(n! √π).
PiRing cal_e(int n);

/// G(x) by quadrature: directly for |x| <= 3, beyond that through
/// ∫e^{t²}dt - ∫e^{t²}erfc t dt on [3, x].
BigFloat integral_G(const BigFloat& x, Precision p);

/// X_n(x). Repeats at doubled precision until two results agree to 40 bits.
/// Throws Error(PrecisionExhausted) when 4P is not enough.
BigFloat eval_ladder(const LadderFunction& f, const BigFloat& x, Precision p = kDefaultPrecision);

/// c^{n+1/2}/(2π) · k! k^{n-1/2} / s∞^{k+n+1/2}
SignedLog fixed_x_scale(const EuclideanConstants& consts, int n, int k, Precision p = kDefaultPrecision);

/// Large-order eigenvalue form: fixed_x_scale · 𝓔_n.
SignedLog energy_asymptotic(const EuclideanConstants& consts, int n, int k, Precision p = kDefaultPrecision);

/// The same for the reference quartic written out: -(√6/π^{3/2}) 3^k k!/√k.
SignedLog energy_asymptotic_quartic(int k, Precision p = kDefaultPrecision);

/// Ψ_{n,k}(x) at fixed x: fixed_x_scale · X_n(x).
SignedLog wave_fixed_x_asymptotic(const EuclideanConstants& consts, const LadderFunction& f, int k,
                                  const BigFloat& x, Precision p = kDefaultPrecision);

}  // namespace lopt

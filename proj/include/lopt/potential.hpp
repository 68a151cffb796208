#pragma once

#include <map>
#include <string>

#include "lopt/bigfloat.hpp"

namespace lopt {

struct PotentialValues {
  BigFloat v;            ///< V(q)
  BigFloat dv;           ///< V'(q)
  BigFloat lambda_rate;  ///< V(q) - (q/2) V'(q), the rate of the area variable
};

/// Even polynomial potential V(Q) = Q^2/2 + sum_{p>=2} a_{2p} Q^{2p}.
///
/// Only the anharmonic coefficients are stored; the harmonic coefficient is
/// fixed at 1/2. The coefficient of degree 2p enters the perturbation series
/// with coupling power g^{p-1}. A Potential only exists in validated form:
/// a_4 < 0, and V > 0 on (0, Q+) with a simple root at the turning point Q+.
class Potential {
 public:
  /// Throws Error with kind MissingQuartic, WrongSignQuartic, NoTurningPoint,
  /// ShapeViolation or InvalidConfig.
  static Potential validate(const std::map<int, Rational>& raw, Precision p = kDefaultPrecision);

  /// The reference potential Q^2/2 - Q^4.
  static Potential quartic(Precision p = kDefaultPrecision);

  /// {"coeffs": {"4": "-1", "6": "1/100"}}. Unknown keys are rejected.
  static Potential from_json(const std::string& text, Precision p = kDefaultPrecision);
  static Potential load(const std::string& path, Precision p = kDefaultPrecision);

  /// Nonzero anharmonic coefficients keyed by even degree >= 4.
  const std::map<int, Rational>& coefficients() const { return coeffs_; }
  Rational a4() const { return coeffs_.at(4); }
  int max_degree() const { return coeffs_.rbegin()->first; }
  Precision precision() const { return turning_point_.precision(); }

  /// Q+, the smallest positive root of V.
  const BigFloat& turning_point() const { return turning_point_; }

  PotentialValues values(const BigFloat& q) const;
  BigFloat v(const BigFloat& q) const;
  BigFloat dv(const BigFloat& q) const;

  /// (2V(q)/q^2 - 1) / q = sum 2 a_{2p} q^{2p-3}; smooth and cancellation-free.
  BigFloat reduced_excess(const BigFloat& q) const;

  Rational v_exact(const Rational& q) const;
  Rational dv_exact(const Rational& q) const;
  /// sum a_{2p} (1 - p) q^{2p}, the closed form of V - (q/2) V'.
  Rational lambda_rate_exact(const Rational& q) const;

  /// "a4=-1;a6=1/100", used in CSV provenance headers.
  std::string describe() const;
  std::string to_json() const;

 private:
  Potential(std::map<int, Rational> coeffs, BigFloat turning_point)
      : coeffs_(std::move(coeffs)), turning_point_(std::move(turning_point)) {}

  std::map<int, Rational> coeffs_;
  BigFloat turning_point_;
};

}  // namespace lopt

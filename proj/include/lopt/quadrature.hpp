#pragma once

#include <functional>

#include "lopt/bigfloat.hpp"

namespace lopt {

using RealFunction = std::function<BigFloat(const BigFloat&)>;

/// Declared analytic behaviour of the integrand at the interval ends.
enum class EndpointSingularity {
  None,
  /// f ~ (q - a)^-1/2; integrated after q = a + u^2.
  InverseSqrtAtA,
  /// f ~ (b - q)^-1/2; integrated after q = b - u^2.
  InverseSqrtAtB,
  /// A 1/(q - a) pole already subtracted inside f; f is finite at a.
  SimplePoleSubtractedAtA,
};

struct QuadratureOptions {
  BigFloat abs_tol = BigFloat(1e-12, kDefaultPrecision);
  /// Accept when the error estimate is below max(abs_tol, rel_tol * |I|).
  double rel_tol = 0.0;
  int max_panels = 4096;
  /// Gauss-Legendre points per panel (even). Higher orders pay off at high precision.
  int points = 20;
};

struct QuadratureResult {
  BigFloat value;
  BigFloat error_estimate;
  int panels = 0;
};

/// Adaptive composite Gauss-Legendre quadrature of f over [a, b] with the
/// declared endpoint treatment. Nodes never touch the endpoints.
///
/// Throws Error(NonConvergence) when the panel budget is exhausted and
/// Error(DomainError) when f is non-finite at an interior node.
QuadratureResult integrate_regularized(const RealFunction& f, const BigFloat& a, const BigFloat& b,
                                       EndpointSingularity singularity,
                                       const QuadratureOptions& options = {});

/// Convenience overload returning only the value.
BigFloat integrate(const RealFunction& f, const BigFloat& a, const BigFloat& b,
                   EndpointSingularity singularity, const BigFloat& tol);

}  // namespace lopt

#pragma once

#include "lopt/quadrature.hpp"

namespace lopt {

struct RootOptions {
  /// Secant (Illinois) steps inside the bracket; bisection alone when false.
  bool secant_acceleration = true;
  int max_iterations = 2000;
};

/// Finds a root of f inside [lo, hi] and returns a point whose bracket has
/// width <= tol (or at which f is exactly zero). Deterministic.
///
/// Throws Error(NoSignChange) if f(lo) and f(hi) have the same strict sign.
BigFloat find_root_bracketed(const RealFunction& f, const BigFloat& lo, const BigFloat& hi,
                             const BigFloat& tol, const RootOptions& options = {});

}  // namespace lopt

#pragma once

#include <cstddef>
#include <vector>

#include "lopt/potential.hpp"
#include "lopt/signed_log.hpp"

namespace lopt {

/// One order of the perturbative wave function,
/// Ψ_{n,k}(x) = (Σ_l B_{k,l} x^l) exp(-x^2/2).
///
/// Only powers with the parity of n are stored: coeffs[i] is B_{k, (n%2) + 2i}
/// for 0 <= (n%2) + 2i <= 4k + n.
struct WaveOrder {
  int level = 0;
  int order = 0;
  std::vector<Rational> coeffs;

  int degree() const { return 4 * order + level; }
  /// B_{k,l}; zero for powers outside the support or of the wrong parity.
  Rational coeff(int l) const;
};

struct PerturbationSeries {
  int level = 0;
  Potential potential;
  std::vector<WaveOrder> orders;   ///< k = 0..K
  std::vector<Rational> energies;  ///< E_{n,k}, k = 0..K

  int max_order() const { return static_cast<int>(orders.size()) - 1; }
};

struct RecursionOptions {
  /// Largest total coefficient storage allowed for a single order.
  std::size_t order_budget_bytes = std::size_t{64} << 20;
};

/// Exact perturbation series for level n up to order K with the convention
/// B_{k,n} = 0 for k >= 1. Throws Error(OrderOverflow) when an order exceeds
/// the storage budget, Error(InvalidArgument) for negative n or K.
PerturbationSeries compute_series(const Potential& pot, int n, int K, const RecursionOptions& options = {});

/// E_{n,1..K} from Rayleigh-Schrödinger sums in the harmonic-oscillator basis.
/// An independent check on compute_series; K <= 3.
std::vector<Rational> oscillator_oracle(const Potential& pot, int n, int K);

struct EvalOptions {
  /// Required agreement between evaluations at P and 2P.
  long agreement_bits = 40;
  /// Highest precision tried, as a multiple of the requested precision.
  long cap_factor = 16;
};

/// Ψ_{n,k}(x) rounded to precision p. The polynomial is re-evaluated at twice
/// the working precision until two successive results agree; throws
/// Error(PrecisionExhausted) if they still disagree at the cap.
BigFloat evaluate_order(const PerturbationSeries& series, int k, const BigFloat& x, Precision p,
                        const EvalOptions& options = {});

/// -(1/k) ln|Ψ_{n,k}(ξ√k) / k!|. Throws Error(ZeroValue) if Ψ vanishes there.
BigFloat convergence_profile_A(const PerturbationSeries& series, int k, const BigFloat& xi,
                               Precision p = kDefaultPrecision);

/// Ψ_{n,k}(ξ√k) / ((k-1)! e^{-k A(ξ)}), with A(ξ) supplied by the caller.
BigFloat convergence_profile_M(const PerturbationSeries& series, int k, const BigFloat& xi,
                               const BigFloat& a_of_xi, Precision p = kDefaultPrecision);

/// Ψ_{0,k}(x) / B_{k,2}: the order rescaled so its polynomial starts as x^2.
/// Throws Error(ZeroNormalizer) if B_{k,2} = 0, Error(InvalidArgument) for n != 0.
BigFloat fixed_x_profile(const PerturbationSeries& series, int k, const BigFloat& x,
                         Precision p = kDefaultPrecision);

}  // namespace lopt

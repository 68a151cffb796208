#pragma once

#include <vector>

#include "lopt/euclidean.hpp"
#include "lopt/rational.hpp"
#include "lopt/recursion.hpp"
#include "lopt/signed_log.hpp"

namespace lopt {

/// ρ_k(x1, x2) = polynomial · exp(exponent) with exponent = -(x1² + x2²)/2.
struct RhoOrderExact {
  Rational polynomial;
  Rational exponent;

  SignedLog value(Precision p = kDefaultPrecision) const;
};

/// Σ_{m=0}^{k} Ψ_{n1,m}(x1) Ψ_{n2,k-m}(x2), with the level of series2 in the
/// second factor.
RhoOrderExact rho_order_exact(const PerturbationSeries& series1, const PerturbationSeries& series2, int k,
                              const Rational& x1, const Rational& x2);

/// Saddle of the split sum for ρ at k = Nκ, x_i = √N η_i.
struct DensitySaddle {
  BigFloat p_kappa;
  BigFloat tau_1;
  BigFloat tau_2;
  Branch branch_1 = Branch::Rising;
  Branch branch_2 = Branch::Rising;
  BigFloat b0;        ///< (s1 + s2 + (λ1 + λ2) p_κ) e^{-p_κ}
  BigFloat b_second;  ///< B''(μ0) = e^{p_κ} D / (D1(τ1) D1(τ2)), D1 = Qλ̇/2 - λQ̇
  /// e^{-(n1+n2-1)p_κ/2} e^{(n1+1/2)τ1 + (n2+1/2)τ2} / √(2π D), summed over
  /// every minimum with the same B0.
  BigFloat gamma;
  /// The branch-swapped assignment is an equally deep minimum and is included in gamma.
  bool degenerate_pair = false;
};

/// Enumerates the branch assignments (rising, rising), (rising, falling) and
/// (falling, rising), solves κ = (λ1 + λ2) e^{-p}, η_i = Q_i e^{-p/2} for each,
/// keeps minima (B'' > 0) and returns the deepest.
/// Throws Error(NoSaddle) when none qualifies.
DensitySaddle rho_saddle(const Trajectory& tr, int n1, int n2, const BigFloat& kappa, const BigFloat& eta1,
                         const BigFloat& eta2);

/// Saddle form N^{k+(n1+n2-1)/2} e^{-N B0} γ with N = k, κ = 1, η_i = x_i/√k.
SignedLog rho_asymptotic(const Trajectory& tr, int n1, int n2, int k, const BigFloat& x1, const BigFloat& x2);

enum class DiagonalRegion { A, B };

struct DiagonalAsymptotic {
  DiagonalRegion region = DiagonalRegion::A;
  BigFloat b;
  BigFloat gamma;
};

/// Coinciding arguments η1 = η2 = η. Region A (η/√κ > Q+/√s∞) uses the
/// symmetric saddle τ1 = τ2; region B the split pair with Q(τ1) = Q(τ2).
/// Throws Error(BoundaryRegion) within 1e-6 of the crossover.
DiagonalAsymptotic rho_diagonal_asymptotic(const Trajectory& tr, int n1, int n2, const BigFloat& kappa,
                                           const BigFloat& eta);

/// Value r·√π in the unnormalized eigenfunction convention.
struct ExactGaussianValue {
  Rational r;

  BigFloat value(Precision p = kDefaultPrecision) const;
};

/// k-th order of <n2| x^{m1} (-d/dx)^{m2} |n1>: series1 carries n1 (the
/// differentiated state), series2 carries n2.
ExactGaussianValue matrix_element_exact(const PerturbationSeries& series1, const PerturbationSeries& series2, int m1,
                                        int m2, int k);

/// ∫ Q^{m1} P^{m2} e^{(n1-n2)τ} dτ over the whole trajectory.
/// Throws Error(Divergent) unless m1 + m2 ± (n1 - n2) > 0.
BigFloat matrix_element_integral(const Trajectory& tr, int n1, int n2, int m1, int m2);

/// Γ(k)/(π s∞^k) (k/s∞)^{(n1+n2+m1+m2)/2} √(k/s∞) c^{n2+1/2} ∫Q^{m1}P^{m2}e^{(n1-n2)τ}dτ.
/// Also throws Error(Divergent) for an odd total, where the exact value is zero.
SignedLog matrix_element_asymptotic(const Trajectory& tr, int n1, int n2, int m1, int m2, int k);

/// ∫ Π_i Q(τ + τ_i) e^{(n1-n2)τ} dτ.
BigFloat green_function_integral(const Trajectory& tr, int n1, int n2, const std::vector<BigFloat>& shifts);

/// The matrix-element form with Q^m replaced by Π_i Q(τ + τ_i), m2 = 0.
SignedLog green_function_asymptotic(const Trajectory& tr, int n1, int n2, int k, const std::vector<BigFloat>& shifts);

}  // namespace lopt

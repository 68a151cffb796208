#pragma once

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "lopt/potential.hpp"
#include "lopt/signed_log.hpp"

namespace lopt {

enum class Branch { Rising, Falling };

struct TurnExpansion;

std::string_view to_string(Branch b);

/// One point of the zero-energy trajectory in the inverted potential.
struct EuclideanPoint {
  Branch branch = Branch::Rising;
  BigFloat q;           ///< coordinate
  BigFloat p;           ///< velocity dQ/dτ, +√(2V) rising, -√(2V) falling
  BigFloat tau;         ///< euclidean time
  BigFloat s;           ///< accumulated action
  BigFloat lambda;      ///< area variable s - QP/2
  BigFloat lambda_dot;  ///< V - (Q/2) V'
  BigFloat xi;          ///< Q / √λ
  BigFloat a;           ///< s/λ + ln λ - 1
};

struct EuclideanConstants {
  BigFloat q_plus;
  BigFloat s_infinity;  ///< full action 2∫_0^{Q+} √(2V)
  BigFloat tau_turn;    ///< τ at Q+
  BigFloat log_c;       ///< 2 τ_turn
  BigFloat c;           ///< exp(log_c); τ_fall(Q) = ln c - τ_rise(Q)
};

/// Q+, s(+∞), τ at the turning point and c, by regularized quadrature.
EuclideanConstants euclidean_constants(const Potential& pot, Precision p = kDefaultPrecision);

/// Value of the scaled-argument asymptotic form for Ψ_{n,k}(ξ√k).
struct AsymptoticValue {
  SignedLog value;
  /// kξ^2 < 4: outside the regime where the form is reliable.
  bool small_argument = false;
};

/// The trajectory parameterized by Q on its rising and falling branches,
/// with a sampled grid used to invert τ and ξ.
///
/// All methods are const and thread-compatible.
class Trajectory {
 public:
  static constexpr int kGridPerBranch = 512;
  /// Smallest grid coordinate as a fraction of Q+.
  static constexpr double kGridFloor = 1e-6;

  explicit Trajectory(const Potential& pot, Precision p = kDefaultPrecision);

  const Potential& potential() const { return pot_; }
  const EuclideanConstants& constants() const { return consts_; }
  Precision precision() const { return prec_; }

  /// 0 < q <= Q+. Throws Error(OutOfRange) otherwise.
  EuclideanPoint point_by_q(const BigFloat& q, Branch branch) const;
  /// Any finite τ.
  EuclideanPoint point_by_tau(const BigFloat& tau) const;
  /// ξ inside the sampled range. Throws Error(OutOfRange) outside it and
  /// Error(NotMonotone) when ξ has more than one preimage.
  EuclideanPoint point_by_xi(const BigFloat& xi) const;

  /// ξ at the first and last grid samples.
  const BigFloat& xi_max() const { return grid_.front().xi; }
  const BigFloat& xi_min() const { return grid_.back().xi; }

  /// A(ξ) for ξ >= 0. Uses ln s(+∞) at ξ = 0 and the boundary form
  /// ξ²/2 - ln(-a4 ξ⁴/4) - 2 above the sampled range.
  BigFloat exponent_A(const BigFloat& xi) const;

  /// e^{(n+1/2)τ} λ^{(1-n)/2} / (2π √(Qλ̇/2 - λQ̇)); for n = 0 this is M(ξ).
  /// The full asymptotic form equals M_n (k-1)! k^{n/2} e^{-kA}.
  /// Throws Error(NegativeRadicand) if Qλ̇/2 - λQ̇ <= 0.
  BigFloat prefactor_M(int n, const BigFloat& xi) const;
  /// The same prefactor at a known trajectory point, without inverting ξ.
  BigFloat prefactor_at(int n, const EuclideanPoint& pt) const;

  /// e^{(n+1/2)τ} / √(Qλ̇/2 - λQ̇) · k!/(2π√k) · (k/λ)^{(n-1)/2} · e^{-kA(ξ)}.
  AsymptoticValue wave_asymptotic(int n, int k, const BigFloat& xi) const;

  /// Small-ξ form e^{kξ²/2}/(ξ√k)^{n+1} · c^{n+1/2}/(2π) · k! k^{n-1/2} / s∞^{k+n+1/2}.
  SignedLog small_xi_asymptotic(int n, int k, const BigFloat& xi) const;

  /// S(κ, η) = κ (s/λ + ln(λ/κ)) at the point with ξ = η/√κ.
  BigFloat action_S(const BigFloat& kappa, const BigFloat& eta) const;

  /// The grid points in trajectory order: rising with increasing Q, the
  /// turning point, then falling with decreasing Q.
  const std::vector<EuclideanPoint>& samples() const { return grid_; }

  /// (κ, η) = (λ e^{-p_κ}, Q e^{-p_κ/2}) along the sampled trajectory.
  std::vector<std::pair<BigFloat, BigFloat>> kappa_eta_curve(const BigFloat& p_kappa) const;

 private:
  struct RisingIntegrals {
    BigFloat tau;
    BigFloat lambda;
  };

  // Points with q < Q+/2 are located by q, the others by u = √(Q+ - q),
  // which keeps full relative precision next to the turning point.
  RisingIntegrals rising_at(const BigFloat& q) const;
  RisingIntegrals rising_at_u(const BigFloat& u) const;
  BigFloat speed_at_u(const BigFloat& u) const;
  EuclideanPoint point_at_u(const BigFloat& u, Branch branch) const;
  EuclideanPoint lower_point(const BigFloat& q, Branch branch) const;
  EuclideanPoint assemble(const BigFloat& q, Branch branch, const RisingIntegrals& r, const BigFloat& speed) const;
  EuclideanPoint refine_on_segment(std::size_t i, const BigFloat& target, bool by_xi) const;

  Potential pot_;
  Precision prec_;
  EuclideanConstants consts_;
  std::shared_ptr<const TurnExpansion> turn_;
  std::vector<BigFloat> nodes_;             ///< rising-branch Q nodes, ascending, last = Q+
  std::vector<BigFloat> node_u_;            ///< √(Q+ - q) at nodes_
  std::vector<RisingIntegrals> node_vals_;  ///< integrals at nodes_
  std::vector<EuclideanPoint> grid_;
};

}  // namespace lopt

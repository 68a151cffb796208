#include "lopt/euclidean.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lopt/errors.hpp"
#include "lopt/quadrature.hpp"
#include "lopt/roots.hpp"

namespace lopt {

std::string_view to_string(Branch b) { return b == Branch::Rising ? "rising" : "falling"; }

namespace {

constexpr int kLowerNodes = Trajectory::kGridPerBranch / 2;

QuadratureOptions segment_options(Precision p) {
  QuadratureOptions o;
  o.abs_tol = ldexp(BigFloat(1, p), -2 * p.bits);
  o.rel_tol = std::ldexp(1.0, -static_cast<int>(p.bits - 12));
  o.max_panels = 4096;
  return o;
}

// The integrands, written through w = 2V/q^2 = 1 + q h(q) so that nothing
// cancels near q = 0.
struct Integrands {
  const Potential& pot;

  BigFloat w(const BigFloat& q) const { return 1 + q * pot.reduced_excess(q); }

  // 1/√(2V) - 1/q
  BigFloat tau_regular(const BigFloat& q) const {
    const BigFloat h = pot.reduced_excess(q);
    const BigFloat rw = sqrt(max(1 + q * h, BigFloat(0, q.precision())));
    return -h / (rw * (1 + rw));
  }
  // dτ/dq = 1/√(2V)
  BigFloat tau_rate(const BigFloat& q) const { return 1 / (q * sqrt(w(q))); }
  // dλ/dq = (V - qV'/2)/√(2V)
  BigFloat lambda_rate(const BigFloat& q) const {
    BigFloat rate(0, q.precision());
    for (const auto& [deg, a] : pot.coefficients()) rate += BigFloat(a, q.precision()) * pow(q, deg) * (1 - deg / 2);
    return rate / (q * sqrt(w(q)));
  }
  // ds/dq = √(2V)
  BigFloat action_rate(const BigFloat& q) const {
    return q * sqrt(max(w(q), BigFloat(0, q.precision())));
  }
};

BigFloat lower_integral(const RealFunction& f, const BigFloat& a, const BigFloat& b, Precision p) {
  return integrate_regularized(f, a, b, EndpointSingularity::None, segment_options(p)).value;
}

}  // namespace

// w(Q+ - t) = t W1(t) with the constant Taylor term dropped, so that the
// vanishing of V at Q+ is exact and 1/√(2V) has no rounding kink there.
struct TurnExpansion {
  BigFloat q_plus;
  std::vector<BigFloat> w1;  ///< coefficients of W1 in powers of t

  TurnExpansion(const Potential& pot, const BigFloat& qp) : q_plus(qp) {
    const Precision p = qp.precision();
    std::vector<BigFloat> coef(static_cast<std::size_t>(pot.max_degree() - 1), BigFloat(0, p));
    coef[0] = BigFloat(1, p);
    for (const auto& [deg, a] : pot.coefficients()) coef[static_cast<std::size_t>(deg - 2)] = BigFloat(a, p) * 2;
    // Repeated synthetic division gives the Taylor coefficients at Q+.
    std::vector<BigFloat> taylor;
    while (!coef.empty()) {
      BigFloat r(0, p);
      std::vector<BigFloat> quotient(coef.size() > 1 ? coef.size() - 1 : 0, BigFloat(0, p));
      for (std::size_t i = coef.size(); i-- > 0;) {
        r = r * qp + coef[i];
        if (i > 0) quotient[i - 1] = r;
      }
      taylor.push_back(r);
      coef = std::move(quotient);
    }
    // w(Q+ - t) = sum_m taylor[m] (-t)^m, taylor[0] = 0 by definition of Q+.
    for (std::size_t m = 1; m < taylor.size(); ++m) w1.push_back(m % 2 == 1 ? -taylor[m] : taylor[m]);
  }

  BigFloat eval(const BigFloat& t) const {
    BigFloat acc(0, t.precision());
    for (std::size_t i = w1.size(); i-- > 0;) acc = acc * t + w1[i];
    return acc;
  }
};

namespace {

enum class Rate { Tau, TauRegular, Lambda, Action };

// ∫ f dq over q in [Q+ - u_hi^2, Q+ - u_lo^2], taken in u = √(Q+ - q). With
// q = Q+ - u^2 and 2V = q^2 u^2 W1(u^2) every integrand below is smooth in u.
BigFloat upper_integral(const Potential& pot, const TurnExpansion& te, Rate rate, const BigFloat& u_lo,
                        const BigFloat& u_hi, Precision p) {
  const BigFloat& qp = te.q_plus;
  const auto g = [&](const BigFloat& u) {
    const BigFloat t = u * u;
    const BigFloat q = qp - t;
    const BigFloat root = sqrt(te.eval(t));
    switch (rate) {
      case Rate::Tau:
        return 2 / (q * root);
      case Rate::TauRegular:
        return 2 / (q * root) - u * 2 / q;
      case Rate::Lambda:
        return pot.values(q).lambda_rate * 2 / (q * root);
      case Rate::Action:
        return t * q * root * 2;
    }
    return BigFloat(0, p);
  };
  return integrate_regularized(g, u_lo, u_hi, EndpointSingularity::None, segment_options(p)).value;
}

}  // namespace

EuclideanConstants euclidean_constants(const Potential& pot, Precision p) {
  const Integrands in{pot};
  const BigFloat q_plus = pot.turning_point().at(p);
  const BigFloat half = q_plus / 2;
  const BigFloat zero(0, p);
  const auto tau_reg = [&in](const BigFloat& q) { return in.tau_regular(q); };
  const auto s_rate = [&in](const BigFloat& q) { return in.action_rate(q); };
  const TurnExpansion te(pot, q_plus);

  EuclideanConstants c;
  c.q_plus = q_plus;
  const BigFloat u_half = sqrt(q_plus - half);
  c.tau_turn = log(q_plus) + lower_integral(tau_reg, zero, half, p) +
               upper_integral(pot, te, Rate::TauRegular, zero, u_half, p);
  c.s_infinity = 2 * (lower_integral(s_rate, zero, half, p) + upper_integral(pot, te, Rate::Action, zero, u_half, p));
  c.log_c = 2 * c.tau_turn;
  c.c = exp(c.log_c);
  return c;
}

Trajectory::Trajectory(const Potential& pot, Precision p)
    : pot_(pot),
      prec_(p),
      consts_(euclidean_constants(pot, p)),
      turn_(std::make_shared<const TurnExpansion>(pot_, consts_.q_plus)) {
  const Integrands in{pot_};
  const BigFloat& q_plus = consts_.q_plus;
  const auto tau_rate = [&in](const BigFloat& q) { return in.tau_rate(q); };
  const auto lam_rate = [&in](const BigFloat& q) { return in.lambda_rate(q); };

  // Rising nodes: geometric on [floor Q+, Q+/2], then uniform in u = √(Q+ - q).
  const BigFloat q_min = q_plus * BigFloat(kGridFloor, p);
  const BigFloat half = q_plus / 2;
  const BigFloat ratio = exp(log(half / q_min) / (kLowerNodes - 1));
  nodes_.reserve(kGridPerBranch);
  node_u_.reserve(kGridPerBranch);
  for (int i = 0; i < kLowerNodes; ++i) {
    nodes_.push_back(i == kLowerNodes - 1 ? half : q_min * pow(ratio, i));
    node_u_.push_back(sqrt(q_plus - nodes_.back()));
  }
  const BigFloat u_half = node_u_.back();
  const int upper = kGridPerBranch - kLowerNodes;
  for (int j = 1; j <= upper; ++j) {
    node_u_.push_back(u_half * (upper - j) / upper);
    nodes_.push_back(q_plus - node_u_.back() * node_u_.back());
  }

  const auto tau_reg = [&in](const BigFloat& q) { return in.tau_regular(q); };
  node_vals_.reserve(nodes_.size());
  node_vals_.push_back({log(q_min) + lower_integral(tau_reg, BigFloat(0, p), q_min, p),
                        lower_integral(lam_rate, BigFloat(0, p), q_min, p)});
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const RisingIntegrals& prev = node_vals_.back();
    if (static_cast<int>(i) < kLowerNodes) {
      node_vals_.push_back({prev.tau + lower_integral(tau_rate, nodes_[i - 1], nodes_[i], p),
                            prev.lambda + lower_integral(lam_rate, nodes_[i - 1], nodes_[i], p)});
    } else {
      node_vals_.push_back({prev.tau + upper_integral(pot_, *turn_, Rate::Tau, node_u_[i], node_u_[i - 1], p),
                            prev.lambda + upper_integral(pot_, *turn_, Rate::Lambda, node_u_[i], node_u_[i - 1], p)});
    }
  }

  grid_.reserve(2 * nodes_.size() - 1);
  std::vector<BigFloat> speeds;
  speeds.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    speeds.push_back(static_cast<int>(i) < kLowerNodes ? in.action_rate(nodes_[i]) : speed_at_u(node_u_[i]));
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    grid_.push_back(assemble(nodes_[i], Branch::Rising, node_vals_[i], speeds[i]));
  }
  for (std::size_t i = nodes_.size() - 1; i-- > 0;) {
    grid_.push_back(assemble(nodes_[i], Branch::Falling, node_vals_[i], speeds[i]));
  }
}

Trajectory::RisingIntegrals Trajectory::rising_at(const BigFloat& q) const {
  const Integrands in{pot_};
  const Precision p = prec_;
  const BigFloat qw = q.at(p);
  if (qw < nodes_.front()) {
    const auto tau_reg = [&in](const BigFloat& x) { return in.tau_regular(x); };
    const auto lam_rate = [&in](const BigFloat& x) { return in.lambda_rate(x); };
    return {log(qw) + lower_integral(tau_reg, BigFloat(0, p), qw, p), lower_integral(lam_rate, BigFloat(0, p), qw, p)};
  }
  const auto it = std::upper_bound(nodes_.begin(), nodes_.begin() + kLowerNodes, qw);
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (nodes_[i] == qw) return node_vals_[i];
  const auto tau_rate = [&in](const BigFloat& x) { return in.tau_rate(x); };
  const auto lam_rate = [&in](const BigFloat& x) { return in.lambda_rate(x); };
  return {node_vals_[i].tau + lower_integral(tau_rate, nodes_[i], qw, p),
          node_vals_[i].lambda + lower_integral(lam_rate, nodes_[i], qw, p)};
}

Trajectory::RisingIntegrals Trajectory::rising_at_u(const BigFloat& u) const {
  // node_u_ decreases from the middle node to 0 at Q+.
  std::size_t i = kLowerNodes - 1;
  while (i + 1 < node_u_.size() && node_u_[i + 1] >= u) ++i;
  if (node_u_[i] == u) return node_vals_[i];
  return {node_vals_[i].tau + upper_integral(pot_, *turn_, Rate::Tau, u, node_u_[i], prec_),
          node_vals_[i].lambda + upper_integral(pot_, *turn_, Rate::Lambda, u, node_u_[i], prec_)};
}

BigFloat Trajectory::speed_at_u(const BigFloat& u) const {
  const BigFloat t = u * u;
  return (consts_.q_plus - t) * u * sqrt(turn_->eval(t));
}

EuclideanPoint Trajectory::point_at_u(const BigFloat& u, Branch branch) const {
  const BigFloat uw = u.at(prec_);
  return assemble(consts_.q_plus - uw * uw, branch, rising_at_u(uw), speed_at_u(uw));
}

EuclideanPoint Trajectory::assemble(const BigFloat& q, Branch branch, const RisingIntegrals& r,
                                    const BigFloat& speed) const {
  EuclideanPoint pt;
  pt.branch = branch;
  pt.q = q.at(prec_);
  pt.lambda_dot = pot_.values(pt.q).lambda_rate;
  if (branch == Branch::Rising) {
    pt.p = speed;
    pt.tau = r.tau;
    pt.lambda = r.lambda;
  } else {
    pt.p = -speed;
    pt.tau = consts_.log_c - r.tau;
    pt.lambda = consts_.s_infinity - r.lambda;
  }
  pt.s = pt.lambda + pt.q * pt.p / 2;
  pt.xi = pt.q / sqrt(pt.lambda);
  pt.a = pt.s / pt.lambda + log(pt.lambda) - 1;
  return pt;
}

EuclideanPoint Trajectory::point_by_q(const BigFloat& q, Branch branch) const {
  if (!(q > 0) || q > consts_.q_plus) {
    throw Error(ErrorKind::OutOfRange, "Q = " + q.str(12) + " is outside (0, Q+]");
  }
  if (q >= nodes_[kLowerNodes - 1]) return point_at_u(sqrt(consts_.q_plus - q.at(prec_)), branch);
  return lower_point(q, branch);
}

EuclideanPoint Trajectory::lower_point(const BigFloat& q, Branch branch) const {
  const Integrands in{pot_};
  const BigFloat qw = q.at(prec_);
  return assemble(qw, branch, rising_at(qw), in.action_rate(qw));
}

EuclideanPoint Trajectory::refine_on_segment(std::size_t i, const BigFloat& target, bool by_xi) const {
  const EuclideanPoint& a = grid_[i];
  const EuclideanPoint& b = grid_[i + 1];
  const Branch branch = b.branch;
  const auto pick = [&](const EuclideanPoint& pt) { return (by_xi ? pt.xi : pt.tau) - target; };
  const BigFloat lo = min(a.q, b.q);
  const BigFloat hi = max(a.q, b.q);
  if (lo >= nodes_[kLowerNodes - 1]) {
    // Near Q+ both τ and ξ vary like √(Q+ - q); solve in u = √(Q+ - q).
    const auto f = [&](const BigFloat& u) { return pick(point_at_u(u, branch)); };
    const std::size_t ia = branch == Branch::Rising ? i : grid_.size() - 1 - i;
    const std::size_t ib = branch == Branch::Rising ? i + 1 : grid_.size() - 2 - i;
    const BigFloat u_lo = min(node_u_[ia], node_u_[ib]);
    const BigFloat u_hi = max(node_u_[ia], node_u_[ib]);
    const BigFloat u = find_root_bracketed(f, u_lo, u_hi, ldexp(u_hi, -(prec_.bits - 8)));
    return point_at_u(u, branch);
  }
  const auto f = [&](const BigFloat& q) { return pick(lower_point(q, branch)); };
  const BigFloat q = find_root_bracketed(f, lo, hi, ldexp(hi, -(prec_.bits - 8)));
  return lower_point(q, branch);
}

EuclideanPoint Trajectory::point_by_tau(const BigFloat& tau) const {
  if (!tau.is_finite()) throw Error(ErrorKind::InvalidArgument, "τ must be finite");
  const BigFloat t = tau.at(prec_);
  const bool before = t < grid_.front().tau;
  const bool after = t > grid_.back().tau;
  if (before || after) {
    // Below the grid floor τ_rise(Q) = ln Q + O(Q^2).
    const Branch branch = before ? Branch::Rising : Branch::Falling;
    const BigFloat rise_target = before ? t : consts_.log_c - t;
    const BigFloat offset = node_vals_.front().tau - log(nodes_.front());
    const BigFloat guess = exp(rise_target - offset);
    const auto f = [&](const BigFloat& q) { return rising_at(q).tau - rise_target; };
    const BigFloat q = find_root_bracketed(f, guess / 2, min(guess * 2, nodes_.front()),
                                           ldexp(guess, -(prec_.bits - 8)));
    return lower_point(q, branch);
  }
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t,
                                   [](const BigFloat& v, const EuclideanPoint& pt) { return v < pt.tau; });
  std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  i = i == 0 ? 0 : i - 1;
  if (grid_[i].tau == t) return grid_[i];
  if (i + 1 >= grid_.size()) return grid_.back();
  return refine_on_segment(i, t, false);
}

EuclideanPoint Trajectory::point_by_xi(const BigFloat& xi) const {
  const BigFloat t = xi.at(prec_);
  if (t > xi_max() || t < xi_min()) {
    throw Error(ErrorKind::OutOfRange,
                "ξ = " + xi.str(12) + " is outside the sampled range [" + xi_min().str(6) + ", " + xi_max().str(6) + "]");
  }
  std::vector<std::size_t> crossings;
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    const int sa = (grid_[i].xi - t).sign();
    const int sb = (grid_[i + 1].xi - t).sign();
    if (sa == 0) {
      if (crossings.empty() || crossings.back() + 1 != i) crossings.push_back(i);
    } else if (sa * sb < 0) {
      crossings.push_back(i);
    }
  }
  const std::size_t last = grid_.size() - 1;
  if (grid_[last].xi == t && (crossings.empty() || crossings.back() + 1 != last)) crossings.push_back(last);
  if (crossings.size() != 1) {
    throw Error(ErrorKind::NotMonotone, "ξ = " + xi.str(12) + " has " + std::to_string(crossings.size()) +
                                            " preimages on the trajectory");
  }
  const std::size_t i = crossings.front();
  const std::size_t from = i == 0 ? 0 : i - 1;
  const std::size_t to = std::min(i + 2, grid_.size() - 1);
  for (std::size_t j = from; j < to; ++j) {
    if (!(grid_[j + 1].xi < grid_[j].xi)) {
      throw Error(ErrorKind::NotMonotone, "ξ is not monotone near " + xi.str(12));
    }
  }
  if (grid_[i].xi == t) return grid_[i];
  return refine_on_segment(i, t, true);
}

BigFloat Trajectory::exponent_A(const BigFloat& xi) const {
  if (xi.sign() < 0) throw Error(ErrorKind::InvalidArgument, "ξ must be non-negative");
  if (xi.is_zero()) return log(consts_.s_infinity);
  if (xi > xi_max()) {
    const BigFloat x = xi.at(prec_);
    const BigFloat x2 = x * x;
    return x2 / 2 - log(-BigFloat(pot_.a4(), prec_) * x2 * x2 / 4) - 2;
  }
  return point_by_xi(xi).a;
}

BigFloat Trajectory::prefactor_M(int n, const BigFloat& xi) const { return prefactor_at(n, point_by_xi(xi)); }

BigFloat Trajectory::prefactor_at(int n, const EuclideanPoint& pt) const {
  const BigFloat d = pt.q * pt.lambda_dot / 2 - pt.lambda * pt.p;
  if (!(d > 0)) throw Error(ErrorKind::NegativeRadicand, "Qλ̇/2 - λQ̇ = " + d.str(6) + " at ξ = " + pt.xi.str(12));
  const BigFloat lam_pow = exp(log(pt.lambda) * (1 - n) / 2);
  return exp(pt.tau * (2 * n + 1) / 2) * lam_pow / (2 * pi(prec_) * sqrt(d));
}

AsymptoticValue Trajectory::wave_asymptotic(int n, int k, const BigFloat& xi) const {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "the asymptotic form needs k >= 1");
  const EuclideanPoint pt = point_by_xi(xi);
  const BigFloat d = pt.q * pt.lambda_dot / 2 - pt.lambda * pt.p;
  if (!(d > 0)) throw Error(ErrorKind::NegativeRadicand, "Qλ̇/2 - λQ̇ = " + d.str(6) + " at ξ = " + xi.str(12));
  const Precision p = prec_;
  const BigFloat lk = log(BigFloat(k, p));
  BigFloat lg = pt.tau * (2 * n + 1) / 2 - log(d) / 2 + log_factorial(static_cast<unsigned long>(k), p) -
                log(2 * pi(p)) - lk / 2 + (lk - log(pt.lambda)) * (n - 1) / 2 - pt.a * k;
  AsymptoticValue r;
  r.value = SignedLog(1, std::move(lg));
  r.small_argument = xi.at(p) * xi.at(p) * k < 4;
  return r;
}

SignedLog Trajectory::small_xi_asymptotic(int n, int k, const BigFloat& xi) const {
  if (k < 1 || !(xi > 0)) throw Error(ErrorKind::InvalidArgument, "the small-ξ form needs k >= 1 and ξ > 0");
  const Precision p = prec_;
  const BigFloat x = xi.at(p);
  const BigFloat lk = log(BigFloat(k, p));
  BigFloat lg = x * x * k / 2 - (log(x) + lk / 2) * (n + 1) + consts_.log_c * (2 * n + 1) / 2 - log(2 * pi(p)) +
                log_factorial(static_cast<unsigned long>(k), p) + lk * (2 * n - 1) / 2 -
                log(consts_.s_infinity) * (2 * (k + n) + 1) / 2;
  return SignedLog(1, std::move(lg));
}

BigFloat Trajectory::action_S(const BigFloat& kappa, const BigFloat& eta) const {
  if (!(kappa > 0) || !(eta > 0)) throw Error(ErrorKind::InvalidArgument, "κ and η must be positive");
  const EuclideanPoint pt = point_by_xi(eta / sqrt(kappa));
  return kappa * (pt.s / pt.lambda + log(pt.lambda / kappa));
}

std::vector<std::pair<BigFloat, BigFloat>> Trajectory::kappa_eta_curve(const BigFloat& p_kappa) const {
  const BigFloat pk = p_kappa.at(prec_);
  const BigFloat k_scale = exp(-pk);
  const BigFloat e_scale = exp(-pk / 2);
  std::vector<std::pair<BigFloat, BigFloat>> rows;
  rows.reserve(grid_.size());
  for (const EuclideanPoint& pt : grid_) rows.emplace_back(pt.lambda * k_scale, pt.q * e_scale);
  return rows;
}

}  // namespace lopt

#include "lopt/density.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "lopt/errors.hpp"
#include "lopt/quadrature.hpp"
#include "lopt/roots.hpp"

namespace lopt {

namespace {

Rational poly_at(const WaveOrder& w, const Rational& x) {
  const Rational x2 = x * x;
  Rational acc = 0;
  for (auto it = w.coeffs.rbegin(); it != w.coeffs.rend(); ++it) acc = acc * x2 + *it;
  if (w.level % 2 != 0) acc *= x;
  return acc;
}

const WaveOrder& order_of(const PerturbationSeries& s, int k) {
  if (k < 0 || k > s.max_order()) throw Error(ErrorKind::OutOfRange, "order " + std::to_string(k) + " was not computed");
  return s.orders[static_cast<std::size_t>(k)];
}

}  // namespace

SignedLog RhoOrderExact::value(Precision p) const {
  if (polynomial == 0) return SignedLog::zero(p);
  return SignedLog::from_rational(polynomial, p) * SignedLog(1, BigFloat(exponent, p));
}

RhoOrderExact rho_order_exact(const PerturbationSeries& series1, const PerturbationSeries& series2, int k,
                              const Rational& x1, const Rational& x2) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "order must be non-negative");
  RhoOrderExact out{0, -(x1 * x1 + x2 * x2) / 2};
  for (int m = 0; m <= k; ++m) out.polynomial += poly_at(order_of(series1, m), x1) * poly_at(order_of(series2, k - m), x2);
  return out;
}

namespace {

struct SaddleCandidate {
  DensitySaddle saddle;
  BigFloat single_gamma;
};

BigFloat radicand(const EuclideanPoint& pt) { return pt.q * pt.lambda_dot / 2 - pt.lambda * pt.p; }

// e^{-(n1+n2-1)p/2} e^{(n1+1/2)τ1 + (n2+1/2)τ2} / √(2π D)
BigFloat saddle_gamma(int n1, int n2, const BigFloat& p, const BigFloat& tau1, const BigFloat& tau2,
                      const BigFloat& d) {
  const Precision pr = p.precision();
  const BigFloat half = BigFloat(1, pr) / 2;
  const BigFloat lg = -p * (n1 + n2 - 1) / 2 + tau1 * (BigFloat(n1, pr) + half) + tau2 * (BigFloat(n2, pr) + half) -
                      log(pi(pr) * 2 * d) / 2;
  return exp(lg);
}

std::optional<SaddleCandidate> solve_assignment(const Trajectory& tr, int n1, int n2, const BigFloat& kappa,
                                                const BigFloat& eta1, const BigFloat& eta2, Branch b1, Branch b2) {
  const Precision pr = tr.precision();
  const BigFloat qp = tr.constants().q_plus;
  const BigFloat p_max = log(qp / max(eta1, eta2)) * 2;
  const auto points = [&](const BigFloat& p) {
    const BigFloat scale = exp(p / 2);
    return std::pair{tr.point_by_q(min(eta1 * scale, qp), b1), tr.point_by_q(min(eta2 * scale, qp), b2)};
  };
  const auto residual = [&](const BigFloat& p) {
    const auto [a, b] = points(p);
    return (a.lambda + b.lambda) * exp(-p) - kappa;
  };
  // samples crowd toward p_max, where Q_i approaches Q+ like a square root
  constexpr int kSamples = 160;
  constexpr double kSpan = 60.0;
  std::vector<BigFloat> ps;
  std::vector<BigFloat> fs;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = kSpan * (static_cast<double>(i) / kSamples) * (static_cast<double>(i) / kSamples);
    ps.push_back(p_max - BigFloat(t, pr));
    fs.push_back(residual(ps.back()));
  }
  std::optional<SaddleCandidate> best;
  for (int i = 0; i < kSamples; ++i) {
    if (fs[i].sign() * fs[i + 1].sign() > 0) continue;
    const BigFloat p = fs[i].is_zero() ? ps[i] : find_root_bracketed(residual, ps[i + 1], ps[i], ldexp(BigFloat(1, pr), -(pr.bits - 12)));
    const auto [a, b] = points(p);
    const BigFloat ep = exp(-p);
    const BigFloat tol(1e-9, pr);
    if (abs((a.lambda + b.lambda) * ep - kappa) > tol || abs(a.q * exp(-p / 2) - eta1) > tol ||
        abs(b.q * exp(-p / 2) - eta2) > tol) {
      continue;
    }
    const BigFloat d1a = radicand(a), d1b = radicand(b);
    const BigFloat d = a.p * d1b + b.p * d1a;
    if (d1a.sign() <= 0 || d1b.sign() <= 0 || d.sign() <= 0) continue;
    SaddleCandidate c;
    c.saddle.p_kappa = p;
    c.saddle.tau_1 = a.tau;
    c.saddle.tau_2 = b.tau;
    c.saddle.branch_1 = b1;
    c.saddle.branch_2 = b2;
    c.saddle.b0 = (a.s + b.s + (a.lambda + b.lambda) * p) * ep;
    c.saddle.b_second = exp(p) * d / (d1a * d1b);
    c.single_gamma = saddle_gamma(n1, n2, p, a.tau, b.tau, d);
    c.saddle.gamma = c.single_gamma;
    if (!best || c.saddle.b0 < best->saddle.b0) best = std::move(c);
  }
  return best;
}

}  // namespace

DensitySaddle rho_saddle(const Trajectory& tr, int n1, int n2, const BigFloat& kappa, const BigFloat& eta1,
                         const BigFloat& eta2) {
  if (kappa.sign() <= 0 || eta1.sign() <= 0 || eta2.sign() <= 0) {
    throw Error(ErrorKind::InvalidArgument, "κ and η must be positive");
  }
  const Precision pr = tr.precision();
  std::vector<SaddleCandidate> found;
  for (auto [b1, b2] : {std::pair{Branch::Rising, Branch::Rising}, std::pair{Branch::Rising, Branch::Falling},
                        std::pair{Branch::Falling, Branch::Rising}}) {
    if (auto c = solve_assignment(tr, n1, n2, kappa.at(pr), eta1.at(pr), eta2.at(pr), b1, b2)) found.push_back(*c);
  }
  if (found.empty()) {
    throw Error(ErrorKind::NoSaddle, "no branch assignment gives a minimum for κ = " + kappa.str(10) +
                                         ", η = (" + eta1.str(10) + ", " + eta2.str(10) + ")");
  }
  std::sort(found.begin(), found.end(),
            [](const SaddleCandidate& a, const SaddleCandidate& b) { return a.saddle.b0 < b.saddle.b0; });
  DensitySaddle out = found.front().saddle;
  const BigFloat same = ldexp(abs(out.b0) + 1, -(pr.bits / 2));
  for (std::size_t i = 1; i < found.size(); ++i) {
    if (abs(found[i].saddle.b0 - out.b0) <= same) {
      out.degenerate_pair = true;
      out.gamma += found[i].single_gamma;
    }
  }
  return out;
}

SignedLog rho_asymptotic(const Trajectory& tr, int n1, int n2, int k, const BigFloat& x1, const BigFloat& x2) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "order must be >= 1");
  const Precision pr = tr.precision();
  const BigFloat rk = sqrt(BigFloat(k, pr));
  const DensitySaddle s = rho_saddle(tr, n1, n2, BigFloat(1, pr), abs(x1.at(pr)) / rk, abs(x2.at(pr)) / rk);
  const BigFloat lk = log(BigFloat(k, pr));
  const BigFloat lg = lk * (BigFloat(k, pr) + BigFloat(n1 + n2 - 1, pr) / 2) - s.b0 * k + log(s.gamma);
  // odd levels carry the sign of their argument
  int sign = 1;
  if (n1 % 2 != 0 && x1.sign() < 0) sign = -sign;
  if (n2 % 2 != 0 && x2.sign() < 0) sign = -sign;
  return SignedLog(sign, lg);
}

DiagonalAsymptotic rho_diagonal_asymptotic(const Trajectory& tr, int n1, int n2, const BigFloat& kappa,
                                           const BigFloat& eta) {
  if (kappa.sign() <= 0 || eta.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "κ and η must be positive");
  const Precision pr = tr.precision();
  const EuclideanConstants& c = tr.constants();
  const BigFloat k = kappa.at(pr);
  const BigFloat ratio = eta.at(pr) / sqrt(k);
  const BigFloat edge = c.q_plus / sqrt(c.s_infinity);
  if (abs(ratio - edge) < BigFloat(1e-6, pr)) {
    throw Error(ErrorKind::BoundaryRegion, "η/√κ = " + ratio.str(12) + " is at the crossover " + edge.str(12));
  }
  const BigFloat half = BigFloat(1, pr) / 2;
  const int nn = n1 + n2;
  DiagonalAsymptotic out;
  if (ratio > edge) {
    // τ1 = τ2 = τ with η/√κ = Q/√(2λ), i.e. ξ = √2 η/√κ on the rising branch
    const EuclideanPoint pt = tr.point_by_xi(ratio * sqrt(BigFloat(2, pr)));
    out.region = DiagonalRegion::A;
    out.b = k * (pt.s / pt.lambda + log(pt.lambda * 2 / k));
    const BigFloat d1 = radicand(pt);
    out.gamma = exp(log(k / (pt.lambda * 2)) * (nn - 1) / 2 + pt.tau * (nn + 1) - log(pi(pr) * 2) / 2 -
                    log(pt.p * d1 * 2) / 2);
    return out;
  }
  // split pair: Q(τ1) = Q(τ2) = η √(s∞/κ), τ2 = ln c - τ1, two mirror minima
  const EuclideanPoint rise = tr.point_by_q(ratio * sqrt(c.s_infinity), Branch::Rising);
  const BigFloat tau1 = rise.tau;
  const BigFloat tau2 = c.log_c - tau1;
  out.region = DiagonalRegion::B;
  out.b = k * (1 + log(c.s_infinity / k));
  const BigFloat pair = exp(tau1 * (BigFloat(n1, pr) + half) + tau2 * (BigFloat(n2, pr) + half)) +
                        exp(tau2 * (BigFloat(n1, pr) + half) + tau1 * (BigFloat(n2, pr) + half));
  out.gamma = exp(log(k / c.s_infinity) * (nn - 1) / 2) * pair / (sqrt(pi(pr) * 2 * c.s_infinity) * rise.p);
  return out;
}

BigFloat ExactGaussianValue::value(Precision p) const { return BigFloat(r, p) * sqrt(pi(p)); }

namespace {

using Poly = std::vector<Rational>;

Poly dense(const WaveOrder& w) {
  Poly out(static_cast<std::size_t>(w.degree()) + 1, Rational(0));
  for (int l = 0; l <= w.degree(); ++l) out[static_cast<std::size_t>(l)] = w.coeff(l);
  return out;
}

// (-d/dx)(P e^{-x²/2}) = (xP - P') e^{-x²/2}
Poly minus_derivative(const Poly& p) {
  Poly out(p.size() + 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + 1] += p[i];
    if (i > 0) out[i - 1] -= p[i] * static_cast<long>(i);
  }
  return out;
}

// ∫ x^d e^{-x²} dx / √π = (d-1)!!/2^{d/2} for even d
Rational gaussian_moment(int d) {
  if (d % 2 != 0) return 0;
  return Rational(double_factorial_odd(static_cast<unsigned long>(d / 2)), mpz_class(1) << (d / 2));
}

}  // namespace

ExactGaussianValue matrix_element_exact(const PerturbationSeries& series1, const PerturbationSeries& series2, int m1,
                                        int m2, int k) {
  if (m1 < 0 || m2 < 0 || k < 0) throw Error(ErrorKind::InvalidArgument, "powers and order must be non-negative");
  std::vector<Rational> moments;
  const auto moment = [&moments](int d) -> const Rational& {
    while (static_cast<int>(moments.size()) <= d) moments.push_back(gaussian_moment(static_cast<int>(moments.size())));
    return moments[static_cast<std::size_t>(d)];
  };
  Rational total = 0;
  for (int j = 0; j <= k; ++j) {
    const Poly bra = dense(order_of(series2, j));
    Poly ket = dense(order_of(series1, k - j));
    for (int t = 0; t < m2; ++t) ket = minus_derivative(ket);
    for (std::size_t a = 0; a < bra.size(); ++a) {
      if (bra[a] == 0) continue;
      Rational inner = 0;
      for (std::size_t b = 0; b < ket.size(); ++b) {
        if (ket[b] == 0) continue;
        const int d = static_cast<int>(a + b) + m1;
        if (d % 2 == 0) inner += ket[b] * moment(d);
      }
      total += bra[a] * inner;
    }
  }
  return {total};
}

namespace {

void check_convergence(int n1, int n2, int m) {
  const int d = n1 - n2;
  if (m + d <= 0 || m - d <= 0) {
    throw Error(ErrorKind::Divergent, "the τ integral diverges: m = " + std::to_string(m) +
                                          ", n1 - n2 = " + std::to_string(d));
  }
}

QuadratureOptions integral_options(Precision p) {
  QuadratureOptions o;
  o.abs_tol = ldexp(BigFloat(1, p), -static_cast<long>(p.bits));
  o.rel_tol = std::ldexp(1.0, -std::min(80, static_cast<int>(p.bits) - 24));
  return o;
}

}  // namespace

BigFloat matrix_element_integral(const Trajectory& tr, int n1, int n2, int m1, int m2) {
  if (m1 < 0 || m2 < 0) throw Error(ErrorKind::InvalidArgument, "powers must be non-negative");
  check_convergence(n1, n2, m1 + m2);
  const Precision pr = tr.precision();
  const EuclideanConstants& c = tr.constants();
  const int d = n1 - n2;
  const BigFloat cd = exp(c.log_c * d);
  const int mirror = m2 % 2 == 0 ? 1 : -1;
  // both branches at once: dτ = dQ/|P|, τ_fall = ln c - τ_rise, P_fall = -P_rise
  const auto f = [&](const BigFloat& q) {
    const EuclideanPoint pt = tr.point_by_q(q, Branch::Rising);
    const BigFloat ed = exp(pt.tau * d);
    return pow(q, m1) * pow(pt.p, m2 - 1) * (ed + cd / ed * mirror);
  };
  const BigFloat half = c.q_plus / 2;
  const QuadratureOptions o = integral_options(pr);
  const BigFloat lower = integrate_regularized(f, BigFloat(0, pr), half, EndpointSingularity::None, o).value;
  // near Q+ the integrand is smooth in √(Q+ - q) for every m2 (τ - τ_turn is)
  const BigFloat upper = integrate_regularized(f, half, c.q_plus, EndpointSingularity::InverseSqrtAtB, o).value;
  return lower + upper;
}

namespace {

SignedLog element_scale(const Trajectory& tr, int n1, int n2, int m, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "order must be >= 1");
  const Precision pr = tr.precision();
  const EuclideanConstants& c = tr.constants();
  const BigFloat ls = log(c.s_infinity);
  const BigFloat lk = log(BigFloat(k, pr));
  const BigFloat half = BigFloat(1, pr) / 2;
  const BigFloat lg = log_factorial(static_cast<unsigned long>(k - 1), pr) - log(pi(pr)) - ls * k +
                      (lk - ls) * (BigFloat(n1 + n2 + m, pr) / 2 + half) + c.log_c * (BigFloat(n2, pr) + half);
  return SignedLog(1, lg);
}

}  // namespace

SignedLog matrix_element_asymptotic(const Trajectory& tr, int n1, int n2, int m1, int m2, int k) {
  if ((m1 + m2 + n1 + n2) % 2 != 0) {
    throw Error(ErrorKind::Divergent, "odd total m1 + m2 + n1 + n2: the exact orders vanish");
  }
  const BigFloat integral = matrix_element_integral(tr, n1, n2, m1, m2);
  return element_scale(tr, n1, n2, m1 + m2, k) * SignedLog::from_value(integral);
}

BigFloat green_function_integral(const Trajectory& tr, int n1, int n2, const std::vector<BigFloat>& shifts) {
  const int m = static_cast<int>(shifts.size());
  check_convergence(n1, n2, m);
  const Precision pr = tr.precision();
  const EuclideanConstants& c = tr.constants();
  const int d = n1 - n2;
  BigFloat lo_shift = shifts.front().at(pr), hi_shift = shifts.front().at(pr), total_shift(0, pr);
  for (const BigFloat& s : shifts) {
    lo_shift = min(lo_shift, s.at(pr));
    hi_shift = max(hi_shift, s.at(pr));
    total_shift += s.at(pr);
  }
  // Past the window every factor is on its tail, Q ~ e^τ below and c e^{-τ} above,
  // with relative corrections O(Q²) ~ e^{-2·kTail}.
  constexpr long kTail = 30;
  const BigFloat a = -BigFloat(kTail, pr) - hi_shift;
  const BigFloat b = c.log_c + kTail - lo_shift;
  const auto f = [&](const BigFloat& tau) {
    BigFloat prod = exp(tau * d);
    for (const BigFloat& s : shifts) prod *= tr.point_by_tau(tau + s).q;
    return prod;
  };
  QuadratureOptions o;
  o.abs_tol = ldexp(BigFloat(1, pr), -static_cast<long>(pr.bits));
  o.rel_tol = 1e-16;
  const BigFloat body = integrate_regularized(f, a, b, EndpointSingularity::None, o).value;
  const BigFloat left = exp(total_shift + a * (m + d)) / (m + d);
  const BigFloat right = exp(c.log_c * m - total_shift - b * (m - d)) / (m - d);
  return body + left + right;
}

SignedLog green_function_asymptotic(const Trajectory& tr, int n1, int n2, int k, const std::vector<BigFloat>& shifts) {
  const BigFloat integral = green_function_integral(tr, n1, n2, shifts);
  return element_scale(tr, n1, n2, static_cast<int>(shifts.size()), k) * SignedLog::from_value(integral);
}

}  // namespace lopt

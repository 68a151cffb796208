#include "lopt/recursion.hpp"

#include <string>

#include "lopt/errors.hpp"

namespace lopt {

Rational WaveOrder::coeff(int l) const {
  if (l < 0 || l > degree() || (l - level) % 2 != 0) return 0;
  return coeffs[static_cast<std::size_t>((l - level % 2) / 2)];
}

namespace {

// Rows of (H0 - n - 1/2)Ψ_k + Σ_p a_{2p} x^{2p} Ψ_{k-p+1} = Σ_{j>=1} E_j Ψ_{k-j},
// read off at the power x^l:
//   (l - n) B_{k,l} - (l+2)(l+1)/2 B_{k,l+2} + Σ_p a_{2p} B_{k-p+1,l-2p}
//     = Σ_{j=1}^{k} E_j B_{k-j,l}.
WaveOrder solve_order(const PerturbationSeries& s, int k, Rational& energy) {
  const int n = s.level;
  WaveOrder w{n, k, {}};
  w.coeffs.assign(static_cast<std::size_t>((w.degree() - n % 2) / 2 + 1), Rational(0));
  auto slot = [&](int l) -> Rational& { return w.coeffs[static_cast<std::size_t>((l - n % 2) / 2)]; };

  if (k == 0) {
    slot(n) = 1;
    energy = Rational(2 * n + 1, 2);
    for (int l = n - 2; l >= 0; l -= 2) {
      slot(l) = Rational((l + 2) * (l + 1), 2) * slot(l + 2) / (l - n);
    }
    return w;
  }

  for (int l = w.degree(); l >= 0; l -= 2) {
    Rational rest = Rational((l + 2) * (l + 1), 2) * w.coeff(l + 2);
    for (const auto& [deg, a] : s.potential.coefficients()) {
      const int lower = k - deg / 2 + 1;
      if (lower >= 0) rest -= a * s.orders[static_cast<std::size_t>(lower)].coeff(l - deg);
    }
    if (l == n) {
      // B_{k,n} = 0 and B_{0,n} = 1: the row fixes E_{n,k}.
      energy = -rest;
      continue;
    }
    for (int j = 1; j < k; ++j) rest += s.energies[static_cast<std::size_t>(j)] * s.orders[static_cast<std::size_t>(k - j)].coeff(l);
    if (l < n) rest += energy * s.orders[0].coeff(l);
    slot(l) = rest / (l - n);
  }
  return w;
}

}  // namespace

PerturbationSeries compute_series(const Potential& pot, int n, int K, const RecursionOptions& options) {
  if (n < 0 || K < 0) throw Error(ErrorKind::InvalidArgument, "level and order must be non-negative");
  PerturbationSeries s{n, pot, {}, {}};
  s.orders.reserve(static_cast<std::size_t>(K) + 1);
  s.energies.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    Rational e;
    WaveOrder w = solve_order(s, k, e);
    std::size_t bytes = 0;
    for (const Rational& c : w.coeffs) bytes += storage_bytes(c);
    if (bytes > options.order_budget_bytes) {
      throw Error(ErrorKind::OrderOverflow, "order " + std::to_string(k) + " needs " + std::to_string(bytes) +
                                                " bytes, budget is " + std::to_string(options.order_budget_bytes));
    }
    s.orders.push_back(std::move(w));
    s.energies.push_back(std::move(e));
  }
  return s;
}

namespace {

// States in the unnormalized oscillator basis |m) = (a†)^m |0>, (m|m) = m!.
// a†|m) = |m+1), a|m) = m |m-1), x = (a + a†)/√2.
using State = std::vector<Rational>;

State apply_ladder_sum(const State& v) {
  State r(v.size() + 1, Rational(0));
  for (std::size_t m = 0; m < v.size(); ++m) {
    if (v[m] == 0) continue;
    r[m + 1] += v[m];
    if (m > 0) r[m - 1] += v[m] * static_cast<long>(m);
  }
  return r;
}

State apply_even_power(const State& v, int power) {
  State r = v;
  for (int i = 0; i < power; ++i) r = apply_ladder_sum(r);
  const Rational scale(1, mpz_class(1) << (power / 2));
  for (auto& c : r) c *= scale;
  return r;
}

void accumulate(State& into, const State& v, const Rational& factor) {
  if (into.size() < v.size()) into.resize(v.size(), Rational(0));
  for (std::size_t m = 0; m < v.size(); ++m) into[m] += v[m] * factor;
}

Rational component(const State& v, int m) {
  return m < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(m)] : Rational(0);
}

}  // namespace

std::vector<Rational> oscillator_oracle(const Potential& pot, int n, int K) {
  if (n < 0 || K < 0 || K > 3) throw Error(ErrorKind::InvalidArgument, "oscillator oracle supports 0 <= K <= 3");
  // Intermediate normalization: the |n) component of ψ_k vanishes for k >= 1.
  std::vector<State> psi;
  psi.emplace_back(static_cast<std::size_t>(n) + 1, Rational(0));
  psi[0][static_cast<std::size_t>(n)] = 1;
  std::vector<Rational> energies{Rational(2 * n + 1, 2)};
  for (int k = 1; k <= K; ++k) {
    State coupled;
    for (const auto& [deg, a] : pot.coefficients()) {
      const int j = deg / 2 - 1;  // coupling power of this term
      if (j <= k) accumulate(coupled, apply_even_power(psi[static_cast<std::size_t>(k - j)], deg), a);
    }
    const Rational e = component(coupled, n);
    State rhs;
    accumulate(rhs, coupled, Rational(-1));
    for (int j = 1; j < k; ++j) accumulate(rhs, psi[static_cast<std::size_t>(k - j)], energies[static_cast<std::size_t>(j)]);
    State next(rhs.size(), Rational(0));
    for (std::size_t m = 0; m < rhs.size(); ++m) {
      if (static_cast<int>(m) != n) next[m] = rhs[m] / (static_cast<long>(m) - n);
    }
    psi.push_back(std::move(next));
    energies.push_back(e);
  }
  energies.erase(energies.begin());
  return energies;
}

namespace {

BigFloat evaluate_once(const WaveOrder& w, const BigFloat& x, Precision p) {
  const BigFloat xw = x.at(p);
  const BigFloat x2 = xw * xw;
  BigFloat acc(0, p);
  for (auto it = w.coeffs.rbegin(); it != w.coeffs.rend(); ++it) {
    acc *= x2;
    acc += BigFloat(*it, p);
  }
  if (w.level % 2 != 0) acc *= xw;
  return acc * exp(-x2 / 2);
}

}  // namespace

BigFloat evaluate_order(const PerturbationSeries& series, int k, const BigFloat& x, Precision p,
                        const EvalOptions& options) {
  if (k < 0 || k > series.max_order()) {
    throw Error(ErrorKind::OutOfRange, "order " + std::to_string(k) + " was not computed");
  }
  const WaveOrder& w = series.orders[static_cast<std::size_t>(k)];
  Precision wp = p;
  BigFloat prev = evaluate_once(w, x, wp);
  while (wp.bits * 2 <= p.bits * options.cap_factor) {
    wp = wp * 2;
    BigFloat next = evaluate_once(w, x, wp);
    if (agree_to_bits(prev, next, options.agreement_bits)) return next.at(p);
    prev = std::move(next);
  }
  throw Error(ErrorKind::PrecisionExhausted,
              "Ψ_{" + std::to_string(series.level) + "," + std::to_string(k) + "}(" + x.str(10) +
                  ") is unstable up to " + std::to_string(wp.bits) + " bits");
}

BigFloat convergence_profile_A(const PerturbationSeries& series, int k, const BigFloat& xi, Precision p) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "A_k needs k >= 1");
  const BigFloat x = xi.at(p + 32) * sqrt(BigFloat(k, p + 32));
  const BigFloat psi = evaluate_order(series, k, x, p + 32);
  if (psi.is_zero()) throw Error(ErrorKind::ZeroValue, "Ψ vanishes at ξ = " + xi.str(12));
  const SignedLog ratio = SignedLog::from_value(psi) / SignedLog::factorial_of(static_cast<unsigned long>(k), p + 32);
  return (-ratio.log_magnitude() / k).at(p);
}

BigFloat convergence_profile_M(const PerturbationSeries& series, int k, const BigFloat& xi,
                               const BigFloat& a_of_xi, Precision p) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "M_k needs k >= 1");
  const Precision wp = p + 32;
  const BigFloat x = xi.at(wp) * sqrt(BigFloat(k, wp));
  const BigFloat psi = evaluate_order(series, k, x, wp);
  if (psi.is_zero()) return BigFloat(0, p);
  // (k-1)! e^{-kA} in log form
  const SignedLog denom(1, log_factorial(static_cast<unsigned long>(k - 1), wp) - a_of_xi.at(wp) * k);
  return (SignedLog::from_value(psi) / denom).value().at(p);
}

BigFloat fixed_x_profile(const PerturbationSeries& series, int k, const BigFloat& x, Precision p) {
  if (series.level != 0) throw Error(ErrorKind::InvalidArgument, "the fixed-x profile is defined for n = 0");
  if (k < 1 || k > series.max_order()) throw Error(ErrorKind::OutOfRange, "order " + std::to_string(k) + " was not computed");
  const Rational b2 = series.orders[static_cast<std::size_t>(k)].coeff(2);
  if (b2 == 0) throw Error(ErrorKind::ZeroNormalizer, "B_{k,2} = 0 at k = " + std::to_string(k));
  const Precision wp = p + 32;
  return (evaluate_order(series, k, x, wp) / BigFloat(b2, wp)).at(p);
}

}  // namespace lopt

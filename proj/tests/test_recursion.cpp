#include <gtest/gtest.h>

#include <random>

#include "lopt/errors.hpp"
#include "lopt/recursion.hpp"

using namespace lopt;

namespace {

const Precision P128{128};

Potential sextic() { return Potential::validate({{4, Rational(-1)}, {6, Rational(1, 100)}}); }
Potential octic() { return Potential::validate({{4, Rational(-1, 2)}, {6, Rational(-1, 7)}, {8, Rational(1, 30)}}); }

// Exact polynomial helpers for the residual check.
Rational poly_at(const WaveOrder& w, const Rational& x) {
  Rational acc = 0, power = 1;
  for (int l = 0; l <= w.degree(); ++l) {
    acc += w.coeff(l) * power;
    power *= x;
  }
  return acc;
}

Rational derivative_at(const WaveOrder& w, const Rational& x, int times) {
  Rational acc = 0;
  for (int l = times; l <= w.degree(); ++l) {
    Rational c = w.coeff(l);
    if (c == 0) continue;
    for (int t = 0; t < times; ++t) c *= l - t;
    Rational power = 1;
    for (int t = 0; t < l - times; ++t) power *= x;
    acc += c * power;
  }
  return acc;
}

}  // namespace

TEST(Recursion, QuarticGroundStateExamples) {
  const auto s = compute_series(Potential::quartic(), 0, 2);
  EXPECT_EQ(s.energies[0], Rational(1, 2));
  EXPECT_EQ(s.energies[1], Rational(-3, 4));
  EXPECT_EQ(s.energies[2], Rational(-21, 8));
  EXPECT_EQ(s.orders[1].coeff(4), Rational(1, 4));
  EXPECT_EQ(s.orders[1].coeff(2), Rational(3, 4));
  EXPECT_EQ(s.orders[1].coeff(0), 0);
}

TEST(Recursion, OrderZero) {
  for (int n = 0; n < 6; ++n) {
    const auto s = compute_series(sextic(), n, 0);
    EXPECT_EQ(s.energies[0], Rational(2 * n + 1, 2));
    EXPECT_EQ(s.orders[0].coeff(n), 1);
  }
  // x^2 - 1/2 is the monic Hermite-type polynomial for n = 2
  const auto s2 = compute_series(Potential::quartic(), 2, 0);
  EXPECT_EQ(s2.orders[0].coeff(0), Rational(-1, 2));
}

TEST(Recursion, FirstExcitedLevel) {
  const auto s = compute_series(Potential::quartic(), 1, 1);
  EXPECT_EQ(s.energies[1], Rational(-15, 4));
}

TEST(Recursion, AgreesWithOscillatorOracle) {
  for (const Potential& pot : {Potential::quartic(), sextic(), octic()}) {
    for (int n = 0; n <= 2; ++n) {
      const auto s = compute_series(pot, n, 3);
      const auto oracle = oscillator_oracle(pot, n, 3);
      for (int k = 1; k <= 3; ++k) {
        EXPECT_EQ(s.energies[static_cast<std::size_t>(k)], oracle[static_cast<std::size_t>(k - 1)])
            << pot.describe() << " n=" << n << " k=" << k;
      }
    }
  }
}

TEST(Recursion, OracleExamples) {
  EXPECT_EQ(oscillator_oracle(Potential::quartic(), 0, 1), std::vector<Rational>{Rational(-3, 4)});
  EXPECT_EQ(oscillator_oracle(Potential::quartic(), 0, 2), (std::vector<Rational>{Rational(-3, 4), Rational(-21, 8)}));
  EXPECT_EQ(oscillator_oracle(Potential::validate({{4, Rational(-1, 2)}}), 0, 1),
            std::vector<Rational>{Rational(-3, 8)});
  EXPECT_THROW(oscillator_oracle(Potential::quartic(), 0, 4), Error);
}

TEST(Recursion, StructuralInvariants) {
  for (const Potential& pot : {Potential::quartic(), sextic(), octic()}) {
    for (int n = 0; n <= 3; ++n) {
      const auto s = compute_series(pot, n, 12);
      Rational c = 1;
      for (int k = 1; k <= 12; ++k) {
        const WaveOrder& w = s.orders[static_cast<std::size_t>(k)];
        c *= -pot.a4() / 4 / k;
        EXPECT_EQ(w.coeff(4 * k + n), c) << "leading coefficient, k=" << k;
        EXPECT_EQ(w.coeff(n), 0) << "normalization, k=" << k;
        EXPECT_EQ(w.coeff(n + 1), 0) << "parity";
        EXPECT_EQ(w.coeffs.size(), static_cast<std::size_t>((4 * k + n - n % 2) / 2 + 1));
      }
    }
  }
}

TEST(Recursion, ExactResidualVanishes) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 13);
  for (const Potential& pot : {Potential::quartic(), octic()}) {
    for (int n = 0; n <= 2; ++n) {
      const auto s = compute_series(pot, n, 5);
      for (int trial = 0; trial < 5; ++trial) {
        Rational x(num(rng), den(rng));
        x.canonicalize();
        for (int k = 1; k <= 5; ++k) {
          const WaveOrder& w = s.orders[static_cast<std::size_t>(k)];
          // e^{x^2/2} (H0 - n - 1/2) Ψ_k = -P''/2 + x P' - n P
          Rational r = -derivative_at(w, x, 2) / 2 + x * derivative_at(w, x, 1) - n * poly_at(w, x);
          for (const auto& [deg, a] : pot.coefficients()) {
            const int lower = k - deg / 2 + 1;
            if (lower < 0) continue;
            Rational xp = 1;
            for (int t = 0; t < deg; ++t) xp *= x;
            r += a * xp * poly_at(s.orders[static_cast<std::size_t>(lower)], x);
          }
          for (int j = 1; j <= k; ++j) {
            r -= s.energies[static_cast<std::size_t>(j)] * poly_at(s.orders[static_cast<std::size_t>(k - j)], x);
          }
          EXPECT_EQ(r, 0) << "n=" << n << " k=" << k << " x=" << to_string(x);
        }
      }
    }
  }
}

TEST(Recursion, LowLevelsMatchTwoTermEnergyForm) {
  // For n = 0, 1 no potential term reaches below x^n, so |E_{n,k}| equals
  // (n+1)(n+2)|B_{k,n+2}|/2.
  for (int n = 0; n <= 1; ++n) {
    const auto s = compute_series(sextic(), n, 10);
    for (int k = 1; k <= 10; ++k) {
      const Rational e = s.energies[static_cast<std::size_t>(k)];
      const Rational alt = Rational((n + 1) * (n + 2), 2) * s.orders[static_cast<std::size_t>(k)].coeff(n + 2);
      EXPECT_EQ(abs(e), abs(alt));
    }
  }
}

TEST(Recursion, OrderBudget) {
  RecursionOptions tight;
  tight.order_budget_bytes = 64;
  try {
    compute_series(Potential::quartic(), 0, 10, tight);
    FAIL() << "expected OrderOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderOverflow);
  }
}

TEST(Evaluation, Examples) {
  const auto s0 = compute_series(Potential::quartic(), 0, 3);
  EXPECT_EQ(evaluate_order(s0, 0, BigFloat(0, P128), P128), 1);
  const BigFloat v = evaluate_order(s0, 1, BigFloat(1, P128), P128);
  EXPECT_TRUE(agree_to_bits(v, exp(BigFloat(-0.5, P128)), 120));
  const auto s1 = compute_series(Potential::quartic(), 1, 6);
  for (int k = 0; k <= 6; ++k) EXPECT_TRUE(evaluate_order(s1, k, BigFloat(0, P128), P128).is_zero());
  EXPECT_THROW(evaluate_order(s0, 4, BigFloat(0, P128), P128), Error);
}

TEST(Evaluation, PrecisionCertificate) {
  const auto s = compute_series(Potential::quartic(), 0, 30);
  const BigFloat x = BigFloat(1.5, P128) * sqrt(BigFloat(30, P128));
  const BigFloat a = evaluate_order(s, 30, x, P128);
  const BigFloat b = evaluate_order(s, 30, x, Precision(256));
  EXPECT_TRUE(agree_to_bits(a, b, 100));
  // 53 bits with a cap of 1x cannot certify anything
  EvalOptions no_room;
  no_room.cap_factor = 1;
  EXPECT_THROW(evaluate_order(s, 30, x, Precision(53), no_room), Error);
}

TEST(Profiles, GroundStateA) {
  const auto s = compute_series(Potential::quartic(), 0, 30);
  EXPECT_TRUE(agree_to_bits(convergence_profile_A(s, 1, BigFloat(1, P128)), BigFloat(0.5, P128), 110));
  const BigFloat lo = convergence_profile_A(s, 30, BigFloat(1.5, P128), P128);
  const BigFloat hi = convergence_profile_A(s, 30, BigFloat(1.5, Precision(256)), Precision(256));
  EXPECT_LE(abs(lo - hi).to_double(), 1e-10);
}

TEST(Profiles, ZeroValueAndDegenerateM) {
  const auto s1 = compute_series(Potential::quartic(), 1, 3);
  try {
    convergence_profile_A(s1, 2, BigFloat(0, P128));
    FAIL() << "expected ZeroValue";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroValue);
  }
  const auto s0 = compute_series(Potential::quartic(), 0, 3);
  EXPECT_TRUE(convergence_profile_M(s0, 3, BigFloat(0, P128), BigFloat(-1, P128)).is_zero());
}

TEST(Profiles, FixedX) {
  const auto s = compute_series(Potential::quartic(), 0, 5);
  for (int k = 1; k <= 5; ++k) EXPECT_TRUE(fixed_x_profile(s, k, BigFloat(0, P128)).is_zero());
  // At k = 1 every B_{1,l} is proportional to a4, so the profile does not depend on it.
  const auto scaled = compute_series(Potential::validate({{4, Rational(-3, 7)}}), 0, 1);
  for (double x : {0.3, 1.0, 2.5}) {
    EXPECT_TRUE(agree_to_bits(fixed_x_profile(s, 1, BigFloat(x, P128)), fixed_x_profile(scaled, 1, BigFloat(x, P128)), 120));
  }
  const auto excited = compute_series(Potential::quartic(), 1, 2);
  EXPECT_THROW(fixed_x_profile(excited, 1, BigFloat(1, P128)), Error);
}

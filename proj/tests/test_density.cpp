#include <gtest/gtest.h>

#include <cmath>

#include "lopt/density.hpp"
#include "lopt/errors.hpp"

using namespace lopt;

namespace {

const Precision P128{128};

BigFloat bf(double v) { return BigFloat(v, P128); }

const Trajectory& quartic() {
  static const Trajectory t(Potential::quartic());
  return t;
}

const PerturbationSeries& ground() {
  static const PerturbationSeries s = compute_series(Potential::quartic(), 0, 40);
  return s;
}

double log_gap(const SignedLog& a, const SignedLog& b) { return (a.log_magnitude() - b.log_magnitude()).to_double(); }

}  // namespace

TEST(RhoExact, Examples) {
  const auto& s = ground();
  const auto r0 = rho_order_exact(s, s, 0, Rational(1, 2), Rational(3));
  EXPECT_EQ(r0.polynomial, 1);
  EXPECT_EQ(r0.exponent, Rational(-37, 8));
  const auto r1 = rho_order_exact(s, s, 1, Rational(1), Rational(1));
  EXPECT_EQ(r1.polynomial, 2);
  EXPECT_EQ(r1.exponent, -1);
  for (int k : {3, 8}) {
    EXPECT_EQ(rho_order_exact(s, s, k, Rational(2, 3), Rational(-5, 4)).polynomial,
              rho_order_exact(s, s, k, Rational(-5, 4), Rational(2, 3)).polynomial);
  }
  // the second factor carries the second level
  const auto s1 = compute_series(Potential::quartic(), 1, 2);
  EXPECT_EQ(rho_order_exact(s, s1, 0, Rational(1), Rational(3)).polynomial, 3);
}

TEST(RhoSaddle, SymmetricRisingRegime) {
  const auto sd = rho_saddle(quartic(), 0, 0, bf(1), bf(1.5), bf(1.5));
  EXPECT_EQ(sd.branch_1, Branch::Rising);
  EXPECT_EQ(sd.branch_2, Branch::Rising);
  EXPECT_LE(abs(sd.tau_1 - sd.tau_2).to_double(), 1e-20);
  EXPECT_GT(sd.b_second, 0);
  EXPECT_FALSE(sd.degenerate_pair);
  const auto pt = quartic().point_by_tau(sd.tau_1);
  const BigFloat ep = exp(-sd.p_kappa);
  EXPECT_LE(abs(pt.lambda * 2 * ep - 1).to_double(), 1e-9);
  EXPECT_LE(abs(pt.q * sqrt(ep) - bf(1.5)).to_double(), 1e-9);
}

TEST(RhoSaddle, SymmetricFallingRegimeSplits) {
  const auto sd = rho_saddle(quartic(), 0, 0, bf(1), bf(0.9), bf(0.9));
  EXPECT_NE(sd.branch_1, sd.branch_2);
  EXPECT_TRUE(sd.degenerate_pair);
  const auto a = quartic().point_by_tau(sd.tau_1);
  const auto b = quartic().point_by_tau(sd.tau_2);
  EXPECT_LE(abs(a.q - b.q).to_double(), 1e-20);
  EXPECT_GT(a.p * b.p * -1, 0);
  const BigFloat ep = exp(-sd.p_kappa);
  EXPECT_LE(abs((a.lambda + b.lambda) * ep - 1).to_double(), 1e-9);
  EXPECT_GT(sd.b_second, 0);
}

TEST(RhoSaddle, AsymmetricResiduals) {
  const auto sd = rho_saddle(quartic(), 1, 0, bf(0.8), bf(1.7), bf(0.6));
  const auto a = quartic().point_by_tau(sd.tau_1);
  const auto b = quartic().point_by_tau(sd.tau_2);
  const BigFloat ep = exp(-sd.p_kappa);
  EXPECT_LE(abs((a.lambda + b.lambda) * ep - bf(0.8)).to_double(), 1e-9);
  EXPECT_LE(abs(a.q * sqrt(ep) - bf(1.7)).to_double(), 1e-9);
  EXPECT_LE(abs(b.q * sqrt(ep) - bf(0.6)).to_double(), 1e-9);
  EXPECT_GT(sd.b_second, 0);
  EXPECT_THROW(rho_saddle(quartic(), 0, 0, bf(-1), bf(1), bf(1)), Error);
}

TEST(RhoDiagonal, RegionsAgreeWithSaddle) {
  const BigFloat edge = quartic().constants().q_plus / sqrt(quartic().constants().s_infinity);
  EXPECT_NEAR(edge.to_double(), std::sqrt(1.5), 1e-12);
  for (double eta : {0.6, 0.9, 1.5}) {
    for (auto [n1, n2] : {std::pair{0, 0}, std::pair{1, 2}}) {
      const auto d = rho_diagonal_asymptotic(quartic(), n1, n2, bf(1), bf(eta));
      const auto s = rho_saddle(quartic(), n1, n2, bf(1), bf(eta), bf(eta));
      EXPECT_EQ(d.region, eta > 1.3 ? DiagonalRegion::A : DiagonalRegion::B);
      EXPECT_LE(abs(d.b - s.b0).to_double(), 1e-12) << eta;
      EXPECT_LE((abs(d.gamma - s.gamma) / s.gamma).to_double(), 1e-9) << eta;
    }
  }
  // region B at κ = s∞: the log term vanishes
  const BigFloat s_inf = quartic().constants().s_infinity;
  EXPECT_LE(abs(rho_diagonal_asymptotic(quartic(), 0, 0, s_inf, bf(0.3)).b - s_inf).to_double(), 1e-30);
  const auto g12 = rho_diagonal_asymptotic(quartic(), 1, 2, bf(0.7), bf(0.5)).gamma;
  const auto g21 = rho_diagonal_asymptotic(quartic(), 2, 1, bf(0.7), bf(0.5)).gamma;
  EXPECT_LE((abs(g12 - g21) / g12).to_double(), 1e-30);
  try {
    rho_diagonal_asymptotic(quartic(), 0, 0, bf(1), edge);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundaryRegion);
  }
}

TEST(RhoAsymptotic, LaplaceConsistency) {
  // κ = 1, η = 1.5 (region A): per-order log gap small and shrinking
  double prev = 1e9;
  for (int k : {20, 30}) {
    const Rational x(mpz_class(static_cast<long>(std::llround(1.5 * std::sqrt(k) * 1e9))), mpz_class(1000000000));
    const auto exact = rho_order_exact(ground(), ground(), k, x, x).value();
    const auto asym = rho_asymptotic(quartic(), 0, 0, k, BigFloat(x, P128), BigFloat(x, P128));
    const double gap = std::abs(log_gap(exact, asym)) / k;
    EXPECT_LT(gap, 0.1) << k;
    EXPECT_LT(gap, prev) << k;
    prev = gap;
  }
  // region B: the absolute constant holds too
  for (int k : {20, 40}) {
    const Rational x(mpz_class(static_cast<long>(std::llround(0.9 * std::sqrt(k) * 1e9))), mpz_class(1000000000));
    const auto exact = rho_order_exact(ground(), ground(), k, x, x).value();
    const auto asym = rho_asymptotic(quartic(), 0, 0, k, BigFloat(x, P128), BigFloat(x, P128));
    EXPECT_LT(std::abs(log_gap(exact, asym)), 0.1) << k;
  }
}

TEST(RhoAsymptotic, RegionBGrowthAtFixedX) {
  // at fixed x, η → 0 stays in region B, where B = κ(1 + ln(s∞/κ)) does not depend on η
  const Rational x(1);
  const auto at = [&](int k) { return rho_order_exact(ground(), ground(), k, x, x).value().log_magnitude(); };
  const auto predicted = [&](int k) {
    const BigFloat eta = bf(1) / sqrt(bf(k));
    const auto d = rho_diagonal_asymptotic(quartic(), 0, 0, bf(1), eta);
    return log(bf(k)) * (bf(k) - bf(0.5)) - d.b * k;
  };
  const double exact_slope = ((at(40) - at(20)) / 20).to_double();
  const double model_slope = ((predicted(40) - predicted(20)) / 20).to_double();
  EXPECT_NEAR(exact_slope / model_slope, 1.0, 0.05);
}

TEST(MatrixElement, ExactExamples) {
  const auto& s = ground();
  EXPECT_EQ(matrix_element_exact(s, s, 2, 0, 0).r, Rational(1, 2));
  EXPECT_EQ(matrix_element_exact(s, s, 1, 1, 0).r, Rational(1, 2));
  EXPECT_EQ(matrix_element_exact(s, s, 0, 0, 0).r, 1);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(matrix_element_exact(s, s, 1, 0, k).r, 0) << k;
}

TEST(MatrixElement, ParityZeros) {
  const auto s0 = compute_series(Potential::quartic(), 0, 20);
  const auto s1 = compute_series(Potential::quartic(), 1, 20);
  for (int k = 0; k <= 20; k += 5) {
    for (int m1 = 0; m1 <= 4; ++m1) {
      for (int m2 = 0; m1 + m2 <= 4; ++m2) {
        if ((m1 + m2) % 2 != 0) {
          EXPECT_EQ(matrix_element_exact(s0, s0, m1, m2, k).r, 0);
          EXPECT_EQ(matrix_element_exact(s1, s1, m1, m2, k).r, 0);
        } else {
          EXPECT_EQ(matrix_element_exact(s0, s1, m1, m2, k).r, 0);
        }
      }
    }
  }
}

TEST(MatrixElement, IntegralClosedForm) {
  // 2∫_0^{Q+} Q dQ/√(1 - 2Q²) = 1
  EXPECT_LE(abs(matrix_element_integral(quartic(), 0, 0, 2, 0) - 1).to_double(), 1e-20);
  // ∫Q⁴dτ = 2∫Q³/√(1-2Q²) dQ = 1/3
  EXPECT_LE(abs(matrix_element_integral(quartic(), 0, 0, 4, 0) - bf(1) / 3).to_double(), 1e-20);
  EXPECT_THROW(matrix_element_integral(quartic(), 2, 0, 2, 0), Error);
  try {
    matrix_element_asymptotic(quartic(), 0, 0, 1, 0, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Divergent);
  }
}

TEST(MatrixElement, AsymptoticClosedForm) {
  // (3√6/π) 3^k k^{3/2} Γ(k)
  for (int k : {5, 30}) {
    const auto a = matrix_element_asymptotic(quartic(), 0, 0, 2, 0, k);
    const double expect = std::log(3 * std::sqrt(6.0) / M_PI) + k * std::log(3.0) + 1.5 * std::log(k) + std::lgamma(k);
    EXPECT_NEAR(a.log_magnitude().to_double(), expect, 1e-12);
    EXPECT_EQ(a.sign(), 1);
  }
}

TEST(MatrixElement, SwapSymmetry) {
  const auto& tr = quartic();
  for (int m2 : {0, 1}) {
    const int m1 = 3 - m2;  // total m1 + m2 + n1 + n2 even, and convergent
    const auto a = matrix_element_asymptotic(tr, 1, 0, m1, m2, 20);
    const auto b = matrix_element_asymptotic(tr, 0, 1, m1, m2, 20);
    EXPECT_LE(abs(a.log_magnitude() - b.log_magnitude()).to_double(), 1e-18) << m2;
    EXPECT_EQ(a.sign(), m2 % 2 == 0 ? b.sign() : -b.sign()) << m2;
  }
}

TEST(MatrixElement, RatioTrend) {
  double r20 = 0, prev = 0;
  for (int k : {20, 30, 40}) {
    const auto exact = SignedLog::from_value(matrix_element_exact(ground(), ground(), 2, 0, k).value());
    const double r = exp(SignedLog::log_ratio(exact, matrix_element_asymptotic(quartic(), 0, 0, 2, 0, k))).to_double();
    if (k == 20) r20 = r;
    if (k > 20) EXPECT_GT(r, prev) << k;
    prev = r;
  }
  EXPECT_LT(std::abs(prev - r20) / r20, 0.2);
  EXPECT_NEAR(prev, 1.0, 0.02);
}

TEST(MatrixElement, GrowthShiftLaw) {
  const auto& s = ground();
  double prev_exact = 0, prev_change = 1e9;
  for (int k : {20, 30, 39}) {
    const double r = (matrix_element_exact(s, s, 4, 0, k).value() / matrix_element_exact(s, s, 2, 0, k + 1).value()).to_double();
    const double model = exp(SignedLog::log_ratio(matrix_element_asymptotic(quartic(), 0, 0, 4, 0, k),
                                                  matrix_element_asymptotic(quartic(), 0, 0, 2, 0, k + 1)))
                             .to_double();
    EXPECT_GT(r, 0);
    EXPECT_NEAR(r / model, 1.0, 0.1) << k;
    if (prev_exact != 0) {
      EXPECT_LT(std::abs(r - prev_exact), prev_change) << k;
      prev_change = std::abs(r - prev_exact);
    }
    prev_exact = r;
  }
}

TEST(GreenFunction, ReducesToMatrixElement) {
  const auto& tr = quartic();
  const BigFloat direct = matrix_element_integral(tr, 0, 0, 2, 0);
  const BigFloat green = green_function_integral(tr, 0, 0, {bf(0), bf(0)});
  EXPECT_LE(abs(green - direct).to_double(), 1e-12);
  const auto a = green_function_asymptotic(tr, 0, 0, 25, {bf(0), bf(0)});
  const auto b = matrix_element_asymptotic(tr, 0, 0, 2, 0, 25);
  EXPECT_LE(abs(a.log_magnitude() - b.log_magnitude()).to_double(), 1e-12);
}

TEST(GreenFunction, ShiftInvarianceAndDecay) {
  const auto& tr = quartic();
  const BigFloat base = green_function_integral(tr, 0, 0, {bf(0), bf(1)});
  const BigFloat moved = green_function_integral(tr, 0, 0, {bf(0.4), bf(1.4)});
  EXPECT_LE(abs(base - moved).to_double(), 1e-8);
  double prev = 1e9;
  for (double t : {0.0, 1.0, 2.0}) {
    const double v = green_function_integral(tr, 0, 0, {bf(0), bf(t)}).to_double();
    EXPECT_LT(v, prev) << t;
    prev = v;
  }
  EXPECT_THROW(green_function_integral(tr, 1, 0, {bf(0)}), Error);
}

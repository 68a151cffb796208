#include <gtest/gtest.h>

#include <cmath>

#include "lopt/errors.hpp"
#include "lopt/euclidean.hpp"

using namespace lopt;

namespace {

const Precision P128{128};

BigFloat bf(double v) { return BigFloat(v, P128); }

const Trajectory& quartic() {
  static const Trajectory t(Potential::quartic());
  return t;
}

const Trajectory& sextic() {
  static const Trajectory t(Potential::validate({{4, Rational(-1)}, {6, Rational(1, 100)}}));
  return t;
}

}  // namespace

TEST(Constants, QuarticClosedForms) {
  const auto c = euclidean_constants(Potential::quartic());
  const BigFloat ln2 = log(BigFloat(2, P128));
  EXPECT_LE(abs(c.q_plus - 1 / sqrt(BigFloat(2, P128))).to_double(), 1e-30);
  EXPECT_LE(abs(c.s_infinity - BigFloat(1, P128) / 3).to_double(), 1e-30);
  EXPECT_LE(abs(c.c - 2).to_double(), 1e-30);
  EXPECT_LE(abs(c.tau_turn - ln2 / 2).to_double(), 1e-30);
}

TEST(Constants, ScaleWithQuarticCoupling) {
  // V = Q^2/2 + a Q^4 rescales to the reference one by Q -> Q/√(-a):
  // s∞ = 1/(-3a), c = 2/(-a).
  const Rational a(-3, 5);
  const auto c = euclidean_constants(Potential::validate({{4, a}}));
  const BigFloat ab(-a, P128);
  EXPECT_LE(abs(c.s_infinity - 1 / (ab * 3)).to_double(), 1e-30);
  EXPECT_LE(abs(c.c - 2 / ab).to_double(), 1e-29);
}

TEST(Trajectory, TurningPoint) {
  const auto pt = quartic().point_by_q(quartic().constants().q_plus, Branch::Rising);
  EXPECT_TRUE(pt.p.is_zero());
  EXPECT_LE(abs(pt.s - BigFloat(1, P128) / 6).to_double(), 1e-30);
  EXPECT_LE(abs(pt.lambda - BigFloat(1, P128) / 6).to_double(), 1e-30);
  EXPECT_LE(abs(pt.xi - sqrt(BigFloat(3, P128))).to_double(), 1e-30);
  EXPECT_LE(abs(pt.a + log(BigFloat(6, P128))).to_double(), 1e-30);
  EXPECT_LE(abs(pt.lambda_dot - BigFloat(1, P128) / 4).to_double(), 1e-30);
}

TEST(Trajectory, SmallCoordinate) {
  const auto pt = quartic().point_by_q(bf(0.02), Branch::Rising);
  EXPECT_NEAR(pt.lambda.to_double() / (std::pow(0.02, 4) / 4), 1.0, 0.01);
  EXPECT_NEAR(pt.xi.to_double(), 100.0, 1.0);
  // below the grid floor
  const auto tiny = quartic().point_by_q(bf(1e-9), Branch::Rising);
  EXPECT_NEAR(tiny.lambda.to_double() / (std::pow(1e-9, 4) / 4), 1.0, 1e-12);
  EXPECT_NEAR(tiny.tau.to_double(), std::log(1e-9), 1e-12);
}

TEST(Trajectory, Inversions) {
  const auto& tr = quartic();
  const auto ref = tr.point_by_q(bf(0.5), Branch::Rising);
  const auto back = tr.point_by_xi(ref.xi);
  EXPECT_EQ(back.branch, Branch::Rising);
  EXPECT_LE(abs(back.q - bf(0.5)).to_double(), 1e-9);
  const auto fall = tr.point_by_q(bf(0.3), Branch::Falling);
  EXPECT_LE(abs(tr.point_by_tau(fall.tau).q - fall.q).to_double(), 1e-25);
  EXPECT_LE(abs(tr.point_by_xi(fall.xi).q - fall.q).to_double(), 1e-25);
  // far tails
  const auto early = tr.point_by_tau(bf(-30));
  EXPECT_NEAR(early.q.to_double() / std::exp(-30.0), 1.0, 1e-12);
  const auto late = tr.point_by_tau(bf(40));
  EXPECT_EQ(late.branch, Branch::Falling);
  EXPECT_NEAR(late.q.to_double() / (2.0 * std::exp(-40.0)), 1.0, 1e-12);
}

TEST(Trajectory, OutOfRange) {
  EXPECT_THROW(quartic().point_by_q(bf(0.8), Branch::Rising), Error);
  EXPECT_THROW(quartic().point_by_q(bf(0), Branch::Rising), Error);
  try {
    quartic().point_by_xi(bf(1e8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
  }
}

TEST(Trajectory, ZeroEnergyAndAreaIdentity) {
  for (const Trajectory* tr : {&quartic(), &sextic()}) {
    const auto& g = tr->samples();
    for (std::size_t i = 0; i < g.size(); i += g.size() / 50) {
      const auto& pt = g[i];
      EXPECT_LE(abs(pt.p * pt.p / 2 - tr->potential().v(pt.q)).to_double(), 1e-10);
      EXPECT_LE(abs(pt.lambda - (pt.s - pt.q * pt.p / 2)).to_double(), 1e-30);
      EXPECT_GT(pt.lambda, 0);
      if (pt.branch == Branch::Falling) EXPECT_GT(pt.s, tr->constants().s_infinity / 2);
    }
  }
}

TEST(Trajectory, EquationOfMotion) {
  const auto& tr = quartic();
  const BigFloat h = bf(1e-4);
  for (double t : {-3.0, -1.0, 0.0, 0.3466, 0.8, 2.0, 4.0}) {
    const BigFloat tau = bf(t);
    const BigFloat q0 = tr.point_by_tau(tau).q;
    const BigFloat qp = tr.point_by_tau(tau + h).q;
    const BigFloat qm = tr.point_by_tau(tau - h).q;
    const BigFloat second = (qp - 2 * q0 + qm) / (h * h);
    EXPECT_LE(abs(second - tr.potential().dv(q0)).to_double(), 1e-6) << "tau=" << t;
  }
}

TEST(Trajectory, AreaRate) {
  const auto& tr = quartic();
  const BigFloat h = bf(1e-5);
  for (double t : {-2.0, 0.0, 0.5, 1.5}) {
    const auto mid = tr.point_by_tau(bf(t));
    const BigFloat rate = (tr.point_by_tau(bf(t) + h).lambda - tr.point_by_tau(bf(t) - h).lambda) / (2 * h);
    EXPECT_LE(abs(rate - mid.lambda_dot).to_double(), 1e-8);
  }
}

TEST(Trajectory, FallingAreaTendsToFullAction) {
  const auto late = quartic().point_by_tau(bf(25));
  EXPECT_LE(abs(late.lambda - quartic().constants().s_infinity).to_double(), 1e-20);
}

TEST(Trajectory, InversionAtGridNodes) {
  const auto& g = quartic().samples();
  for (std::size_t i : {std::size_t(0), std::size_t(300), std::size_t(511), std::size_t(800), g.size() - 1}) {
    const auto pt = quartic().point_by_xi(g[i].xi);
    EXPECT_EQ(pt.branch, g[i].branch) << i;
    EXPECT_LE(abs(pt.q - g[i].q).to_double(), 1e-30) << i;
  }
}

TEST(Trajectory, XiDecreasesAlongTrajectory) {
  const auto& g = quartic().samples();
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i].xi, g[i - 1].xi) << i;
}

TEST(ExponentA, Values) {
  const auto& tr = quartic();
  EXPECT_LE(abs(tr.exponent_A(sqrt(BigFloat(3, P128))) + log(BigFloat(6, P128))).to_double(), 1e-25);
  EXPECT_NEAR(tr.exponent_A(bf(0.05)).to_double(), std::log(1.0 / 3) - 0.05 * 0.05 / 2, 0.01);
  EXPECT_LE(abs(tr.exponent_A(bf(0)) - log(BigFloat(1, P128) / 3)).to_double(), 1e-30);
  const double boundary = 32.0 - std::log(std::pow(8.0, 4) / 4) - 2;
  EXPECT_NEAR(tr.exponent_A(bf(8)).to_double(), boundary, 0.01 * boundary);
  // the closed form takes over above the sampled range and joins continuously
  const BigFloat top = tr.xi_max();
  const BigFloat above = tr.exponent_A(top * (1 + ldexp(BigFloat(1, P128), -100)));
  EXPECT_LE(abs(above - tr.exponent_A(top)).to_double(), 1e-9);
  EXPECT_THROW(tr.exponent_A(bf(-1)), Error);
}

TEST(ExponentA, PositivityOfF) {
  for (const Trajectory* tr : {&quartic(), &sextic()}) {
    const BigFloat a0 = tr->exponent_A(bf(0));
    for (int i = 1; i <= 100; ++i) {
      const BigFloat xi = bf(0.04 * i);
      const BigFloat f = a0 + xi * xi / 2 - tr->exponent_A(xi);
      EXPECT_GT(f, 0) << xi.str(6);
    }
  }
}

TEST(ExponentA, ScalingLaw) {
  const auto& tr = quartic();
  const BigFloat alpha = bf(2);
  for (auto [kappa, eta] : {std::pair{0.3, 0.5}, std::pair{1.0, 1.2}, std::pair{0.05, 0.4}}) {
    const BigFloat k = bf(kappa), e = bf(eta);
    const BigFloat lhs = tr.action_S(k, e);
    const BigFloat rhs = -k * log(alpha) + alpha * tr.action_S(k / alpha, e / sqrt(alpha));
    EXPECT_LE(abs(lhs - rhs).to_double(), 1e-9);
  }
}

TEST(Asymptotic, TurningPointPrefactor) {
  const BigFloat m = quartic().prefactor_M(0, sqrt(BigFloat(3, P128)));
  EXPECT_NEAR(m.to_double(), 0.2599, 0.001);
  const double closed = 2.0 / (M_PI * std::sqrt(6.0));
  EXPECT_NEAR(m.to_double(), closed, 1e-15);
}

TEST(Asymptotic, FullFormMatchesPrefactor) {
  const auto& tr = quartic();
  for (int n : {0, 1, 2}) {
    const int k = 25;
    const BigFloat xi = bf(1.3);
    const auto v = tr.wave_asymptotic(n, k, xi);
    EXPECT_FALSE(v.small_argument);
    const BigFloat expect = log(tr.prefactor_M(n, xi)) + log_factorial(k - 1, P128) +
                            log(BigFloat(k, P128)) * n / 2 - tr.exponent_A(xi) * k;
    EXPECT_LE(abs(v.value.log_magnitude() - expect).to_double(), 1e-25);
  }
  EXPECT_TRUE(tr.wave_asymptotic(0, 2, bf(1.0)).small_argument);
}

TEST(Asymptotic, DoublingOrder) {
  const auto& tr = quartic();
  const BigFloat xi = bf(1.1);
  const int k = 20;
  const BigFloat d = tr.wave_asymptotic(0, 2 * k, xi).value.log_magnitude() - tr.wave_asymptotic(0, k, xi).value.log_magnitude();
  const BigFloat expect = log_factorial(2 * k - 1, P128) - log_factorial(k - 1, P128) - tr.exponent_A(xi) * k;
  EXPECT_LE(abs(d - expect).to_double(), 1e-9);
}

TEST(Asymptotic, SmallArgumentCrossover) {
  const auto& tr = quartic();
  for (int n : {0, 1}) {
    const auto full = tr.wave_asymptotic(n, 200, bf(0.1));
    const auto small = tr.small_xi_asymptotic(n, 200, bf(0.1));
    const double rel = std::abs((full.value.log_magnitude() - small.log_magnitude()).to_double()) /
                       std::abs(full.value.log_magnitude().to_double());
    EXPECT_LT(rel, 0.05) << "n=" << n;
  }
}

TEST(Curves, KappaEta) {
  const auto rows = quartic().kappa_eta_curve(bf(1));
  ASSERT_EQ(rows.size(), quartic().samples().size());
  const BigFloat e = exp(BigFloat(-1, P128));
  EXPECT_LE(abs(rows[511].first - quartic().samples()[511].lambda * e).to_double(), 1e-30);
}

#include <gtest/gtest.h>

#include <random>

#include "lopt/errors.hpp"
#include "lopt/potential.hpp"

using namespace lopt;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Potential, QuarticTurningPoint) {
  const Potential pot = Potential::quartic();
  EXPECT_TRUE(agree_to_bits(pot.turning_point(), 1 / sqrt(BigFloat(2, kDefaultPrecision)), 120));
  EXPECT_EQ(pot.describe(), "a4=-1");
  EXPECT_EQ(pot.max_degree(), 4);
}

TEST(Potential, SexticTurningPoint) {
  // 1/2 - y + y^2/100 = 0 at y = 50 - √2450
  const Potential pot = Potential::validate({{4, Rational(-1)}, {6, Rational(1, 100)}});
  const Precision p = kDefaultPrecision;
  const BigFloat y = 50 - sqrt(BigFloat(2450, p));
  EXPECT_TRUE(agree_to_bits(pot.turning_point(), sqrt(y), 118));
}

TEST(Potential, RejectsBadShapes) {
  EXPECT_EQ(kind_of([] { Potential::validate({{6, Rational(-1)}}); }), ErrorKind::MissingQuartic);
  EXPECT_EQ(kind_of([] { Potential::validate({{4, Rational(0)}, {6, Rational(-1)}}); }),
            ErrorKind::MissingQuartic);
  EXPECT_EQ(kind_of([] { Potential::validate({{4, Rational(1)}}); }), ErrorKind::WrongSignQuartic);
  EXPECT_EQ(kind_of([] { Potential::validate({{4, Rational(-1, 10)}, {6, Rational(1)}}); }),
            ErrorKind::NoTurningPoint);
  EXPECT_EQ(kind_of([] { Potential::validate({{4, Rational(-1)}, {5, Rational(1)}}); }),
            ErrorKind::InvalidConfig);
  // 1/2 - y + y^2/2 = (1 - y)^2 / 2 touches zero without changing sign
  EXPECT_EQ(kind_of([] { Potential::validate({{4, Rational(-1)}, {6, Rational(1, 2)}}); }),
            ErrorKind::NoTurningPoint);
  // 2V/Q^2 = (1 - y)(1 - y/1.01)(1 - y/3): a narrow negative window below the
  // root the coarse scan brackets
  const Rational i1 = 1, i2 = Rational(100, 101), i3 = Rational(1, 3);
  const std::map<int, Rational> windowed = {{4, -(i1 + i2 + i3) / 2},
                                            {6, (i1 * i2 + i1 * i3 + i2 * i3) / 2},
                                            {8, -(i1 * i2 * i3) / 2}};
  EXPECT_EQ(kind_of([&] { Potential::validate(windowed); }), ErrorKind::ShapeViolation);
}

TEST(Potential, JsonLoading) {
  const Potential pot = Potential::from_json(R"({"coeffs": {"4": "-1", "6": "1/100"}})");
  EXPECT_EQ(pot.coefficients().at(6), Rational(1, 100));
  EXPECT_EQ(Potential::from_json(R"({"coeffs": {"4": -2}})").a4(), Rational(-2));
  EXPECT_EQ(Potential::from_json(pot.to_json()).describe(), pot.describe());
  EXPECT_EQ(kind_of([] { Potential::from_json(R"({"coeffs": {"4": "-1"}, "extra": 1})"); }),
            ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { Potential::from_json(R"({"coeffs": {"4": 0.5}})"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { Potential::from_json("not json"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { Potential::from_json(R"({"coeffs": {"x": "-1"}})"); }), ErrorKind::InvalidConfig);
}

TEST(Potential, LambdaRateIdentityExact) {
  const Potential pot = Potential::validate({{4, Rational(-1)}, {6, Rational(1, 100)}, {8, Rational(-3, 7)}});
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 40);
  for (int i = 0; i < 100; ++i) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    EXPECT_EQ(pot.lambda_rate_exact(q), pot.v_exact(q) - q / 2 * pot.dv_exact(q));
  }
}

TEST(Potential, FloatingValuesMatchExact) {
  const Potential pot = Potential::validate({{4, Rational(-1)}, {6, Rational(1, 100)}});
  const Precision p{256};
  for (int i = 1; i < 20; ++i) {
    const Rational q(i, 29);
    const auto vals = pot.values(BigFloat(q, p));
    EXPECT_TRUE(agree_to_bits(vals.v, BigFloat(pot.v_exact(q), p), 240));
    EXPECT_TRUE(agree_to_bits(vals.dv, BigFloat(pot.dv_exact(q), p), 240));
    EXPECT_TRUE(agree_to_bits(vals.lambda_rate, BigFloat(pot.lambda_rate_exact(q), p), 240));
    const BigFloat qb(q, p);
    EXPECT_TRUE(agree_to_bits(pot.reduced_excess(qb), (2 * vals.v / (qb * qb) - 1) / qb, 200));
  }
}

TEST(Potential, PositiveBelowTurningPoint) {
  const Potential pot = Potential::quartic();
  for (int i = 1; i < 1000; ++i) {
    EXPECT_GT(pot.v(pot.turning_point() * i / 1000), 0);
  }
}

TEST(Potential, SexticWithNegativeCoefficients) {
  // independent bisection on Q^2/2 - Q^4/10 - Q^6/100 in double
  double lo = 1.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double q2 = mid * mid;
    ((0.5 - q2 / 10 - q2 * q2 / 100) > 0 ? lo : hi) = mid;
  }
  const Potential pot = Potential::validate({{4, Rational(-1, 10)}, {6, Rational(-1, 100)}});
  EXPECT_NEAR(pot.turning_point().to_double(), lo, 1e-14);
  // y = Q^2 solves y^2 + 10y - 50 = 0
  const BigFloat y = 5 * sqrt(BigFloat(3, kDefaultPrecision)) - 5;
  EXPECT_TRUE(agree_to_bits(pot.turning_point(), sqrt(y), 118));
  EXPECT_NEAR(pot.turning_point().to_double(), 1.91317904, 1e-8);
}

TEST(Potential, TurningPointProperties) {
  for (const Potential& pot : {Potential::quartic(), Potential::validate({{4, Rational(-1, 10)}, {6, Rational(-1, 100)}}),
                               Potential::validate({{4, Rational(-1)}, {6, Rational(1, 100)}})}) {
    const BigFloat& qp = pot.turning_point();
    EXPECT_LE(abs(pot.v(qp)).to_double(), 1e-12);
    EXPECT_GT(pot.v(qp * BigFloat(0.999, qp.precision())), 0);
    EXPECT_LT(pot.v(qp * BigFloat(1.001, qp.precision())), 0);
  }
}

TEST(Potential, SpecValues) {
  const Potential pot = Potential::quartic();
  const auto at_turn = pot.values(pot.turning_point());
  EXPECT_LE(abs(at_turn.v).to_double(), 1e-35);
  EXPECT_NEAR(at_turn.dv.to_double(), -0.7071067811865476, 1e-15);
  EXPECT_NEAR(at_turn.lambda_rate.to_double(), 0.25, 1e-15);
  const auto zero = pot.values(BigFloat(0, kDefaultPrecision));
  EXPECT_TRUE(zero.v.is_zero() && zero.dv.is_zero() && zero.lambda_rate.is_zero());
  EXPECT_EQ(pot.v_exact(Rational(1, 2)), Rational(1, 16));
  EXPECT_EQ(pot.lambda_rate_exact(Rational(1, 2)), Rational(1, 16));
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 17);
  for (int i = 0; i < 20; ++i) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    EXPECT_EQ(pot.lambda_rate_exact(q), q * q * q * q);
  }
}

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace epr;
using epr::test::pi;

TEST(Alpha, LowDimensionsAreExact) {
  EXPECT_EQ(alpha(1), 2.0);
  EXPECT_EQ(alpha(2), 2.0 * pi);
}

TEST(Alpha, MatchesGammaFunctionFormula) {
  EXPECT_NEAR(alpha(3), 4.0 * pi, 1e-12);
  EXPECT_NEAR(alpha(4), 4.0 * pi * pi, 1e-12);
  for (int n = 3; n <= 9; ++n)
    EXPECT_NEAR(alpha(n), n * (n - 2) * test::ball_volume_gamma(n), 1e-12 * alpha(n)) << "N=" << n;
}

TEST(Alpha, EqualsSphereAreaTimesNMinus2) {
  for (int n = 3; n <= 12; ++n) EXPECT_NEAR(alpha(n), (n - 2) * unit_sphere_area(n), 1e-12 * alpha(n));
}

TEST(Alpha, RejectsNonPositiveDimension) {
  EXPECT_THROW(alpha(0), DomainError);
  EXPECT_THROW(alpha(-3), DomainError);
}

TEST(UnitBall, RecurrenceAgreesWithGamma) {
  for (int n = 0; n <= 12; ++n) EXPECT_NEAR(unit_ball_volume(n), test::ball_volume_gamma(n), 1e-13) << n;
  EXPECT_THROW(unit_ball_volume(-1), DomainError);
}

TEST(Green, Examples) {
  EXPECT_EQ(green(1.0, 2), 0.0);
  EXPECT_DOUBLE_EQ(green(2.0, 3), -0.5);
  EXPECT_DOUBLE_EQ(green(3.0, 1), 3.0);
  EXPECT_DOUBLE_EQ(green(2.0, 4), -0.25);
}

TEST(Green, RejectsBadArguments) {
  EXPECT_THROW(green(0.0, 3), DomainError);
  EXPECT_THROW(green(-1.0, 2), DomainError);
  EXPECT_THROW(green(1.0, 0), DomainError);
}

TEST(Green, IsIncreasingInDistance) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(1e-3, 50.0);
  for (int k = 0; k < 200; ++k) {
    const double a = d(rng), b = d(rng);
    for (int n = 2; n <= 5; ++n)
      if (a < b) {
        EXPECT_LT(green(a, n), green(b, n));
      }
  }
}

TEST(Pressure, Examples) {
  EXPECT_EQ(pressure(0.0, PhysicsParams()), 0.0);
  EXPECT_DOUBLE_EQ(pressure(2.0, PhysicsParams(3, 2.0, 0.5, 0.0)), 2.0);
  EXPECT_EQ(pressure(1.7, PhysicsParams(3, 5.0 / 3.0, 0.0, 0.0)), 0.0);
  EXPECT_THROW(pressure(-1e-3, PhysicsParams()), DomainError);
}

TEST(SoundSpeed, Examples) {
  EXPECT_DOUBLE_EQ(sound_speed(1.0, PhysicsParams(3, 2.0, 1.0, 0.0)), std::sqrt(2.0));
  EXPECT_EQ(sound_speed(0.5, PhysicsParams(3, 5.0 / 3.0, 0.0, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(sound_speed(4.0, PhysicsParams(3, 2.0, 0.5, 0.0)), 2.0);
  EXPECT_THROW(sound_speed(-1.0, PhysicsParams()), DomainError);
}

TEST(SoundSpeed, IsDerivativeOfPressure) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> rho(0.1, 5.0), gam(1.0, 3.0), kk(0.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const PhysicsParams p(3, gam(rng), kk(rng), 0.0);
    const double r = rho(rng), h = 1e-6 * r;
    const double dpdrho = (pressure(r + h, p) - pressure(r - h, p)) / (2.0 * h);
    EXPECT_NEAR(sound_speed(r, p) * sound_speed(r, p), dpdrho, 1e-6 * (1.0 + dpdrho));
  }
}

TEST(PhysicsParams, Validation) {
  EXPECT_THROW(PhysicsParams(1, 2.0, 0.5, 0.0), DomainError);
  EXPECT_THROW(PhysicsParams(3, 0.5, 0.5, 0.0), DomainError);
  EXPECT_THROW(PhysicsParams(3, 2.0, -0.1, 0.0), DomainError);
  EXPECT_THROW(PhysicsParams(3, 2.0, 0.5, -1.0), DomainError);
  try {
    PhysicsParams(3, 0.5, 0.5, 0.0);
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("gamma >= 1"), std::string::npos);
  }
}

TEST(PhysicsParams, DefaultClosure) {
  const auto p = PhysicsParams::with_default_K(2, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(p.K(), 0.5);
  EXPECT_DOUBLE_EQ(p.alpha_N(), 2.0 * pi);
  EXPECT_FALSE(p.pressureless());
  EXPECT_TRUE(PhysicsParams(3, 5.0 / 3.0, 0.0, 0.0).pressureless());
}

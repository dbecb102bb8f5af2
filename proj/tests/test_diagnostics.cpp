#include <gtest/gtest.h>

#include "support.hpp"

using namespace epr;
using epr::test::pi;

namespace {

FluidState static_ball(int n, double K, int cells = 256, double r_max = 4.0) {
  return init_scenario(test::ball_config(n, K, 0.0, cells, r_max));
}

}  // namespace

TEST(TotalMass, Examples) {
  EXPECT_EQ(total_mass(init_scenario(test::ball_config(3, 0.0, 0.0, 128, 4.0, 0.0))), 0.0);
  EXPECT_LT(test::rel_err(total_mass(static_ball(3, 0.0, 128)), 4.0 * pi / 3.0), 1e-3);
}

TEST(Energy, ZeroDensity) {
  const auto s = init_scenario(test::ball_config(3, 0.6, 0.0, 64, 4.0, 0.0));
  EXPECT_EQ(energy(s, field_of(s)), 0.0);
}

TEST(Energy, StaticPressurelessBallClosedForm) {
  // -1/2 int rho Phi with Phi = -2 pi (1 - r^2/3) inside the unit ball: 16 pi^2 / 15.
  const auto s = static_ball(3, 0.0);
  const double e = energy(s, field_of(s));
  EXPECT_GT(e, 0.0);
  EXPECT_LT(test::rel_err(e, 16.0 * pi * pi / 15.0), 1e-2);
}

TEST(Energy, InternalEnergyOfPolytrope) {
  auto c = test::ball_config(3, 0.5, 0.0, 128, 4.0, 2.0);
  c.params = PhysicsParams(3, 2.0, 0.5, 0.0);
  const auto s = init_scenario(c);
  // K rho^gamma / (gamma - 1) |B| = 0.5 * 4 * 4 pi / 3
  EXPECT_LT(test::rel_err(internal_energy(s), 8.0 * pi / 3.0), 1e-12);
}

TEST(Energy, UniformVelocityAddsKineticTerm) {
  auto c = test::ball_config(3, 0.0, 0.0);
  const auto s0 = init_scenario(c);
  c.velocity = TabulatedVelocity{{{0.0, 0.7}}};
  const auto s1 = init_scenario(c);
  const double M = total_mass(s0);
  EXPECT_NEAR(energy(s1, field_of(s1)) - energy(s0, field_of(s0)), 0.5 * M * 0.49, 1e-12);
}

TEST(Energy, IsothermalPressureRejected) {
  const auto base = init_scenario(test::ball_config(3, 0.0, 0.0, 64));
  auto ctx = std::make_shared<SolverContext>(*base.context);
  ctx->params = PhysicsParams(3, 1.0, 1.0, 0.0);
  FluidState s = base;
  s.context = ctx;
  EXPECT_THROW(internal_energy(s), DomainError);
}

TEST(KineticDissipation, TwiceBetaKinetic) {
  auto c = test::ball_config(3, 0.0, 0.3);
  c.velocity = LinearVelocity{1.0};
  const auto s = init_scenario(c);
  EXPECT_DOUBLE_EQ(kinetic_dissipation(s), 0.6 * kinetic_energy(s));
}

TEST(SecondInertia, Examples) {
  EXPECT_EQ(second_inertia(init_scenario(test::ball_config(3, 0.0, 0.0, 64, 4.0, 0.0))), 0.0);
  EXPECT_LT(test::rel_err(second_inertia(static_ball(3, 0.0)), 4.0 * pi / 5.0), 1e-3);
}

TEST(SecondInertia, ScalesQuadraticallyUnderDilation) {
  for (double lambda : {0.5, 2.0, 3.0}) {
    const auto a = init_scenario(test::ball_config(3, 0.0, 0.0, 128, 4.0));
    const auto b = init_scenario(test::ball_config(3, 0.0, 0.0, 128, 4.0 * lambda, 1.0, lambda));
    EXPECT_NEAR(second_inertia(b) / total_mass(b), lambda * lambda * second_inertia(a) / total_mass(a), 1e-12);
  }
}

TEST(SecondInertiaRate, MatchesLinearVelocity) {
  auto c = test::ball_config(3, 0.0, 0.0);
  c.velocity = LinearVelocity{1.0};
  const auto s = init_scenario(c);
  EXPECT_NEAR(second_inertia_rate(s), 2.0 * second_inertia(s), 1e-12);
}

TEST(HddotIntegral, N2StaticPressurelessIsMassSquared) {
  const auto s = static_ball(2, 0.0);
  const double M = total_mass(s);
  EXPECT_NEAR(hddot_integral(s, field_of(s)), M * M, 1e-12 * M * M);
}

TEST(HddotIntegral, N3StaticPressurelessBall) {
  const auto s = static_ball(3, 0.0);
  const double h = hddot_integral(s, field_of(s));
  EXPECT_GT(h, 0.0);
  EXPECT_LT(test::rel_err(h, 32.0 * pi * pi / 15.0), 1e-2);
}

TEST(HddotIntegral, ZeroDensity) {
  for (int n : {2, 3}) {
    const auto s = init_scenario(test::ball_config(n, 0.0, 0.0, 64, 4.0, 0.0));
    EXPECT_EQ(hddot_integral(s, field_of(s)), 0.0);
  }
}

TEST(HddotIntegral, RequiresUndamped) {
  const auto s = init_scenario(test::ball_config(3, 0.0, 0.5));
  EXPECT_THROW(hddot_integral(s, field_of(s)), ContractError);
  EXPECT_NO_THROW(virial_bracket(s, field_of(s)));
}

TEST(Support, Examples) {
  const auto empty = init_scenario(test::ball_config(3, 0.0, 0.0, 64, 4.0, 0.0));
  EXPECT_EQ(support_radius(empty), 0.0);
  EXPECT_EQ(omega_volume(empty), 0.0);
  for (int n : {2, 3}) {
    const auto s = static_ball(n, 0.0);
    const double dr = s.grid().dr();
    EXPECT_GE(support_radius(s), 1.0 - 2.0 * dr);
    EXPECT_LE(support_radius(s), 1.0 + 2.0 * dr);
    EXPECT_LT(test::rel_err(omega_volume(s), test::ball_volume_gamma(n)), 2e-2);
  }
}

TEST(MaxVelocityGradient, LinearProfile) {
  auto c = test::ball_config(3, 0.0, 0.0);
  c.velocity = LinearVelocity{2.0};
  EXPECT_NEAR(max_velocity_gradient(init_scenario(c)), 2.0, 1e-9);
}

TEST(Record, FieldsAreConsistent) {
  auto c = test::ball_config(3, 0.6, 0.0);
  c.params = PhysicsParams(3, 5.0 / 3.0, 0.6, 0.0);
  c.velocity = LinearVelocity{0.3};
  const auto s = init_scenario(c);
  const auto r = make_record(s);
  const auto f = field_of(s);
  EXPECT_EQ(r.M, total_mass(s));
  EXPECT_DOUBLE_EQ(r.E, energy(s, f));
  EXPECT_EQ(r.H, second_inertia(s));
  EXPECT_EQ(r.Hddot_integral, hddot_integral(s, f));
  EXPECT_EQ(r.R_support, support_radius(s));
  EXPECT_DOUBLE_EQ(r.support_mass, r.M);
  EXPECT_EQ(r.max_rho, 1.0);
}

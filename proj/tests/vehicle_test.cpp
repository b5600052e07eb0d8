#include "lonctl/vehicle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"

namespace lonctl {
namespace {

VehicleParams frictionless() {
  VehicleParams p;
  p.mu_rolling = 0.0;
  p.drag_coeff = 0.0;
  return p;
}

TEST(Forces, RollingResistance) {
  VehicleParams p;
  p.mu_rolling = 0.0;
  EXPECT_EQ(rolling_resistance(p, 0.3), 0.0);
  p.mu_rolling = 0.03;
  EXPECT_REL(rolling_resistance(p, 0.0), 367.875, 1e-9);
  EXPECT_NEAR(rolling_resistance(p, std::numbers::pi / 2 - 1e-12), 0.0, 1e-6);
}

TEST(Forces, GradientForceIsOdd) {
  VehicleParams p;
  EXPECT_EQ(gradient_force(p, 0.0), 0.0);
  EXPECT_REL(gradient_force(p, std::asin(0.1)), 1226.25, 1e-9);
  for (double th : {0.01, 0.05, 0.2, 1.0}) {
    EXPECT_EQ(gradient_force(p, th), -gradient_force(p, -th));
  }
}

TEST(Forces, AeroDrag) {
  VehicleParams p;
  p.air_density_kgpm3 = 1.225;
  p.frontal_area_m2 = 2.0;
  p.drag_coeff = 0.35;
  EXPECT_EQ(aero_force(p, 0.0), 0.0);
  EXPECT_REL(aero_force(p, 10.0), 42.875, 1e-9);
  EXPECT_REL(aero_force(p, 14.0), 4.0 * aero_force(p, 7.0), 1e-12);
}

TEST(Forces, DrivingForce) {
  VehicleParams p;
  EXPECT_EQ(driving_force(0.0, 0.0, p), 0.0);
  EXPECT_REL(driving_force(270.0, 0.0, p), 1000.0, 1e-9);
  EXPECT_REL(driving_force(0.0, 14.0, p), -100.0, 1e-9);
}

TEST(PlantStep, CoastsWithoutForces) {
  const auto p = frictionless();
  const auto s = plant_step(make_state(5.0, p, FlatTerrain{}), 0.0, 0.0, p, FlatTerrain{}, 0.1);
  EXPECT_EQ(s.velocity_mps, 5.0);
  EXPECT_REL(s.distance_m, 0.5, 1e-12);
}

TEST(PlantStep, EulerStepFromRest) {
  const auto p = frictionless();
  // 2500 N of tyre force from 675 N*m at 0.27 m.
  const auto s = plant_step(make_state(0.0, p, FlatTerrain{}), 675.0, 0.0, p, FlatTerrain{}, 0.1);
  EXPECT_REL(s.velocity_mps, 0.2, 1e-9);
}

TEST(PlantStep, BrakeCannotReverse) {
  VehicleParams p;
  const auto s = plant_step(make_state(0.0, p, FlatTerrain{}), 0.0, 500.0, p, FlatTerrain{}, 0.1);
  EXPECT_EQ(s.velocity_mps, 0.0);
  const auto moving =
      plant_step(make_state(0.05, p, FlatTerrain{}), 0.0, 800.0, p, FlatTerrain{}, 0.1);
  EXPECT_EQ(moving.velocity_mps, 0.0);
}

TEST(PlantStep, UphillStandstillHolds) {
  VehicleParams p;
  const TerrainProfile hill = PiecewiseGrade{{{0.0, 0.1}}};
  const auto s = plant_step(make_state(0.0, p, hill), 0.0, 0.0, p, hill, 0.1);
  EXPECT_EQ(s.velocity_mps, 0.0);
}

TEST(PlantStep, RejectsNonFinite) {
  VehicleParams p;
  auto s = make_state(1.0, p, FlatTerrain{});
  EXPECT_THROW(plant_step(s, NAN, 0.0, p, FlatTerrain{}, 0.01), NonFiniteState);
  EXPECT_THROW(plant_step(s, 0.0, INFINITY, p, FlatTerrain{}, 0.01), NonFiniteState);
  s.velocity_mps = NAN;
  EXPECT_THROW(plant_step(s, 0.0, 0.0, p, FlatTerrain{}, 0.01), NonFiniteState);
  EXPECT_THROW(plant_step(make_state(1.0, p, FlatTerrain{}), 0.0, 0.0, p, FlatTerrain{}, 0.0),
               std::invalid_argument);
}

TEST(PlantProperties, DecaysToExactStandstill) {
  VehicleParams p;
  auto s = make_state(3.0, p, FlatTerrain{});
  int steps = 0;
  while (s.velocity_mps > 0.0 && steps < 100000) {
    const double before = s.velocity_mps;
    s = plant_step(s, 0.0, 0.0, p, FlatTerrain{}, 0.01);
    ASSERT_LE(s.velocity_mps, before);
    ++steps;
  }
  EXPECT_EQ(s.velocity_mps, 0.0);
  EXPECT_LT(steps, 100000);
}

TEST(PlantProperties, ForceSuperpositionAndKinematics) {
  VehicleParams p;
  const TerrainProfile terrain = SinusoidalGrade{0.08, 40.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> v(0.5, 15.0), tw(0.0, 1500.0), tb(0.0, 200.0),
      d(0.0, 200.0);
  int unclamped = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = make_state(v(rng), p, terrain, d(rng));
    const double w = tw(rng), b = tb(rng), dt = 0.01;
    const auto next = plant_step(s, w, b, p, terrain, dt);
    EXPECT_EQ(next.wheel_speed_radps, next.velocity_mps / p.wheel_radius_m);
    EXPECT_EQ(next.grade_rad, grade_at(terrain, next.distance_m));
    if (next.velocity_mps > 0.0) {
      ++unclamped;
      const auto f = force_breakdown(s, w, b, p);
      EXPECT_REL(f.net_n, p.mass_kg * (next.velocity_mps - s.velocity_mps) / dt, 1e-9);
    }
  }
  EXPECT_GT(unclamped, 1000);
}

TEST(PlantProperties, DownhillGradientOnly) {
  const auto p = frictionless();
  for (double theta : {0.02, 0.05, 0.1}) {
    const TerrainProfile slope = PiecewiseGrade{{{0.0, -theta}}};
    auto s = make_state(1.0, p, slope);
    for (int k = 0; k < 50; ++k) {
      const auto next = plant_step(s, 0.0, 0.0, p, slope, 0.01);
      EXPECT_REL(next.velocity_mps - s.velocity_mps, 0.01 * p.gravity_mps2 * std::sin(theta),
                 1e-9);
      s = next;
    }
  }
}

// Constant tyre force against quadratic drag has the closed form
// v(t) = sqrt(F/c) * tanh(t * sqrt(F c) / M) from rest.
TEST(PlantProperties, FirstOrderEulerConvergence) {
  VehicleParams p;
  p.mu_rolling = 0.0;
  p.drag_coeff = 1.0;
  p.frontal_area_m2 = 2.0;
  const double wheel_torque = 540.0;  // 2000 N
  const double force = wheel_torque / p.wheel_radius_m;
  const double c = 0.5 * p.air_density_kgpm3 * p.frontal_area_m2 * p.drag_coeff;
  const double horizon = 5.0;
  const double exact = std::sqrt(force / c) * std::tanh(horizon * std::sqrt(force * c) / p.mass_kg);

  const auto final_velocity = [&](double dt) {
    auto s = make_state(0.0, p, FlatTerrain{});
    const long n = std::lround(horizon / dt);
    for (long k = 0; k < n; ++k) s = plant_step(s, wheel_torque, 0.0, p, FlatTerrain{}, dt);
    return s.velocity_mps;
  };
  const double e1 = std::abs(final_velocity(0.02) - exact);
  const double e2 = std::abs(final_velocity(0.01) - exact);
  const double e10 = std::abs(final_velocity(0.002) - exact);
  EXPECT_GT(e1, 0.0);
  EXPECT_NEAR(e2 / e1, 0.5, 0.05);
  EXPECT_NEAR(e10 / e1, 0.1, 0.02);
}

TEST(Params, Validation) {
  VehicleParams p;
  EXPECT_NO_THROW(validate(p));
  p.mass_kg = -1.0;
  try {
    validate(p);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "vehicle.mass_kg");
  }
  p = {};
  p.mu_rolling = 1.0;
  EXPECT_THROW(validate(p), ConfigError);
}

}  // namespace
}  // namespace lonctl

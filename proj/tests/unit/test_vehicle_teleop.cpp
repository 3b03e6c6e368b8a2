#include <doctest.h>

#include <random>

#include "uvms/errors.hpp"
#include "uvms/teleop_mapping.hpp"
#include "uvms/vehicle_teleop.hpp"

using namespace uvms;

TEST_SUITE("vehicle_teleop") {

TEST_CASE("displacement") {
  const Vec3 a(0.1, -0.2, 0.3);
  CHECK(displacement_vector(a, a).isZero(0.0));
  CHECK(displacement_vector(Vec3::Zero(), Vec3(0.03, 0.001, 0.002)) == Vec3(0.03, 0.001, 0.002));
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    const Vec3 p = Vec3::Random(), q = Vec3::Random();
    const Vec3 d = displacement_vector(p, q);
    for (int k = 0; k < 3; ++k) CHECK(d[k] == q[k] - p[k]);
  }
}

TEST_CASE("dominant axis") {
  CHECK_FALSE(dominant_axis(Vec3(0.001, 0, 0), 0.02));
  CHECK_FALSE(dominant_axis(Vec3(0.02, 0, 0), 0.02));
  CHECK(dominant_axis(Vec3(0.05, 0.01, -0.01), 0.02) == DominantAxis{Axis::X, 1});
  CHECK(dominant_axis(Vec3(0.0, -0.04, 0.03), 0.02) == DominantAxis{Axis::Y, -1});
  CHECK_FALSE(dominant_axis(Vec3(0.03, -0.03, 0.0), 0.02));
  CHECK_FALSE(dominant_axis(Vec3(0.01, 0.03, 0.03), 0.02));
  CHECK_FALSE(dominant_axis(Vec3(0.03, 0.03, -0.03), 0.02));
}

TEST_CASE("examples") {
  const VehicleTeleopConfig cfg;
  const VelocityCommand fwd = vehicle_command(Vec3(0.05, 0, 0), Vec3(0.05, 0, 0), cfg);
  CHECK(fwd.linear == Vec3(cfg.linear_speed, 0, 0));
  CHECK(fwd.yaw_rate == 0.0);
  const VelocityCommand yaw = vehicle_command(Vec3(0, 0, 0.05), Vec3(0, 0, -0.05), cfg);
  CHECK(yaw.linear.isZero(0.0));
  CHECK(yaw.yaw_rate == cfg.yaw_rate);
  CHECK(vehicle_command(Vec3(0.05, 0, 0), Vec3(0, 0.05, 0), cfg).is_zero());
  CHECK(vehicle_command(Vec3(0.05, 0, 0), Vec3(-0.05, 0, 0), cfg).is_zero());
}

TEST_CASE("registration maps the device axes") {
  const VehicleTeleopConfig cfg;
  const Rotation reg = Registration::standard().rov_from_haptic.rotation;
  const VelocityCommand fwd = vehicle_command(Vec3(0, 0, -0.05), Vec3(0, 0, -0.05), cfg, reg);
  CHECK((fwd.linear - Vec3(cfg.linear_speed, 0, 0)).norm() < 1e-15);
  const VelocityCommand up = vehicle_command(Vec3(0, 0.05, 0), Vec3(0, 0.05, 0), cfg, reg);
  CHECK((up.linear - Vec3(0, 0, cfg.linear_speed)).norm() < 1e-15);
}

TEST_CASE("invariants over random inputs") {
  const VehicleTeleopConfig cfg;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.08, 0.08);
  std::uniform_real_distribution<double> grow(1.01, 20.0);
  for (int i = 0; i < 5000; ++i) {
    const Vec3 l(u(rng), u(rng), u(rng)), r(u(rng), u(rng), u(rng));
    const VelocityCommand c = vehicle_command(l, r, cfg);
    if (l.norm() <= cfg.dead_zone || r.norm() <= cfg.dead_zone) CHECK(c.is_zero());
    const int nonzero = static_cast<int>((c.linear.array() != 0.0).count()) + (c.yaw_rate != 0.0 ? 1 : 0);
    CHECK(nonzero <= 1);
    const double k = grow(rng);
    if (l.norm() > cfg.dead_zone && r.norm() > cfg.dead_zone) CHECK(vehicle_command(k * l, k * r, cfg) == c);
    const VelocityCommand swapped = vehicle_command(r, l, cfg);
    CHECK(swapped.linear == c.linear);
    CHECK(swapped.yaw_rate == -c.yaw_rate);
  }
}

TEST_CASE("config validation") {
  VehicleTeleopConfig cfg;
  cfg.dead_zone = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

}

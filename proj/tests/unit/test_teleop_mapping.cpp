#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "uvms/errors.hpp"
#include "uvms/teleop_mapping.hpp"

using namespace uvms;

namespace {

StylusSample sample(const Transform& pose, double t = 0.0, bool manip = false, bool vehicle = false,
                    Device d = Device::Left) {
  StylusSample s;
  s.device = d;
  s.pose = pose;
  s.timestamp = t;
  s.button_manip = manip;
  s.button_vehicle = vehicle;
  return s;
}

/// Desired pose recomputed from the mapping equations with dense matrices.
Eigen::Matrix4d literal_desired(const Transform& reg, const Transform& anchor_stylus,
                                const Transform& anchor_ee, const Transform& current) {
  using oracle::homogeneous;
  const Eigen::Matrix4d rel = homogeneous(anchor_stylus).inverse() * homogeneous(current);
  const Eigen::Matrix4d bridge = homogeneous(anchor_ee).inverse() * homogeneous(reg) * homogeneous(anchor_stylus);
  const Eigen::Matrix4d mapped = bridge * rel * bridge.inverse();
  return homogeneous(anchor_ee) * mapped;
}

struct Press {
  double t;
  bool manip;
  bool vehicle;
};

std::vector<TeleopEvent> play(const std::vector<Press>& presses, DeviceButtonState* final_state = nullptr) {
  DeviceButtonState s;
  std::vector<TeleopEvent> events;
  for (const Press& p : presses) {
    ButtonUpdate up = update_buttons(s, sample(Transform::identity(), p.t, p.manip, p.vehicle));
    s = up.state;
    events.insert(events.end(), up.events.begin(), up.events.end());
  }
  if (final_state) *final_state = s;
  return events;
}

const TeleopEvent kEngaged{TeleopEventKind::ClutchEngaged, Device::Left};
const TeleopEvent kReleased{TeleopEventKind::ClutchReleased, Device::Left};
const TeleopEvent kToggle{TeleopEventKind::GripperToggled, Device::Left};

}  // namespace

TEST_SUITE("teleop_mapping") {

TEST_CASE("begin_clutch bridge") {
  const ArmClutch id = begin_clutch(sample(Transform::identity()), Transform::identity(), Registration{});
  CHECK(id.bridge.matrix().isIdentity(0.0));

  const ArmClutch shifted =
      begin_clutch(sample(Transform::identity()), Transform::from_translation(Vec3(0.3, -0.1, 0.2)), Registration{});
  CHECK(shifted.bridge.translation.isApprox(Vec3(-0.3, 0.1, -0.2)));
  CHECK(shifted.bridge.rotation.isIdentity(0.0));

  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const Registration reg{oracle::random_transform(rng)};
    const Transform stylus = oracle::random_transform(rng), ee = oracle::random_transform(rng);
    const ArmClutch c = begin_clutch(sample(stylus), ee, reg);
    CHECK(((ee * c.bridge).matrix() - (reg.rov_from_haptic * stylus).matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stylus_relative") {
  std::mt19937_64 rng(32);
  const Transform anchor = oracle::random_transform(rng);
  const ArmClutch c = begin_clutch(sample(anchor), Transform::identity(), Registration{});
  CHECK(stylus_relative(c, sample(anchor)).matrix().isIdentity(1e-12));

  const ArmClutch plain = begin_clutch(sample(Transform::from_translation(Vec3(0.1, 0.2, 0.3))),
                                       Transform::identity(), Registration{});
  const Transform moved = stylus_relative(plain, sample(Transform::from_translation(Vec3(0.15, 0.2, 0.3))));
  CHECK((moved.translation - Vec3(0.05, 0, 0)).norm() < 1e-15);

  for (int i = 0; i < 200; ++i) {
    const Transform a = oracle::random_transform(rng), cur = oracle::random_transform(rng);
    const ArmClutch k = begin_clutch(sample(a), Transform::identity(), Registration{});
    CHECK(((a * stylus_relative(k, sample(cur))).matrix() - cur.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(stylus_relative(ArmClutch{}, sample(anchor)), ClutchInactive);
}

TEST_CASE("map_relative preserves rotation angle and conjugates the axis") {
  std::mt19937_64 rng(33);
  const ArmClutch unit = begin_clutch(sample(Transform::identity()), Transform::identity(), Registration{});
  const Transform rel0 = oracle::random_transform(rng);
  CHECK((map_relative(unit, rel0).matrix() - rel0.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  for (int i = 0; i < 200; ++i) {
    const ArmClutch c = begin_clutch(sample(oracle::random_transform(rng)), oracle::random_transform(rng),
                                     Registration{oracle::random_transform(rng)});
    CHECK(map_relative(c, Transform::identity()).matrix().isIdentity(1e-12));
    const Vec3 axis = oracle::random_unit(rng);
    const double phi = std::uniform_real_distribution<double>(0.01, 3.0)(rng);
    const Transform rel{Eigen::AngleAxisd(phi, axis).toRotationMatrix(), Vec3::Zero()};
    const Transform mapped = map_relative(c, rel);
    const Eigen::AngleAxisd aa(mapped.rotation);
    CHECK(aa.angle() == doctest::Approx(phi).epsilon(1e-9));
    CHECK((aa.axis() - c.bridge.rotation * axis).norm() < 1e-9);
  }
}

TEST_CASE("desired pose with identity rotations") {
  const Transform anchor_ee = Transform::from_translation(Vec3(0.8, 0.1, -0.2));
  const ArmClutch c = begin_clutch(sample(Transform::identity()), anchor_ee, Registration{});
  const DesiredPose still = desired_ee_pose(c, sample(Transform::identity()));
  CHECK((still.to_transform().matrix() - anchor_ee.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  const DesiredPose d = desired_ee_pose(c, sample(Transform::from_translation(Vec3(0.01, 0, 0))));
  CHECK((d.position - Vec3(0.81, 0.1, -0.2)).norm() < 1e-15);
  CHECK(d.rotation.isIdentity(1e-15));
}

TEST_CASE("standard registration maps device axes onto the vehicle") {
  const ArmClutch c = begin_clutch(sample(Transform::identity()), Transform::identity(), Registration::standard());
  auto moved = [&](const Vec3& d) { return desired_ee_pose(c, sample(Transform::from_translation(d))).position; };
  CHECK((moved(Vec3(0.01, 0, 0)) - Vec3(0, -0.01, 0)).norm() < 1e-15);  // right
  CHECK((moved(Vec3(0, 0.01, 0)) - Vec3(0, 0, 0.01)).norm() < 1e-15);   // up
  CHECK((moved(Vec3(0, 0, 0.01)) - Vec3(-0.01, 0, 0)).norm() < 1e-15);  // toward the operator
}

TEST_CASE("desired pose equals the literal recomposition") {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 1000; ++i) {
    const Transform reg = oracle::random_transform(rng), anchor_s = oracle::random_transform(rng),
                    anchor_ee = oracle::random_transform(rng), cur = oracle::random_transform(rng);
    const ArmClutch c = begin_clutch(sample(anchor_s), anchor_ee, Registration{reg});
    const Eigen::Matrix4d got = desired_ee_pose(c, sample(cur)).to_transform().matrix();
    CHECK((got - literal_desired(reg, anchor_s, anchor_ee, cur)).cwiseAbs().maxCoeff() < 1e-12);
    // Re-engaging anywhere is bumpless.
    const ArmClutch again = begin_clutch(sample(cur), Transform::from_matrix(got), Registration{reg});
    CHECK((desired_ee_pose(again, sample(cur)).to_transform().matrix() - got).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("workspace scale applies to translation only") {
  const ArmClutch c = begin_clutch(sample(Transform::identity()), Transform::identity(), Registration{}, 0.5);
  const Transform cur{Eigen::AngleAxisd(0.3, Vec3::UnitZ()).toRotationMatrix(), Vec3(0.02, 0, 0)};
  const DesiredPose d = desired_ee_pose(c, sample(cur));
  CHECK((d.position - Vec3(0.01, 0, 0)).norm() < 1e-15);
  CHECK((d.rotation - cur.rotation).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("clutch press, hold and release") {
  DeviceButtonState s;
  const auto events = play({{0.0, true, false}, {0.05, true, false}, {0.16, true, false}, {0.5, true, false},
                            {0.6, false, false}},
                           &s);
  CHECK(events == std::vector<TeleopEvent>{kEngaged, kReleased});
  CHECK(s.phase == DeviceButtonState::Phase::Idle);
}

TEST_CASE("both buttons inside the window toggle the gripper once") {
  CHECK(play({{0.0, true, false}, {0.1, true, true}, {0.3, true, true}, {0.4, false, false}}) ==
        std::vector<TeleopEvent>{kToggle});
  CHECK(play({{0.0, true, true}, {0.2, false, false}}) == std::vector<TeleopEvent>{kToggle});
  // Releasing one button of the chord does not start a clutch.
  CHECK(play({{0.0, true, true}, {0.1, true, false}, {0.5, true, false}, {0.6, false, false}}) ==
        std::vector<TeleopEvent>{kToggle});
}

TEST_CASE("second button after the window commits the first") {
  CHECK(play({{0.0, true, false}, {0.2, true, true}, {0.3, false, false}}) ==
        std::vector<TeleopEvent>{kEngaged, kReleased});
}

TEST_CASE("short taps are discarded") {
  CHECK(play({{0.0, true, false}, {0.05, false, false}}).empty());
}

TEST_CASE("re-toggle debounce") {
  CHECK(play({{0.0, true, true}, {0.05, false, false}, {0.1, true, true}, {0.15, false, false}}) ==
        std::vector<TeleopEvent>{kToggle});
  CHECK(play({{0.0, true, true}, {0.05, false, false}, {0.3, true, true}, {0.35, false, false}}) ==
        std::vector<TeleopEvent>{kToggle, kToggle});
}

TEST_CASE("vehicle button alone requests vehicle mode but emits nothing") {
  DeviceButtonState s;
  CHECK(play({{0.0, false, true}, {0.2, false, true}}, &s).empty());
  CHECK(s.vehicle_request());
  CHECK_FALSE(s.clutch_engaged());
}

TEST_CASE("out-of-order timestamps are rejected") {
  DeviceButtonState s;
  s = update_buttons(s, sample(Transform::identity(), 1.0)).state;
  CHECK_THROWS_AS(update_buttons(s, sample(Transform::identity(), 0.5)), OutOfOrderTimestamp);
}

TEST_CASE("force release") {
  DeviceButtonState s;
  play({{0.0, true, false}, {0.2, true, false}}, &s);
  REQUIRE(s.clutch_engaged());
  const ButtonUpdate up = force_release(s, Device::Left);
  CHECK(up.events == std::vector<TeleopEvent>{kReleased});
  CHECK_FALSE(up.state.clutch_engaged());
  // Still held: nothing re-engages until the buttons come up.
  ButtonUpdate next = update_buttons(up.state, sample(Transform::identity(), 0.5, true, false));
  CHECK(next.events.empty());
  next = update_buttons(next.state, sample(Transform::identity(), 0.6, false, false));
  CHECK(next.state.phase == DeviceButtonState::Phase::Idle);
}

TEST_CASE("gripper toggle parity") {
  std::vector<Press> presses;
  for (int n = 0; n < 7; ++n) {
    presses.push_back({n * 0.5, true, true});
    presses.push_back({n * 0.5 + 0.1, false, false});
    const auto events = play(presses);
    CHECK(events.size() == static_cast<std::size_t>(n + 1));
  }
}

}

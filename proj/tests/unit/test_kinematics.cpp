#include <doctest.h>

#include <numbers>
#include <random>

#include "../oracles.hpp"
#include "uvms/chain_config.hpp"
#include "uvms/errors.hpp"
#include "uvms/kinematics.hpp"

using namespace uvms;

namespace {

KinematicChain planar_chain(double length) {
  // Joint 1 about z at the origin, link of `length` along x after it, the
  // remaining joints fixed at zero offset.
  KinematicChain c;
  c.name = "planar";
  for (Joint& j : c.joints) j.axis = Vec3::UnitZ();
  for (int j = 1; j < kJointCount; ++j) c.joints[j].axis = Vec3::UnitX();
  c.joints[1].zero_config = Transform::from_translation(Vec3(length, 0, 0));
  return c;
}

}  // namespace

TEST_SUITE("kinematics_core") {

TEST_CASE("zero configuration is the product of fixed transforms") {
  const KinematicChain c = default_chain("a", Transform::from_translation(Vec3(0.1, 0.2, -0.3)));
  Transform expected = c.base;
  for (const Joint& j : c.joints) expected = expected * j.zero_config;
  const Transform ee = forward_kinematics(c, JointVector::Zero()).ee;
  CHECK((ee.matrix() - expected.matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("planar quarter turn") {
  const double L = 0.7;
  JointVector q = JointVector::Zero();
  q[0] = std::numbers::pi / 2;
  const Transform ee = forward_kinematics(planar_chain(L), q).ee;
  CHECK((ee.translation - Vec3(0, L, 0)).norm() < 1e-12);

  const Jacobian jac = jacobian(planar_chain(L), JointVector::Zero());
  Eigen::Matrix<double, 6, 1> expected;
  expected << 0, L, 0, 0, 0, 1;
  CHECK((jac.col(0) - expected).norm() < 1e-12);
}

TEST_CASE("default chain at a reference configuration") {
  // Values from tests/oracles/derive_values.py.
  JointVector q;
  q << 0.1, -0.3, 0.5, -0.2, 0.4, 0.1;
  const Transform ee = forward_kinematics(default_chain(), q).ee;
  const Vec3 p(0.89107083853666935, 0.079020335210780585, -0.0086708728273735131);
  Rotation r;
  r << 0.81502316867425495, -0.11582848114569214, -0.56773320977344521, 0.1595290096062095,
      0.98680486279475788, 0.027688587155737483, 0.55703476517919293, -0.11313675671549456,
      0.82274682901951091;
  CHECK((ee.translation - p).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((ee.rotation - r).cwiseAbs().maxCoeff() < 1e-10);

  const Vec3 home(0.84086871396813967, 0.0, 0.0050794101071271252);
  CHECK((forward_kinematics(default_chain(), default_home_configuration()).ee.translation - home).norm() <
        1e-10);
}

TEST_CASE("forward kinematics matches the dense product on random chains") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const KinematicChain c = oracle::random_chain(rng);
    const JointVector q = oracle::random_q(rng);
    const ChainPose pose = forward_kinematics(c, q);
    const auto frames = oracle::chain_frames(c, q);
    for (int j = 0; j < kJointCount; ++j) {
      CHECK((pose.frames[j].matrix() - frames[j]).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(orthonormality_error(pose.frames[j].rotation) < 1e-9);
    }
  }
}

TEST_CASE("jacobian matches finite differences") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const KinematicChain c = oracle::random_chain(rng);
    const JointVector q = oracle::random_q(rng);
    const Jacobian jac = jacobian(c, q);
    const auto fd = oracle::finite_difference_jacobian(c, q);
    CHECK((jac - fd).cwiseAbs().maxCoeff() < 1e-5);

    // Angular columns are the world-frame joint axes.
    const auto frames = oracle::chain_frames(c, q);
    for (int j = 0; j < kJointCount; ++j) {
      const Vec3 s = frames[j].topLeftCorner<3, 3>() * c.joints[j].axis;
      CHECK((jac.block<3, 1>(3, j) - s).norm() < 1e-12);
    }
  }
}

TEST_CASE("coincident parallel axes give equal angular columns") {
  KinematicChain c = default_chain();
  c.joints[1].zero_config = Transform::identity();
  c.joints[1].axis = c.joints[0].axis;
  const Jacobian jac = jacobian(c, default_home_configuration());
  CHECK((jac.block<3, 1>(3, 0) - jac.block<3, 1>(3, 1)).norm() < 1e-15);
}

TEST_CASE("joint limits") {
  const KinematicChain c = default_chain();
  JointVector q = default_home_configuration();
  q[2] = 3.0;
  CHECK_THROWS_AS(forward_kinematics(c, q), JointLimitError);
  bool clamped = false;
  const JointVector fixed = clamp_to_limits(c, q, &clamped);
  CHECK(clamped);
  CHECK(fixed[2] == doctest::Approx(2.6));
  CHECK(c.within_limits(fixed));
}

TEST_CASE("validation rejects non-unit axes") {
  KinematicChain c = default_chain();
  c.joints[3].axis = Vec3(1.0, 1e-3, 0.0);
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("chain files load and round-trip") {
  const KinematicChain left = load_chain_file(UVMS_DATA_DIR "/arms/left_arm.yaml");
  CHECK(left.name == "left_arm");
  CHECK(chains_equal(left, default_chain("left_arm", Transform::from_translation(Vec3(0.10, 0.15, -0.20))),
                     1e-15));

  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const KinematicChain c = oracle::random_chain(rng);
    const KinematicChain back = load_chain(serialize_chain(c));
    CHECK(chains_equal(c, back, 1e-12));
    CHECK(chains_equal(back, load_chain(serialize_chain(back)), 1e-12));
  }
}

TEST_CASE("chain files with the wrong joint count are rejected") {
  std::string text = "name: short\njoints:\n";
  for (int j = 0; j < 5; ++j) text += "  - {zero_config: {translation: [0.1, 0, 0]}, axis: [0, 0, 1]}\n";
  CHECK_THROWS_AS(load_chain(text), ValidationError);
  CHECK_THROWS_AS(load_chain("joints: [1, 2"), ParseError);
}

}

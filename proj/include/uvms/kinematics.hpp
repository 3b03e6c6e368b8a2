#pragma once

#include <array>
#include <optional>
#include <string>

#include "uvms/transform.hpp"

namespace uvms {

inline constexpr int kJointCount = 6;

using JointVector = Eigen::Matrix<double, kJointCount, 1>;
/// Rows 0-2 linear, rows 3-5 angular.
using Jacobian = Eigen::Matrix<double, 6, kJointCount>;

struct JointLimits {
  double lower = 0.0;
  double upper = 0.0;
};

/// One revolute joint. `zero_config` is the parent-to-joint pose at q = 0 and
/// `axis` is expressed in the joint's own frame.
struct Joint {
  Transform zero_config;
  Vec3 axis = Vec3::UnitZ();
  std::optional<JointLimits> limits;
};

/// 6-joint serial arm mounted on the vehicle. Everything it produces is
/// expressed in the vehicle frame.
struct KinematicChain {
  std::string name;
  Transform base;
  std::array<Joint, kJointCount> joints;

  /// Throws ValidationError on non-unit axes, bad limits or invalid transforms.
  void validate() const;
  bool within_limits(const JointVector& q, double tol = 1e-9) const;
};

struct ChainPose {
  std::array<Transform, kJointCount> frames;  // {1} ... {6}
  Transform ee;                               // equal to frames[5]
};

/// Sequential product base * Π (zero_config_k * Rot(axis_k, q_k)).
/// Throws JointLimitError when a joint with limits is outside them.
ChainPose forward_kinematics(const KinematicChain& chain, const JointVector& q);

/// Geometric Jacobian; column j = [s_j x (p_ee - p_j); s_j] in the vehicle frame.
Jacobian jacobian(const KinematicChain& chain, const JointVector& q);
Jacobian jacobian(const KinematicChain& chain, const ChainPose& pose);

/// Clamps joints that have limits. Sets `*clamped` when any joint moved.
JointVector clamp_to_limits(const KinematicChain& chain, const JointVector& q,
                            bool* clamped = nullptr);

/// Forward-facing shoulder-yaw / shoulder-pitch / elbow-pitch / wrist
/// roll-pitch-roll arm with links 0.15/0.30/0.25/0.08/0.08/0.06 m.
KinematicChain default_chain(const std::string& name = "arm",
                             const Transform& base = Transform::identity());

/// Bent, well-conditioned configuration of default_chain with the gripper level.
JointVector default_home_configuration();

}  // namespace uvms

#include "uvms/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uvms/errors.hpp"

namespace uvms {

void KinematicChain::validate() const {
  if (!is_rotation(base.rotation) || !base.translation.allFinite()) {
    throw ValidationError("chain '" + name + "': base is not a valid rigid transform");
  }
  for (int j = 0; j < kJointCount; ++j) {
    const Joint& joint = joints[j];
    const std::string where = "chain '" + name + "' joint " + std::to_string(j + 1);
    if (!is_rotation(joint.zero_config.rotation) || !joint.zero_config.translation.allFinite()) {
      throw ValidationError(where + ": zero_config is not a valid rigid transform");
    }
    if (!joint.axis.allFinite() || std::abs(joint.axis.norm() - 1.0) > kRotationTolerance) {
      throw ValidationError(where + ": axis must be unit length");
    }
    if (joint.limits) {
      const auto [lo, hi] = *joint.limits;
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo >= hi) {
        throw ValidationError(where + ": limits must satisfy lower < upper");
      }
    }
  }
}

bool KinematicChain::within_limits(const JointVector& q, double tol) const {
  for (int j = 0; j < kJointCount; ++j) {
    const auto& lim = joints[j].limits;
    if (lim && (q[j] < lim->lower - tol || q[j] > lim->upper + tol)) return false;
  }
  return true;
}

ChainPose forward_kinematics(const KinematicChain& chain, const JointVector& q) {
  if (!chain.within_limits(q)) {
    for (int j = 0; j < kJointCount; ++j) {
      const auto& lim = chain.joints[j].limits;
      if (lim && (q[j] < lim->lower - 1e-9 || q[j] > lim->upper + 1e-9)) {
        throw JointLimitError("joint " + std::to_string(j + 1) + " at " + std::to_string(q[j]) +
                              " rad is outside [" + std::to_string(lim->lower) + ", " +
                              std::to_string(lim->upper) + "]");
      }
    }
  }
  ChainPose pose;
  Transform current = chain.base;
  for (int j = 0; j < kJointCount; ++j) {
    const Joint& joint = chain.joints[j];
    current = current * joint.zero_config *
              Transform::from_rotation(axis_angle_rotation(joint.axis, q[j]));
    renormalize_if_drifted(current);
    pose.frames[j] = current;
  }
  pose.ee = pose.frames[kJointCount - 1];
  return pose;
}

Jacobian jacobian(const KinematicChain& chain, const ChainPose& pose) {
  Jacobian jac;
  const Vec3& p_ee = pose.ee.translation;
  for (int j = 0; j < kJointCount; ++j) {
    const Vec3 s = pose.frames[j].rotation * chain.joints[j].axis;
    jac.block<3, 1>(0, j) = s.cross(p_ee - pose.frames[j].translation);
    jac.block<3, 1>(3, j) = s;
  }
  return jac;
}

Jacobian jacobian(const KinematicChain& chain, const JointVector& q) {
  return jacobian(chain, forward_kinematics(chain, q));
}

JointVector clamp_to_limits(const KinematicChain& chain, const JointVector& q, bool* clamped) {
  JointVector out = q;
  bool any = false;
  for (int j = 0; j < kJointCount; ++j) {
    if (const auto& lim = chain.joints[j].limits) {
      out[j] = std::clamp(q[j], lim->lower, lim->upper);
      any = any || out[j] != q[j];
    }
  }
  if (clamped) *clamped = any;
  return out;
}

KinematicChain default_chain(const std::string& name, const Transform& base) {
  // Pitch joints turn about -y so that positive angles lift the arm.
  const Vec3 yaw = Vec3::UnitZ();
  const Vec3 pitch = -Vec3::UnitY();
  const Vec3 roll = Vec3::UnitX();
  const std::array<double, kJointCount> links = {0.15, 0.30, 0.25, 0.08, 0.08, 0.06};
  const std::array<Vec3, kJointCount> axes = {yaw, pitch, pitch, roll, pitch, roll};
  const std::array<JointLimits, kJointCount> limits = {
      JointLimits{-1.6, 1.6}, {-1.4, 1.6}, {-2.6, 2.6}, {-3.1, 3.1}, {-2.2, 2.2}, {-3.1, 3.1}};

  KinematicChain chain;
  chain.name = name;
  chain.base = base;
  for (int j = 0; j < kJointCount; ++j) {
    chain.joints[j].zero_config = Transform::from_translation(Vec3(links[j], 0.0, 0.0));
    chain.joints[j].axis = axes[j];
    chain.joints[j].limits = limits[j];
  }
  return chain;
}

JointVector default_home_configuration() {
  JointVector q;
  q << 0.0, 0.5, -1.3, 0.0, 0.8, 0.0;
  return q;
}

}  // namespace uvms

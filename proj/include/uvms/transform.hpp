#pragma once

#include <Eigen/Dense>

namespace uvms {

using Vec3 = Eigen::Vector3d;
using Rotation = Eigen::Matrix3d;
using Quaternion = Eigen::Quaterniond;

/// Tolerance used by the rotation invariant checks (orthonormality, det = +1).
inline constexpr double kRotationTolerance = 1e-9;

/// Rigid pose: p' = rotation * p + translation.
struct Transform {
  Rotation rotation = Rotation::Identity();
  Vec3 translation = Vec3::Zero();

  static Transform identity() { return {}; }
  static Transform from_translation(const Vec3& t) { return {Rotation::Identity(), t}; }
  static Transform from_rotation(const Rotation& r) { return {r, Vec3::Zero()}; }
  static Transform from_matrix(const Eigen::Matrix4d& m);

  Eigen::Matrix4d matrix() const;
  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

/// a * b, i.e. the pose of b's frame expressed through a.
Transform compose(const Transform& a, const Transform& b);
Transform invert(const Transform& t);

inline Transform operator*(const Transform& a, const Transform& b) { return compose(a, b); }

struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();

  Eigen::Matrix<double, 6, 1> vector() const {
    Eigen::Matrix<double, 6, 1> v;
    v << linear, angular;
    return v;
  }
  static Twist from_vector(const Eigen::Matrix<double, 6, 1>& v) {
    return {v.head<3>(), v.tail<3>()};
  }
};

/// Rodrigues rotation. Throws NonUnitAxis when |‖axis‖ - 1| > 1e-6.
Rotation axis_angle_rotation(const Vec3& axis, double angle);

/// Fixed-axis roll/pitch/yaw: Rz(yaw) * Ry(pitch) * Rx(roll).
Rotation rotation_from_rpy(const Vec3& rpy);
Vec3 rpy_from_rotation(const Rotation& r);

/// Unit quaternion with w >= 0.
Quaternion quaternion_from_rotation(const Rotation& r);
Rotation rotation_from_quaternion(const Quaternion& q);

/// max(|RᵀR - I|_max, |det R - 1|)
double orthonormality_error(const Rotation& r);
bool is_rotation(const Rotation& r, double tol = kRotationTolerance);

/// Nearest rotation in the Frobenius sense (polar decomposition).
Rotation orthonormalize(const Rotation& r);

/// Polar projection only when the invariant has drifted past kRotationTolerance.
void renormalize_if_drifted(Transform& t);

/// Rotation angle in [0, π] from the trace, argument clamped.
double rotation_angle(const Rotation& r);

bool is_finite(const Transform& t);

}  // namespace uvms

#include "uvms/transform.hpp"

#include <algorithm>
#include <cmath>

#include "uvms/errors.hpp"

namespace uvms {

Transform Transform::from_matrix(const Eigen::Matrix4d& m) {
  return {m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>()};
}

Eigen::Matrix4d Transform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Transform compose(const Transform& a, const Transform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Transform invert(const Transform& t) {
  const Rotation rt = t.rotation.transpose();
  return {rt, -(rt * t.translation)};
}

Rotation axis_angle_rotation(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
    throw NonUnitAxis("rotation axis must be unit length (norm " + std::to_string(n) + ")");
  }
  const Vec3 k = axis / n;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Rotation kx;
  kx << 0, -k.z(), k.y(),  //
      k.z(), 0, -k.x(),    //
      -k.y(), k.x(), 0;
  return Rotation::Identity() * c + s * kx + (1.0 - c) * (k * k.transpose());
}

Rotation rotation_from_rpy(const Vec3& rpy) {
  const Vec3 x = Vec3::UnitX(), y = Vec3::UnitY(), z = Vec3::UnitZ();
  return axis_angle_rotation(z, rpy.z()) * axis_angle_rotation(y, rpy.y()) *
         axis_angle_rotation(x, rpy.x());
}

Vec3 rpy_from_rotation(const Rotation& r) {
  const double sp = std::clamp(-r(2, 0), -1.0, 1.0);
  const double pitch = std::asin(sp);
  if (std::abs(sp) > 1.0 - 1e-12) {
    // Gimbal lock: only yaw - roll (or yaw + roll) is observable, put it all in yaw.
    const double yaw = std::atan2(-r(0, 1), r(1, 1));
    return {0.0, pitch, yaw};
  }
  return {std::atan2(r(2, 1), r(2, 2)), pitch, std::atan2(r(1, 0), r(0, 0))};
}

Quaternion quaternion_from_rotation(const Rotation& r) {
  Quaternion q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

Rotation rotation_from_quaternion(const Quaternion& q) { return q.normalized().toRotationMatrix(); }

double orthonormality_error(const Rotation& r) {
  const double ortho = (r.transpose() * r - Rotation::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(r.determinant() - 1.0));
}

bool is_rotation(const Rotation& r, double tol) {
  return r.allFinite() && orthonormality_error(r) <= tol;
}

Rotation orthonormalize(const Rotation& r) {
  Eigen::JacobiSVD<Rotation> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Rotation u = svd.matrixU();
  const Rotation& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

void renormalize_if_drifted(Transform& t) {
  if (orthonormality_error(t.rotation) > kRotationTolerance) t.rotation = orthonormalize(t.rotation);
}

double rotation_angle(const Rotation& r) {
  return std::acos(std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0));
}

bool is_finite(const Transform& t) { return t.rotation.allFinite() && t.translation.allFinite(); }

}  // namespace uvms

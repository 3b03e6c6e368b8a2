#pragma once

#include <optional>

#include "uvms/transform.hpp"

namespace uvms {

struct VehicleTeleopConfig {
  double dead_zone = 0.02;    // m of stylus displacement
  double linear_speed = 0.2;  // m/s
  double yaw_rate = 0.3;      // rad/s

  void validate() const;
};

/// Linear velocity in the vehicle frame plus yaw rate about its z axis.
struct VelocityCommand {
  Vec3 linear = Vec3::Zero();
  double yaw_rate = 0.0;

  bool is_zero() const { return linear.isZero(0.0) && yaw_rate == 0.0; }
  bool operator==(const VelocityCommand&) const = default;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

struct DominantAxis {
  Axis axis;
  int sign;  // +1 or -1

  bool operator==(const DominantAxis&) const = default;
};

/// current - anchor; orientation of the stylus plays no part.
Vec3 displacement_vector(const Vec3& anchor_position, const Vec3& current_position);

/// Axis of the largest |component|. Empty inside the dead zone (‖v‖ <= dead_zone)
/// and when the largest magnitude is shared by two or more components.
std::optional<DominantAxis> dominant_axis(const Vec3& v, double dead_zone);

/// Dual-stylus rule:
///   same dominant axis and sign on both devices -> constant translation along it;
///   both dominant on z with opposite signs      -> yaw (left +z, right -z is positive);
///   anything else                               -> zero.
/// `haptic_to_rov` maps haptic-frame directions to vehicle-frame directions.
VelocityCommand vehicle_command(const Vec3& left, const Vec3& right, const VehicleTeleopConfig& cfg,
                                const Rotation& haptic_to_rov = Rotation::Identity());

}  // namespace uvms

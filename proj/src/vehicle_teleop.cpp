#include "uvms/vehicle_teleop.hpp"

#include <cmath>

#include "uvms/errors.hpp"

namespace uvms {

void VehicleTeleopConfig::validate() const {
  if (!(dead_zone > 0.0 && linear_speed > 0.0 && yaw_rate > 0.0)) {
    throw ValidationError("vehicle teleop: dead_zone, linear_speed and yaw_rate must be positive");
  }
}

Vec3 displacement_vector(const Vec3& anchor_position, const Vec3& current_position) {
  return current_position - anchor_position;
}

std::optional<DominantAxis> dominant_axis(const Vec3& v, double dead_zone) {
  if (!(v.norm() > dead_zone)) return std::nullopt;
  const Vec3 mag = v.cwiseAbs();
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (mag[i] > mag[best]) best = i;
  }
  for (int i = 0; i < 3; ++i) {
    if (i != best && mag[i] == mag[best]) return std::nullopt;
  }
  return DominantAxis{static_cast<Axis>(best), v[best] > 0.0 ? 1 : -1};
}

VelocityCommand vehicle_command(const Vec3& left, const Vec3& right, const VehicleTeleopConfig& cfg,
                                const Rotation& haptic_to_rov) {
  const auto l = dominant_axis(left, cfg.dead_zone);
  const auto r = dominant_axis(right, cfg.dead_zone);
  VelocityCommand cmd;
  if (!l || !r || l->axis != r->axis) return cmd;

  if (l->sign == r->sign) {
    const Vec3 direction = haptic_to_rov.col(static_cast<int>(l->axis)) * l->sign;
    cmd.linear = cfg.linear_speed * direction;
  } else if (l->axis == Axis::Z) {
    cmd.yaw_rate = l->sign > 0 ? cfg.yaw_rate : -cfg.yaw_rate;
  }
  return cmd;
}

}  // namespace uvms

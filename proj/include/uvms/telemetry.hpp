#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "uvms/kinematics.hpp"
#include "uvms/vehicle_teleop.hpp"

namespace uvms {

enum class InputMode { Idle, ArmLeft, ArmRight, ArmBoth, Vehicle };

std::string_view to_string(InputMode m);
InputMode input_mode_from_string(std::string_view s);
bool arm_clutched(InputMode m, int arm);

struct ArmTelemetry {
  JointVector q_cmd = JointVector::Zero();
  JointVector q = JointVector::Zero();
  Transform ee_cmd;     // FK(q_cmd), vehicle frame
  Transform ee_actual;  // FK(q), vehicle frame
};

/// One row per simulation step.
struct TelemetryRecord {
  double time = 0.0;
  std::array<ArmTelemetry, 2> arms;
  std::array<double, 2> gripper{0.0, 0.0};
  Vec3 vehicle_position = Vec3::Zero();
  double vehicle_yaw = 0.0;
  VelocityCommand vehicle_cmd;
  bool caged = false;
  InputMode mode = InputMode::Idle;
};

/// Column order:
///   time,
///   for arm in (left, right):
///     <arm>_q_cmd1..6, <arm>_q1..6,
///     <arm>_ee_cmd_{x,y,z,qw,qx,qy,qz}, <arm>_ee_{x,y,z,qw,qx,qy,qz},
///   left_gripper, right_gripper,
///   vehicle_{x,y,z,yaw}, vehicle_cmd_{vx,vy,vz,yaw_rate},
///   grasp (free|caged), mode (idle|arm_left|arm_right|arm_both|vehicle)
std::string telemetry_header();
std::string format_row(const TelemetryRecord& r);

/// Throws ParseError with the offending line number.
TelemetryRecord parse_row(std::string_view line, std::size_t line_no = 0);
std::vector<TelemetryRecord> read_telemetry(std::istream& in);

class TelemetryWriter {
 public:
  explicit TelemetryWriter(std::ostream& out);
  void write(const TelemetryRecord& r);
  std::size_t rows() const { return rows_; }

 private:
  std::ostream& out_;
  std::size_t rows_ = 0;
};

}  // namespace uvms

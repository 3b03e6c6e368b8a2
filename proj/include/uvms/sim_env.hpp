#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uvms/kinematics.hpp"
#include "uvms/resolved_rate.hpp"
#include "uvms/telemetry.hpp"
#include "uvms/vehicle_teleop.hpp"

namespace uvms {

/// Vehicle pose in the world (z up). Roll and pitch are structurally zero.
struct VehicleState {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;                // (-π, π]
  Vec3 velocity = Vec3::Zero();    // vehicle frame, m/s
  double yaw_rate = 0.0;           // rad/s

  /// World pose of the vehicle frame.
  Transform pose() const;
};

struct SimParams {
  double vehicle_tau = 0.5;  // s, first-order velocity response
  double joint_tau = 0.15;   // s, first-order joint tracking lag
  /// Constant joint offset emulating sag under load.
  JointVector joint_disturbance = (JointVector() << 0.0, -0.02, -0.008, 0.0, 0.0, 0.0).finished();
  double gripper_rate = 2.0;     // open-fraction per second
  double cage_radius = 0.06;     // m
  double grip_closed = 0.2;      // fraction below which a gripper counts as closed
  double grip_release = 0.5;     // fraction above which a grasp is released
  double joint_noise = 0.0;      // rad, std-dev of per-step joint noise (seeded)
  std::uint64_t seed = 0;

  void validate() const;
};

struct ManipulatorSimState {
  JointVector q = JointVector::Zero();      // actual
  JointVector q_cmd = JointVector::Zero();  // commanded by the rate controller
  double gripper = 0.0;                     // open fraction in [0, 1]
  bool gripper_open_target = false;
  JointVector disturbance = JointVector::Zero();
  std::optional<DesiredPose> target;        // last end-effector target, kept after release
  bool limited = false;
};

struct SceneObject {
  std::string id;
  Transform pose;  // world
  Vec3 half_extents = Vec3::Constant(0.05);
  bool graspable = true;
};

enum class GraspStatus { Free, Caged };

struct GraspState {
  GraspStatus status = GraspStatus::Free;
  std::string object_id;
  Transform object_in_midpoint;  // fixed while caged
  int axis = 0;                  // object axis the grippers straddle
  double width = 0.0;            // object size along `axis`

  bool caged() const { return status == GraspStatus::Caged; }
};

/// Static description the world is stepped against.
struct WorldModel {
  std::array<KinematicChain, 2> chains;  // left, right
  RateLimits limits;
  SimParams params;
};

struct WorldState {
  std::uint64_t tick = 0;
  double time = 0.0;
  VehicleState vehicle;
  std::array<ManipulatorSimState, 2> arms;
  std::vector<SceneObject> objects;
  GraspState grasp;
  std::mt19937_64 rng;
};

WorldState initial_world(const WorldModel& model, const std::array<JointVector, 2>& q0,
                         const VehicleState& vehicle, std::vector<SceneObject> objects);

VehicleState step_vehicle(const VehicleState& state, const VelocityCommand& cmd, double dt,
                          double tau);

/// First-order tracking of q_cmd + disturbance, clamped to the joint limits.
ManipulatorSimState step_manipulator(const KinematicChain& chain, const ManipulatorSimState& state,
                                     const JointVector& q_cmd, double dt, double tau);

ManipulatorSimState set_gripper(const ManipulatorSimState& state, bool open);
ManipulatorSimState step_gripper(const ManipulatorSimState& state, double dt, double rate);

/// World positions of the two gripper frames (actual joint state).
std::array<Vec3, 2> gripper_positions(const WorldModel& model, const WorldState& world);

/// Frame centred between the grippers, x toward the right gripper, z as close
/// to world up as the x axis allows.
Transform midpoint_frame(const Vec3& left, const Vec3& right);

/// Next grasp state: attaches when both grippers are closed and straddle
/// opposite faces of a graspable object, detaches on open or over-separation.
GraspState grasp_check(const WorldModel& model, const WorldState& world);

struct StepInputs {
  std::array<std::optional<DesiredPose>, 2> arm_targets;  // vehicle frame; overwrites the held target
  VelocityCommand vehicle_cmd;
  std::array<bool, 2> gripper_toggle{false, false};
  InputMode mode = InputMode::Idle;
};

struct StepFlags {
  bool limited = false;
  bool damped = false;
  bool non_finite = false;
};

struct StepOutput {
  WorldState world;
  TelemetryRecord record;
  StepFlags flags;
};

StepOutput step_world(const WorldModel& model, const WorldState& world, const StepInputs& inputs,
                      double dt);

TelemetryRecord make_record(const WorldModel& model, const WorldState& world,
                            const VelocityCommand& cmd, InputMode mode);

}  // namespace uvms

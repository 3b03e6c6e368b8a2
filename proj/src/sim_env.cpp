#include "uvms/sim_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uvms/errors.hpp"

namespace uvms {

namespace {

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

double face_distance(const Vec3& p, const Vec3& half, int axis, int sign) {
  double sq = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = k == axis ? p[k] - sign * half[k] : std::max(std::abs(p[k]) - half[k], 0.0);
    sq += d * d;
  }
  return std::sqrt(sq);
}

/// Grippers `a`, `b` (object frame) straddle opposite faces with the object
/// centre between them. Returns the straddled axis; when several qualify, the
/// one whose faces are closest.
std::optional<int> caging_axis(const Vec3& a, const Vec3& b, const Vec3& half, double radius) {
  const Vec3 ab = b - a;
  if ((-a).dot(ab) <= 0.0 || (-b).dot(-ab) <= 0.0) return std::nullopt;
  std::optional<int> best;
  double best_gap = radius;
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {1, -1}) {
      const double gap = std::max(face_distance(a, half, axis, sign), face_distance(b, half, axis, -sign));
      if (best ? gap < best_gap : gap <= radius) {
        best = axis;
        best_gap = gap;
      }
    }
  }
  return best;
}

}  // namespace

Transform VehicleState::pose() const {
  return {axis_angle_rotation(Vec3::UnitZ(), yaw), position};
}

void SimParams::validate() const {
  if (!(vehicle_tau > 0.0 && joint_tau > 0.0 && gripper_rate > 0.0 && cage_radius > 0.0)) {
    throw ValidationError("sim: time constants, gripper rate and cage radius must be positive");
  }
  if (!(grip_closed >= 0.0 && grip_closed < grip_release && grip_release <= 1.0)) {
    throw ValidationError("sim: need 0 <= grip_closed < grip_release <= 1");
  }
  if (!joint_disturbance.allFinite() || !(joint_noise >= 0.0)) {
    throw ValidationError("sim: disturbance must be finite and noise non-negative");
  }
}

WorldState initial_world(const WorldModel& model, const std::array<JointVector, 2>& q0,
                         const VehicleState& vehicle, std::vector<SceneObject> objects) {
  WorldState w;
  w.vehicle = vehicle;
  w.vehicle.yaw = wrap_angle(vehicle.yaw);
  for (int i = 0; i < 2; ++i) {
    if (!model.chains[i].within_limits(q0[i])) {
      throw ValidationError("initial configuration of arm " + std::to_string(i) +
                            " violates joint limits");
    }
    ManipulatorSimState& arm = w.arms[i];
    arm.q_cmd = q0[i];
    arm.disturbance = model.params.joint_disturbance;
    arm.q = clamp_to_limits(model.chains[i], q0[i] + arm.disturbance);
  }
  for (const SceneObject& o : objects) {
    if (!(o.half_extents.array() > 0.0).all()) {
      throw ValidationError("object '" + o.id + "' needs positive half extents");
    }
  }
  w.objects = std::move(objects);
  w.rng.seed(model.params.seed);
  return w;
}

VehicleState step_vehicle(const VehicleState& state, const VelocityCommand& cmd, double dt,
                          double tau) {
  const double alpha = std::min(1.0, dt / tau);
  VehicleState next = state;
  next.velocity += (cmd.linear - state.velocity) * alpha;
  next.yaw_rate += (cmd.yaw_rate - state.yaw_rate) * alpha;
  next.position += axis_angle_rotation(Vec3::UnitZ(), state.yaw) * next.velocity * dt;
  next.yaw = wrap_angle(state.yaw + next.yaw_rate * dt);
  return next;
}

ManipulatorSimState step_manipulator(const KinematicChain& chain, const ManipulatorSimState& state,
                                     const JointVector& q_cmd, double dt, double tau) {
  const double alpha = std::min(1.0, dt / tau);
  ManipulatorSimState next = state;
  next.q_cmd = q_cmd;
  next.q = state.q + (q_cmd + state.disturbance - state.q) * alpha;
  next.q = clamp_to_limits(chain, next.q, &next.limited);
  return next;
}

ManipulatorSimState set_gripper(const ManipulatorSimState& state, bool open) {
  ManipulatorSimState next = state;
  next.gripper_open_target = open;
  return next;
}

ManipulatorSimState step_gripper(const ManipulatorSimState& state, double dt, double rate) {
  ManipulatorSimState next = state;
  const double target = state.gripper_open_target ? 1.0 : 0.0;
  const double max_step = rate * dt;
  next.gripper = state.gripper + std::clamp(target - state.gripper, -max_step, max_step);
  next.gripper = std::clamp(next.gripper, 0.0, 1.0);
  return next;
}

std::array<Vec3, 2> gripper_positions(const WorldModel& model, const WorldState& world) {
  const Transform vehicle = world.vehicle.pose();
  std::array<Vec3, 2> out;
  for (int i = 0; i < 2; ++i) {
    out[i] = vehicle.apply(forward_kinematics(model.chains[i], world.arms[i].q).ee.translation);
  }
  return out;
}

Transform midpoint_frame(const Vec3& left, const Vec3& right) {
  Transform m;
  m.translation = 0.5 * (left + right);
  const Vec3 span = right - left;
  const double n = span.norm();
  const Vec3 x = n > 1e-12 ? Vec3(span / n) : Vec3::UnitX();
  const Vec3 up = std::abs(x.z()) < 0.95 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 y = up.cross(x).normalized();
  m.rotation.col(0) = x;
  m.rotation.col(1) = y;
  m.rotation.col(2) = x.cross(y);
  return m;
}

GraspState grasp_check(const WorldModel& model, const WorldState& world) {
  const SimParams& p = model.params;
  const auto& arms = world.arms;
  const auto [left, right] = gripper_positions(model, world);
  GraspState g = world.grasp;

  if (g.caged()) {
    const bool opened = arms[0].gripper > p.grip_release || arms[1].gripper > p.grip_release;
    const bool stretched = (right - left).norm() > g.width + 2.0 * p.cage_radius;
    if (opened || stretched) g = GraspState{};
    return g;
  }

  if (arms[0].gripper >= p.grip_closed || arms[1].gripper >= p.grip_closed) return g;
  for (const SceneObject& obj : world.objects) {
    if (!obj.graspable) continue;
    const Transform to_object = invert(obj.pose);
    const auto axis = caging_axis(to_object.apply(left), to_object.apply(right), obj.half_extents,
                                  p.cage_radius);
    if (!axis) continue;
    g.status = GraspStatus::Caged;
    g.object_id = obj.id;
    g.axis = *axis;
    g.width = 2.0 * obj.half_extents[*axis];
    g.object_in_midpoint = invert(midpoint_frame(left, right)) * obj.pose;
    return g;
  }
  return g;
}

TelemetryRecord make_record(const WorldModel& model, const WorldState& world,
                            const VelocityCommand& cmd, InputMode mode) {
  TelemetryRecord r;
  r.time = world.time;
  for (int i = 0; i < 2; ++i) {
    const ManipulatorSimState& arm = world.arms[i];
    r.arms[i].q_cmd = arm.q_cmd;
    r.arms[i].q = arm.q;
    r.arms[i].ee_cmd = forward_kinematics(model.chains[i], arm.q_cmd).ee;
    r.arms[i].ee_actual = forward_kinematics(model.chains[i], arm.q).ee;
    r.gripper[i] = arm.gripper;
  }
  r.vehicle_position = world.vehicle.position;
  r.vehicle_yaw = world.vehicle.yaw;
  r.vehicle_cmd = cmd;
  r.caged = world.grasp.caged();
  r.mode = mode;
  return r;
}

StepOutput step_world(const WorldModel& model, const WorldState& world, const StepInputs& inputs,
                      double dt) {
  if (!(dt > 0.0)) throw ValidationError("step_world: dt must be positive");
  StepOutput out{world, {}, {}};
  WorldState& w = out.world;

  for (int i = 0; i < 2; ++i) {
    ManipulatorSimState& arm = w.arms[i];
    if (inputs.arm_targets[i]) arm.target = inputs.arm_targets[i];
    JointVector q_cmd = arm.q_cmd;
    if (arm.target) {
      const RmrcStepResult step = rmrc_step(model.chains[i], arm.q_cmd, *arm.target, model.limits);
      q_cmd = step.q_next;
      out.flags.damped = out.flags.damped || step.damped;
      out.flags.limited = out.flags.limited || step.limited;
    }
    arm = step_manipulator(model.chains[i], arm, q_cmd, dt, model.params.joint_tau);
    if (model.params.joint_noise > 0.0) {
      std::normal_distribution<double> noise(0.0, model.params.joint_noise);
      for (int j = 0; j < kJointCount; ++j) arm.q[j] += noise(w.rng);
      arm.q = clamp_to_limits(model.chains[i], arm.q);
    }
    if (inputs.gripper_toggle[i]) arm = set_gripper(arm, !arm.gripper_open_target);
    arm = step_gripper(arm, dt, model.params.gripper_rate);
  }

  w.vehicle = step_vehicle(w.vehicle, inputs.vehicle_cmd, dt, model.params.vehicle_tau);
  w.tick += 1;
  w.time = static_cast<double>(w.tick) * dt;

  w.grasp = grasp_check(model, w);
  if (w.grasp.caged()) {
    const auto [left, right] = gripper_positions(model, w);
    for (SceneObject& obj : w.objects) {
      if (obj.id == w.grasp.object_id) obj.pose = midpoint_frame(left, right) * w.grasp.object_in_midpoint;
    }
  }

  out.record = make_record(model, w, inputs.vehicle_cmd, inputs.mode);
  out.flags.non_finite = !w.vehicle.position.allFinite() || !std::isfinite(w.vehicle.yaw) ||
                         !w.arms[0].q.allFinite() || !w.arms[1].q.allFinite() ||
                         !w.arms[0].q_cmd.allFinite() || !w.arms[1].q_cmd.allFinite();
  return out;
}

}  // namespace uvms

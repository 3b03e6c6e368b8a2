#include "uvms/teleop_mapping.hpp"

#include <string>

#include "uvms/errors.hpp"

namespace uvms {

std::string_view to_string(Device d) { return d == Device::Left ? "left" : "right"; }

Device device_from_string(std::string_view s) {
  if (s == "left") return Device::Left;
  if (s == "right") return Device::Right;
  throw ParseError("unknown device '" + std::string(s) + "'");
}

Registration Registration::standard() {
  Rotation r;
  r << 0, 0, -1,  //
      -1, 0, 0,   //
      0, 1, 0;
  return {Transform::from_rotation(r)};
}

ArmClutch begin_clutch(const StylusSample& stylus, const Transform& current_ee,
                       const Registration& reg, double scale) {
  ArmClutch clutch;
  clutch.anchor_stylus = stylus.pose;
  clutch.anchor_ee = current_ee;
  clutch.bridge = invert(current_ee) * reg.rov_from_haptic * stylus.pose;
  clutch.scale = scale;
  clutch.active = true;
  return clutch;
}

Transform stylus_relative(const ArmClutch& clutch, const StylusSample& current) {
  if (!clutch.active) throw ClutchInactive();
  return invert(clutch.anchor_stylus) * current.pose;
}

Transform map_relative(const ArmClutch& clutch, const Transform& rel) {
  if (!clutch.active) throw ClutchInactive();
  Transform scaled = rel;
  scaled.translation *= clutch.scale;
  return clutch.bridge * scaled * invert(clutch.bridge);
}

DesiredPose desired_ee_pose(const ArmClutch& clutch, const StylusSample& current) {
  Transform desired = clutch.anchor_ee * map_relative(clutch, stylus_relative(clutch, current));
  renormalize_if_drifted(desired);
  return DesiredPose::from_transform(desired);
}

std::string_view to_string(TeleopEventKind k) {
  switch (k) {
    case TeleopEventKind::ClutchEngaged: return "clutch_engaged";
    case TeleopEventKind::ClutchReleased: return "clutch_released";
    case TeleopEventKind::GripperToggled: return "gripper_toggled";
    case TeleopEventKind::VehicleModeEntered: return "vehicle_mode_entered";
    case TeleopEventKind::VehicleModeExited: return "vehicle_mode_exited";
  }
  return "unknown";
}

ButtonUpdate update_buttons(const DeviceButtonState& previous, const StylusSample& sample,
                            const ButtonTiming& timing) {
  using Phase = DeviceButtonState::Phase;
  const double t = sample.timestamp;
  if (t < previous.last_timestamp) {
    throw OutOfOrderTimestamp("sample at t=" + std::to_string(t) + " precedes t=" +
                              std::to_string(previous.last_timestamp));
  }

  ButtonUpdate out{previous, {}};
  DeviceButtonState& s = out.state;
  s.last_timestamp = t;
  s.manip = sample.button_manip;
  s.vehicle = sample.button_vehicle;
  const bool both = s.manip && s.vehicle;
  const bool none = !s.manip && !s.vehicle;

  auto enter = [&](Phase p) {
    s.phase = p;
    s.phase_since = t;
  };
  auto chord = [&] {
    if (t - s.last_toggle >= timing.retoggle_debounce) {
      out.events.push_back({TeleopEventKind::GripperToggled, sample.device});
      s.last_toggle = t;
    }
    enter(Phase::Chord);
  };
  auto commit_pending = [&] {
    if (s.pending_manip) {
      out.events.push_back({TeleopEventKind::ClutchEngaged, sample.device});
      enter(Phase::Clutch);
    } else {
      enter(Phase::VehicleHold);
    }
  };
  auto settle = [&] { enter(none ? Phase::Idle : Phase::Latched); };

  switch (s.phase) {
    case Phase::Idle:
      if (both) {
        chord();
      } else if (!none) {
        s.pending_manip = s.manip;
        enter(Phase::Pending);
      }
      break;
    case Phase::Pending: {
      const double elapsed = t - s.phase_since;
      if (both) {
        if (elapsed <= timing.simultaneity_window) {
          chord();
        } else {
          commit_pending();
        }
      } else if (none) {
        enter(Phase::Idle);
      } else if (s.manip != s.pending_manip) {
        s.pending_manip = s.manip;
        enter(Phase::Pending);
      } else if (elapsed >= timing.simultaneity_window) {
        commit_pending();
      }
      break;
    }
    case Phase::Clutch:
      if (!s.manip) {
        out.events.push_back({TeleopEventKind::ClutchReleased, sample.device});
        settle();
      }
      break;
    case Phase::VehicleHold:
      if (!s.vehicle) settle();
      break;
    case Phase::Chord:
    case Phase::Latched:
      if (none) enter(Phase::Idle);
      break;
  }
  return out;
}

ButtonUpdate force_release(const DeviceButtonState& previous, Device device) {
  using Phase = DeviceButtonState::Phase;
  ButtonUpdate out{previous, {}};
  if (previous.phase == Phase::Clutch) {
    out.events.push_back({TeleopEventKind::ClutchReleased, device});
  }
  if (previous.phase != Phase::Idle) out.state.phase = Phase::Latched;
  if (!previous.manip && !previous.vehicle) out.state.phase = Phase::Idle;
  return out;
}

}  // namespace uvms
